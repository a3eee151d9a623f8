"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and results; shots are processed in vectorized batches
instead of one at a time.
"""

from __future__ import annotations

import itertools

import numpy as np

PROB_EPS = 1e-12
SUCCESS_TOL = 1e-9
_IPOW = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)).astype(np.int64)


def _apply_batched(psi, idx, ax, az, ph):
    """Apply per-row Paulis ``i^ph X^ax Z^az`` to the rows of ``psi``."""
    src = idx[None, :] ^ ax[:, None]
    sign = 1 - 2 * (_popcount(src & az[:, None]) & 1)
    rows = np.arange(psi.shape[0])[:, None]
    return _IPOW[ph & 3][:, None] * sign * psi[rows, src]


def _collective(psi, n, weights, thetas):
    return psi * np.exp(-1j * thetas[:, None] * (n - 2 * weights)[None, :])


def simulate_shots(
    psi0,
    n,
    gen_x,
    gen_z,
    gen_ph,
    err_x,
    err_z,
    err_ph,
    thetas,
    meas_u,
    table_index,
    corr_x,
    corr_z,
    corr_ph,
    pauli_after_cc,
):
    psi0 = np.asarray(psi0, dtype=np.complex128)
    dim = psi0.shape[0]
    shots = len(err_x)
    idx = np.arange(dim, dtype=np.uint64)
    weights = _popcount(idx)
    batch = max(1, (1 << 21) // dim)
    syndromes = np.zeros(shots, dtype=np.int64)
    success = np.zeros(shots, dtype=np.uint8)
    herald = np.zeros(shots, dtype=np.uint8)
    for lo in range(0, shots, batch):
        hi = min(shots, lo + batch)
        sl = slice(lo, hi)
        b = hi - lo
        ex = np.asarray(err_x[sl], dtype=np.uint64)
        ez = np.asarray(err_z[sl], dtype=np.uint64)
        eph = np.asarray(err_ph[sl], dtype=np.int64)
        th = np.asarray(thetas[sl], dtype=np.float64)
        psi = np.broadcast_to(psi0, (b, dim))
        if pauli_after_cc:
            psi = _apply_batched(_collective(psi, n, weights, th), idx, ex, ez, eph)
        else:
            psi = _collective(_apply_batched(psi, idx, ex, ez, eph), n, weights, th)
        synd = np.zeros(b, dtype=np.int64)
        for i in range(len(gen_x)):
            gx = np.full(b, gen_x[i], dtype=np.uint64)
            gz = np.full(b, gen_z[i], dtype=np.uint64)
            gph = np.full(b, gen_ph[i], dtype=np.int64)
            gpsi = _apply_batched(psi, idx, gx, gz, gph)
            p_plus = 0.5 * (1.0 + np.einsum("bi,bi->b", psi.conj(), gpsi).real)
            u = np.asarray(meas_u[sl, i])
            bit = np.where(p_plus > 1 - PROB_EPS, 0, np.where(p_plus < PROB_EPS, 1, (u >= p_plus).astype(np.int64)))
            sgn = 1.0 - 2.0 * bit
            prob = np.minimum(np.where(bit == 0, p_plus, 1.0 - p_plus), 1.0)
            psi = (psi + sgn[:, None] * gpsi) * (0.5 / np.sqrt(prob))[:, None]
            synd |= bit.astype(np.int64) << i
        syndromes[sl] = synd
        cidx = np.asarray(table_index)[synd]
        unknown = cidx < 0
        safe = np.where(unknown, 0, cidx)
        cx = np.where(unknown, np.uint64(0), np.asarray(corr_x, dtype=np.uint64)[safe])
        cz = np.where(unknown, np.uint64(0), np.asarray(corr_z, dtype=np.uint64)[safe])
        cph = np.where(unknown, 0, np.asarray(corr_ph, dtype=np.int64)[safe])
        psi = _apply_batched(psi, idx, cx, cz, cph)
        overlap = np.abs(psi @ psi0.conj())
        success[sl] = overlap >= 1 - SUCCESS_TOL
        herald[sl] = unknown
    return syndromes, success, herald


def iter_zero_syndrome(n, w, gens):
    """Yield ``(x, z)`` of weight-``w`` Paulis commuting with ``gens`` (pairs of ints).

    Works for any ``n``; order matches the compiled kernel.
    """
    for support in itertools.combinations(range(n), w):
        for types in itertools.product((0, 1, 2), repeat=w):
            x = z = 0
            for q, t in zip(support, types):
                if t <= 1:
                    x |= 1 << q
                if t >= 1:
                    z |= 1 << q
            if all(((x & gz) ^ (z & gx)).bit_count() % 2 == 0 for gx, gz in gens):
                yield x, z


def zero_syndrome_patterns(n, w, gen_x, gen_z):
    if w < 1 or w > n or n > 64:
        raise ValueError("need 1 <= w <= n <= 64")
    gens = [(int(a), int(b)) for a, b in zip(gen_x, gen_z)]
    found = list(iter_zero_syndrome(n, w, gens))
    xs = [x for x, _ in found]
    zs = [z for _, z in found]
    return np.array(xs, dtype=np.uint64), np.array(zs, dtype=np.uint64)
