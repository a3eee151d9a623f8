"""Depolarizing + collective-coherent noise, syndrome extraction and lookup decoding.

Every shot consumes one row of ``draws_per_shot(code)`` uniforms laid out as

    [0, n)            one per qubit: identity below 1-p, else X/Y/Z in thirds
    n                 rotation angle / 2pi when the rotation time is random
    [n+1, n+1+m)      one per generator measurement
    rest              padding to a multiple of four

so the single-shot reference path and the batched kernels consume the same
random stream and agree shot for shot.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

from cehamming.codes import StabilizerCode
from cehamming.pauli import PauliOperator, build_basis, format_pauli, identity, in_group, multiply, single
from cehamming.statevec import (
    MAX_DENSE_QUBITS,
    StateVector,
    apply_collective_z,
    apply_pauli,
    fidelity,
    index_form,
    logical_basis_state,
    logical_state,
    pauli_action,
)

PROB_EPS = 1e-12
SUCCESS_TOL = 1e-9
_TYPES = "XYZ"


class Ordering(enum.Enum):
    CC_AFTER_PAULI = "cc-after-pauli"
    PAULI_AFTER_CC = "pauli-after-cc"


class DecodingError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseConfig:
    """Per-qubit depolarizing rate ``p`` plus a collective Z rotation.

    ``delta_t`` is the rotation time in units where hbar/2 = 1; ``None``
    draws it uniformly from [0, 2pi) for every shot.
    """

    p: float
    delta_t: float | None = 0.0
    ordering: Ordering = Ordering.CC_AFTER_PAULI

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "ordering", Ordering(self.ordering))


def draws_per_shot(code: StabilizerCode) -> int:
    need = code.n + 1 + code.m
    return -(-need // 4) * 4


def pauli_syndrome(e: PauliOperator, code: StabilizerCode) -> str:
    """Anticommutation pattern with the generators, ``g_0`` first."""
    if e.n != code.n:
        raise ValueError(f"size mismatch: error on {e.n} qubits, code on {code.n}")
    return "".join(
        str(((e.x_mask & g.z_mask) ^ (e.z_mask & g.x_mask)).bit_count() & 1) for g in code.generators
    )


def syndrome_to_int(s: str) -> int:
    """Bit ``i`` of the integer is generator ``i``."""
    return sum(1 << i for i, c in enumerate(s) if c == "1")


def int_to_syndrome(v: int, m: int) -> str:
    return "".join(str(v >> i & 1) for i in range(m))


@dataclass(frozen=True)
class SyndromeTable:
    m: int
    entries: dict[str, PauliOperator] = field(hash=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, syndrome: str) -> bool:
        return syndrome in self.entries

    @property
    def known(self) -> frozenset[str]:
        return frozenset(self.entries)

    def lookup(self, syndrome: str) -> PauliOperator | None:
        return self.entries.get(syndrome)

    def dense(self) -> tuple[np.ndarray, list[PauliOperator]]:
        """``index[s]`` is the position of syndrome ``s`` in the correction list, or -1."""
        index = np.full(1 << self.m, -1, dtype=np.int64)
        corrections = []
        for s, op in self.entries.items():
            index[syndrome_to_int(s)] = len(corrections)
            corrections.append(op)
        return index, corrections


@functools.lru_cache(maxsize=32)
def build_lookup(code: StabilizerCode, strict: bool = True) -> SyndromeTable:
    """Map every weight-1 syndrome to its first weight-1 error (qubit ascending, X < Y < Z).

    With ``strict=False`` a clash between inequivalent errors keeps the first
    claimant instead of raising; the exact analysis uses this for codes that
    cannot correct every single-qubit error.
    """
    basis = build_basis(list(code.generators), code.n)
    entries = {"0" * code.m: identity(code.n)}
    for q in range(code.n):
        for t in _TYPES:
            e = single(code.n, q, t)
            s = pauli_syndrome(e, code)
            prior = entries.get(s)
            if prior is None:
                entries[s] = e
            elif strict and not in_group(multiply(prior, e), basis):
                raise DecodingError(
                    f"code does not correct weight-1: {format_pauli(prior)} and {format_pauli(e)} share syndrome {s}"
                )
    return SyndromeTable(code.m, entries)


def error_from_uniforms(u: np.ndarray, p: float) -> PauliOperator:
    """Depolarizing error from one uniform per qubit."""
    x_mask = z_mask = 0
    third = p / 3
    for q, v in enumerate(np.asarray(u, dtype=np.float64)):
        if v < 1 - p:
            continue
        t = min(int((v - (1 - p)) / third), 2)
        if t <= 1:
            x_mask |= 1 << q
        if t >= 1:
            z_mask |= 1 << q
    return PauliOperator(len(u), x_mask, z_mask, 0)


def errors_from_uniforms(u: np.ndarray, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`error_from_uniforms`; returns operator-layout ``(x, z)`` masks."""
    u = np.asarray(u, dtype=np.float64)
    hit = u >= 1 - p
    t = np.zeros(u.shape, dtype=np.int64)
    if p > 0:
        t = np.minimum(((u - (1 - p)) / (p / 3)).astype(np.int64), 2)
    bits = np.uint64(1) << np.arange(u.shape[1], dtype=np.uint64)
    x = np.bitwise_or.reduce(np.where(hit & (t <= 1), bits, np.uint64(0)), axis=1)
    z = np.bitwise_or.reduce(np.where(hit & (t >= 1), bits, np.uint64(0)), axis=1)
    return x.astype(np.uint64), z.astype(np.uint64)


def sample_depolarizing(n: int, p: float, rng: np.random.Generator) -> PauliOperator:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must lie in [0, 1], got {p}")
    return error_from_uniforms(rng.random(n), p)


def _measure(state: StateVector, code: StabilizerCode, uniforms) -> tuple[str, StateVector]:
    amps = state.amplitudes
    bits = []
    for g, u in zip(code.generators, uniforms):
        g_amps = pauli_action(amps, g)
        p_plus = 0.5 * (1.0 + np.vdot(amps, g_amps).real)
        if p_plus > 1 - PROB_EPS:
            bit = 0
        elif p_plus < PROB_EPS:
            bit = 1
        else:
            bit = 0 if u < p_plus else 1
        prob = min(p_plus if bit == 0 else 1.0 - p_plus, 1.0)
        if prob <= 0:
            raise RuntimeError("measurement selected a zero-probability branch")
        sgn = 1.0 if bit == 0 else -1.0
        amps = (amps + sgn * g_amps) * (0.5 / np.sqrt(prob))
        bits.append(str(bit))
    return "".join(bits), StateVector(state.n, amps)


def measure_syndrome(state: StateVector, code: StabilizerCode, rng: np.random.Generator) -> tuple[str, StateVector]:
    """Projectively measure each signed generator in order.

    Bit ``i`` is 0 for the +1 outcome of the signed generator, so codewords
    read all zeros.  Returns the syndrome and the collapsed state; the input
    is left untouched.
    """
    if state.n != code.n:
        raise ValueError(f"size mismatch: state on {state.n} qubits, code on {code.n}")
    if code.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense simulation capped at {MAX_DENSE_QUBITS} qubits")
    return _measure(state, code, rng.random(code.m))


@dataclass(frozen=True)
class ShotResult:
    success: bool
    heralded_uncorrectable: bool
    sampled_error: PauliOperator
    syndrome: str = ""
    delta_t: float = 0.0


def ideal_codeword(code: StabilizerCode, logical_input) -> StateVector:
    """Encoded state for a logical basis index or an amplitude sequence."""
    if isinstance(logical_input, (int, np.integer)):
        return logical_basis_state(code, int(logical_input))
    return logical_state(code, logical_input)


def run_shot(
    code: StabilizerCode,
    logical_input,
    noise: NoiseConfig,
    rng: np.random.Generator,
    error: PauliOperator | None = None,
    ideal: StateVector | None = None,
) -> ShotResult:
    """One trajectory: sample error, rotate, measure, look up, correct, compare.

    ``error`` forces the Pauli error instead of sampling it (the uniforms
    are still drawn so the stream position does not depend on it).
    """
    if code.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense simulation capped at {MAX_DENSE_QUBITS} qubits")
    u = rng.random(draws_per_shot(code))
    n = code.n
    if error is None:
        error = error_from_uniforms(u[:n], noise.p)
    theta = noise.delta_t if noise.delta_t is not None else 2 * np.pi * u[n]
    if ideal is None:
        ideal = ideal_codeword(code, logical_input)
    state = ideal.copy()
    if noise.ordering is Ordering.CC_AFTER_PAULI:
        apply_collective_z(apply_pauli(state, error), theta)
    else:
        apply_pauli(apply_collective_z(state, theta), error)
    syndrome, state = _measure(state, code, u[n + 1 : n + 1 + code.m])
    correction = build_lookup(code).lookup(syndrome)
    heralded = correction is None
    if not heralded:
        apply_pauli(state, correction)
    ok = fidelity(ideal, state) >= 1 - SUCCESS_TOL
    return ShotResult(ok, heralded, error, syndrome, float(theta))


@dataclass(frozen=True)
class ShotBatch:
    syndromes: np.ndarray
    success: np.ndarray
    heralded: np.ndarray

    @property
    def failures(self) -> int:
        return int(len(self.success) - np.count_nonzero(self.success))


def run_shots(
    code: StabilizerCode,
    ideal: StateVector,
    noise: NoiseConfig,
    uniforms: np.ndarray,
    backend=None,
) -> ShotBatch:
    """Batched :func:`run_shot` over rows of ``uniforms`` using a kernel backend."""
    from cehamming import kernels

    impl = backend or kernels
    n, m = code.n, code.m
    uniforms = np.asarray(uniforms, dtype=np.float64)
    ex, ez = errors_from_uniforms(uniforms[:, :n], noise.p)
    # operator layout -> amplitude-index layout; Y letters carry a factor i
    perm = np.uint64(1) << np.arange(n, dtype=np.uint64)
    rev = np.uint64(1) << (np.uint64(n - 1) - np.arange(n, dtype=np.uint64))
    ex_i = np.bitwise_or.reduce(np.where((ex[:, None] & perm) != 0, rev, np.uint64(0)), axis=1).astype(np.uint64)
    ez_i = np.bitwise_or.reduce(np.where((ez[:, None] & perm) != 0, rev, np.uint64(0)), axis=1).astype(np.uint64)
    eph = (np.bitwise_count(ex & ez).astype(np.int64)) % 4
    if noise.delta_t is None:
        thetas = 2 * np.pi * uniforms[:, n]
    else:
        thetas = np.full(len(uniforms), float(noise.delta_t))
    meas_u = np.ascontiguousarray(uniforms[:, n + 1 : n + 1 + m])

    gen = [index_form(g) for g in code.generators]
    index, corrections = build_lookup(code).dense()
    corr = [index_form(c) for c in corrections]
    syndromes, success, heralded = impl.simulate_shots(
        np.ascontiguousarray(ideal.amplitudes),
        n,
        np.array([g[0] for g in gen], dtype=np.uint64),
        np.array([g[1] for g in gen], dtype=np.uint64),
        np.array([g[2] for g in gen], dtype=np.int64),
        np.ascontiguousarray(ex_i),
        np.ascontiguousarray(ez_i),
        np.ascontiguousarray(eph),
        np.ascontiguousarray(thetas),
        meas_u,
        index,
        np.array([c[0] for c in corr], dtype=np.uint64),
        np.array([c[1] for c in corr], dtype=np.uint64),
        np.array([c[2] for c in corr], dtype=np.int64),
        noise.ordering is Ordering.PAULI_AFTER_CC,
    )
    return ShotBatch(np.asarray(syndromes), np.asarray(success, dtype=bool), np.asarray(heralded, dtype=bool))


def residual_class(error: PauliOperator, code: StabilizerCode) -> tuple[str, PauliOperator | None, str]:
    """Decode ``error`` algebraically: ``(syndrome, correction, class)``.

    ``class`` is ``"stabilizer"`` (corrected up to phase), ``"logical"``
    (miscorrected), or ``"heralded"`` (syndrome missing from the table).
    """
    s = pauli_syndrome(error, code)
    correction = build_lookup(code).lookup(s)
    if correction is None:
        return s, None, "heralded"
    residual = multiply(correction, error)
    if in_group(residual, list(code.generators)):
        return s, correction, "stabilizer"
    return s, correction, "logical"
