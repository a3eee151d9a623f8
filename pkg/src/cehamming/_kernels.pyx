# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Must stay call-compatible with ``_fallback``.

State-vector masks here use the amplitude-index layout: qubit ``j`` is index
bit ``n - 1 - j``.  Pauli masks in ``zero_syndrome_patterns`` use the operator
layout (bit ``j`` is qubit ``j``).
"""

import numpy as np

from libc.math cimport cos, sin, sqrt
from libc.stdint cimport int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

ctypedef double complex cplx

cdef double PROB_EPS = 1e-12
cdef double SUCCESS_TOL = 1e-9


cdef inline cplx ipow(int64_t k) noexcept nogil:
    k &= 3
    if k == 0:
        return 1.0
    if k == 1:
        return 1.0j
    if k == 2:
        return -1.0
    return -1.0j


cdef inline void apply_pauli(const cplx* src, cplx* dst, Py_ssize_t dim,
                             uint64_t ax, uint64_t az, int64_t ph) noexcept nogil:
    # (P psi)[y] = i^ph (-1)^{|az & (y^ax)|} psi[y^ax]
    cdef cplx c = ipow(ph)
    cdef Py_ssize_t y
    cdef uint64_t src_idx
    for y in range(dim):
        src_idx = <uint64_t>y ^ ax
        if __builtin_popcountll(az & src_idx) & 1:
            dst[y] = -c * src[src_idx]
        else:
            dst[y] = c * src[src_idx]


cdef inline void apply_collective(cplx* psi, Py_ssize_t dim, int n, double theta,
                                  const uint8_t* weights, cplx* table) noexcept nogil:
    cdef int w
    cdef double ang
    cdef Py_ssize_t y
    for w in range(n + 1):
        ang = -theta * (n - 2 * w)
        table[w] = cos(ang) + 1.0j * sin(ang)
    for y in range(dim):
        psi[y] = psi[y] * table[weights[y]]


def simulate_shots(
    const cplx[::1] psi0,
    int n,
    const uint64_t[::1] gen_x,
    const uint64_t[::1] gen_z,
    const int64_t[::1] gen_ph,
    const uint64_t[::1] err_x,
    const uint64_t[::1] err_z,
    const int64_t[::1] err_ph,
    const double[::1] thetas,
    const double[:, ::1] meas_u,
    const int64_t[::1] table_index,
    const uint64_t[::1] corr_x,
    const uint64_t[::1] corr_z,
    const int64_t[::1] corr_ph,
    bint pauli_after_cc,
):
    """Run one noisy trajectory per row and return ``(syndromes, success, heralded)``."""
    cdef Py_ssize_t dim = psi0.shape[0]
    cdef Py_ssize_t shots = err_x.shape[0]
    cdef Py_ssize_t m = gen_x.shape[0]
    syndromes_arr = np.zeros(shots, dtype=np.int64)
    success_arr = np.zeros(shots, dtype=np.uint8)
    herald_arr = np.zeros(shots, dtype=np.uint8)
    cdef int64_t[::1] syndromes = syndromes_arr
    cdef uint8_t[::1] success = success_arr
    cdef uint8_t[::1] herald = herald_arr

    cdef cplx* a = <cplx*>malloc(dim * sizeof(cplx))
    cdef cplx* b = <cplx*>malloc(dim * sizeof(cplx))
    cdef cplx* table = <cplx*>malloc((n + 1) * sizeof(cplx))
    cdef uint8_t* weights = <uint8_t*>malloc(dim * sizeof(uint8_t))
    # factors[i * dim + x] = i^ph (-1)^{|gz & x|}: generator i's phase on basis state x
    cdef cplx* factors = <cplx*>malloc(m * dim * sizeof(cplx))
    cdef cplx* f
    if a == NULL or b == NULL or table == NULL or weights == NULL or factors == NULL:
        free(a); free(b); free(table); free(weights); free(factors)
        raise MemoryError()

    cdef cplx* cur
    cdef cplx* nxt
    cdef cplx* tmp
    cdef cplx acc, c
    cdef Py_ssize_t s, y, i
    cdef uint64_t gx, src_idx
    cdef int64_t synd, idx
    cdef double p_plus, prob, scale, sgn
    cdef int bit

    for y in range(dim):
        weights[y] = __builtin_popcountll(<uint64_t>y)
    for i in range(m):
        c = ipow(gen_ph[i])
        for y in range(dim):
            if __builtin_popcountll(gen_z[i] & <uint64_t>y) & 1:
                factors[i * dim + y] = -c
            else:
                factors[i * dim + y] = c

    try:
        with nogil:
            for s in range(shots):
                memcpy(a, &psi0[0], dim * sizeof(cplx))
                cur = a
                nxt = b
                if pauli_after_cc:
                    apply_collective(cur, dim, n, thetas[s], weights, table)
                    apply_pauli(cur, nxt, dim, err_x[s], err_z[s], err_ph[s])
                    tmp = cur; cur = nxt; nxt = tmp
                else:
                    apply_pauli(cur, nxt, dim, err_x[s], err_z[s], err_ph[s])
                    tmp = cur; cur = nxt; nxt = tmp
                    apply_collective(cur, dim, n, thetas[s], weights, table)

                synd = 0
                for i in range(m):
                    gx = gen_x[i]
                    f = factors + i * dim
                    # nxt <- g psi, then <psi|g|psi>
                    acc = 0.0
                    for y in range(dim):
                        src_idx = <uint64_t>y ^ gx
                        nxt[y] = f[src_idx] * cur[src_idx]
                        acc = acc + cur[y].conjugate() * nxt[y]
                    p_plus = 0.5 * (1.0 + acc.real)
                    # certain outcomes leave the state unchanged (up to rounding)
                    if p_plus > 1.0 - PROB_EPS:
                        continue
                    if p_plus < PROB_EPS:
                        synd |= (<int64_t>1) << i
                        continue
                    if meas_u[s, i] < p_plus:
                        bit = 0
                    else:
                        bit = 1
                    if bit == 0:
                        sgn = 1.0
                        prob = p_plus
                    else:
                        sgn = -1.0
                        prob = 1.0 - p_plus
                    if prob > 1.0:
                        prob = 1.0
                    scale = 0.5 / sqrt(prob)
                    for y in range(dim):
                        nxt[y] = (cur[y] + sgn * nxt[y]) * scale
                    tmp = cur; cur = nxt; nxt = tmp
                    synd |= (<int64_t>bit) << i
                syndromes[s] = synd

                idx = table_index[synd]
                if idx < 0:
                    herald[s] = 1
                else:
                    apply_pauli(cur, nxt, dim, corr_x[idx], corr_z[idx], corr_ph[idx])
                    tmp = cur; cur = nxt; nxt = tmp
                acc = 0.0
                for y in range(dim):
                    acc = acc + psi0[y].conjugate() * cur[y]
                success[s] = 1 if sqrt(acc.real * acc.real + acc.imag * acc.imag) >= 1.0 - SUCCESS_TOL else 0
    finally:
        free(a)
        free(b)
        free(table)
        free(weights)
        free(factors)
    return syndromes_arr, success_arr, herald_arr


def zero_syndrome_patterns(int n, int w, const uint64_t[::1] gen_x, const uint64_t[::1] gen_z):
    """Weight-``w`` Paulis commuting with every generator, in witness order.

    Order: supports as ascending index tuples in lexicographic order, then
    letters per support position with X < Y < Z, first position slowest.
    Returns ``(x_masks, z_masks)`` as uint64 arrays.
    """
    if w < 1 or w > n or n > 64:
        raise ValueError("need 1 <= w <= n <= 64")
    cdef Py_ssize_t m = gen_x.shape[0]
    cdef int pos[64]
    cdef int typ[64]
    cdef int j, t
    cdef Py_ssize_t i
    cdef uint64_t x, z, bitm
    cdef bint ok
    found_x = []
    found_z = []
    for j in range(w):
        pos[j] = j
    while True:
        for j in range(w):
            typ[j] = 0
        while True:
            x = 0
            z = 0
            for j in range(w):
                bitm = (<uint64_t>1) << pos[j]
                t = typ[j]
                if t <= 1:
                    x |= bitm
                if t >= 1:
                    z |= bitm
            ok = True
            for i in range(m):
                if __builtin_popcountll((x & gen_z[i]) ^ (z & gen_x[i])) & 1:
                    ok = False
                    break
            if ok:
                found_x.append(x)
                found_z.append(z)
            # next letter assignment, last position fastest
            j = w - 1
            while j >= 0 and typ[j] == 2:
                typ[j] = 0
                j -= 1
            if j < 0:
                break
            typ[j] += 1
        # next combination
        j = w - 1
        while j >= 0 and pos[j] == n - w + j:
            j -= 1
        if j < 0:
            break
        pos[j] += 1
        for t in range(j + 1, w):
            pos[t] = pos[t - 1] + 1
    return np.array(found_x, dtype=np.uint64), np.array(found_z, dtype=np.uint64)
