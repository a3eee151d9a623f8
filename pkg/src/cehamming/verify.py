"""Exhaustive checks of the structural claims: distance, explicit logicals, constant excitation."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from cehamming import _fallback, kernels
from cehamming.codes import StabilizerCode, _check_r, build_ce_code, extended_hamming_checks
from cehamming.pauli import (
    KERNEL_MAX_QUBITS,
    PauliOperator,
    build_basis,
    commutes,
    format_pauli,
    from_letters,
    in_group,
)

ENUMERATION_BUDGET = 10**9
MAX_SEARCH_WEIGHT = 4


class VerificationError(AssertionError):
    """A claimed property does not hold for the constructed code."""


class BudgetExceededError(RuntimeError):
    pass


class NotConstantExcitationError(ValueError):
    pass


@dataclass(frozen=True)
class GreaterThan:
    """Distance sentinel: no logical operator of weight ``<= bound`` exists."""

    bound: int

    def __str__(self) -> str:
        return f"greater than {self.bound}"


@dataclass(frozen=True)
class VerificationReport:
    code_id: str
    commutation_ok: bool
    independence_ok: bool
    distance_found: int | GreaterThan
    witness: PauliOperator | None
    excitation_number: int | str

    def to_dict(self) -> dict:
        d = self.distance_found
        return {
            "code": self.code_id,
            "commutation_ok": self.commutation_ok,
            "independence_ok": self.independence_ok,
            "distance": d if isinstance(d, int) else str(d),
            "witness": format_pauli(self.witness) if self.witness is not None else None,
            "excitation": self.excitation_number,
        }


def _check_budget(n: int, w_max: int) -> None:
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    if w_max > MAX_SEARCH_WEIGHT:
        raise BudgetExceededError(f"w_max > {MAX_SEARCH_WEIGHT} is not supported")
    cost = 3**w_max * comb(n, w_max)
    if cost > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"weight-{w_max} search on {n} qubits needs {cost:.3g} patterns (budget {ENUMERATION_BUDGET:.0e})"
        )


def min_weight_logical(code: StabilizerCode, w_max: int) -> PauliOperator | None:
    """Smallest logical operator of weight ``<= w_max``, or ``None``.

    Ties resolve to the lexicographically smallest support, then letters
    ordered X < Y < Z.
    """
    _check_budget(code.n, w_max)
    basis = build_basis(list(code.generators), code.n)
    gens = [(g.x_mask, g.z_mask) for g in code.generators]
    for w in range(1, min(w_max, code.n) + 1):
        if code.n <= KERNEL_MAX_QUBITS:
            gx = np.array([g[0] for g in gens], dtype=np.uint64)
            gz = np.array([g[1] for g in gens], dtype=np.uint64)
            xs, zs = kernels.zero_syndrome_patterns(code.n, w, gx, gz)
            patterns = zip(xs.tolist(), zs.tolist())
        else:
            patterns = _fallback.iter_zero_syndrome(code.n, w, gens)
        for x, z in patterns:
            cand = PauliOperator(code.n, x, z, 0)
            if not basis.contains(cand):
                return cand
    return None


def compute_distance(code: StabilizerCode, w_max: int) -> int | GreaterThan:
    witness = min_weight_logical(code, w_max)
    return GreaterThan(w_max) if witness is None else witness.weight


def claimed_weight3_logical(r: int) -> PauliOperator:
    """The weight-3 logical ``X_{h/2-1} Z_{h/2} X_{h/2-1+h}`` with ``h = 2**r``."""
    _check_r(r)
    h = 1 << r
    op = from_letters(2 * h, {h // 2 - 1: "X", h // 2: "Z", h // 2 - 1 + h: "X"})
    code = build_ce_code(r)
    if not all(commutes(op, g) for g in code.generators):
        raise VerificationError(f"{format_pauli(op)} does not commute with every generator")
    if in_group(op, list(code.generators)):
        raise VerificationError(f"{format_pauli(op)} is a stabilizer, not a logical")
    return op


def outer_checks(r: int) -> list[PauliOperator]:
    """Combined X/Z checks of the bare extended Hamming code on ``2**r`` qubits."""
    h = 1 << r
    out = []
    for support in extended_hamming_checks(r).supports():
        x_mask = sum(1 << m for m in support)
        z_mask = sum(1 << (h - 1 - m) for m in support)
        out.append(PauliOperator(h, x_mask, z_mask, 0))
    return out


def outer_code_undetectable(r: int) -> PauliOperator:
    """The weight-2 operator ``X_{h/2-1} Z_{h/2}`` that the outer checks miss."""
    _check_r(r)
    h = 1 << r
    op = from_letters(h, {h // 2 - 1: "X", h // 2: "Z"})
    if not all(commutes(op, g) for g in outer_checks(r)):
        raise VerificationError(f"{format_pauli(op)} is detected by the outer checks")
    return op


def verify_constant_excitation(code: StabilizerCode) -> int:
    """Return the excitation number ``2**r`` shared by every codeword.

    Each signed pair check ``-Z_m Z_{m+2**r}`` in the stabilizer group forces
    odd parity on its pair, one excitation per pair.  For ``n <= 16`` every
    logical basis state is also scanned in the computational basis.
    """
    if code.r is None or code.n != 1 << (code.r + 1):
        raise NotConstantExcitationError("not a CE code of this family: family parameter r missing or inconsistent")
    h = 1 << code.r
    basis = build_basis(list(code.generators), code.n)
    for m in range(h):
        pair = PauliOperator(code.n, 0, 1 << m | 1 << (m + h), 2)
        if not in_group(pair, basis, mod_phase=False):
            raise NotConstantExcitationError(
                f"not a CE code of this family: {format_pauli(pair)} is not in the stabilizer group"
            )
    if code.n <= 16:
        from cehamming.statevec import excitation_spectrum, logical_basis_state

        for bits in range(1 << code.k):
            try:
                spec = excitation_spectrum(logical_basis_state(code, bits))
            except ValueError as exc:
                raise NotConstantExcitationError(f"cannot prepare logical state {bits}: {exc}") from exc
            if abs(spec.get(h, 0.0) - 1.0) > 1e-10:
                raise NotConstantExcitationError(f"logical state {bits} has spectrum {spec}")
    return h


def verify_code(code: StabilizerCode, w_max: int = 3) -> VerificationReport:
    gens = list(code.generators)
    commutation_ok = all(commutes(a, b) for i, a in enumerate(gens) for b in gens[i + 1 :])
    independence_ok = build_basis(gens, code.n).rank == len(gens)
    witness = min_weight_logical(code, w_max) if commutation_ok else None
    distance = GreaterThan(w_max) if witness is None else witness.weight
    try:
        excitation: int | str = verify_constant_excitation(code)
    except NotConstantExcitationError:
        excitation = "non-constant"
    return VerificationReport(code.label, commutation_ok, independence_ok, distance, witness, excitation)


def report_ok(report: VerificationReport, code: StabilizerCode) -> bool:
    """All claims hold: commuting, independent, distance not below the claim, CE."""
    if not (report.commutation_ok and report.independence_ok):
        return False
    if not isinstance(report.excitation_number, int):
        return False
    d = report.distance_found
    claimed = code.claimed_distance
    if claimed is not None:
        if isinstance(d, int) and d != claimed:
            return False
        if isinstance(d, GreaterThan) and d.bound >= claimed:
            return False
    return True
