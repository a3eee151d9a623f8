"""Signed n-qubit Pauli operators in binary symplectic form.

An operator is ``i**phase_exp`` times a tensor product of single-qubit
letters, with bit ``j`` of ``x_mask``/``z_mask`` describing qubit ``j``
(qubit 0 is the leftmost character of the string form).  The letter ``Y`` is
``i X Z``, so ``parse_pauli("Y")`` is Hermitian with ``phase_exp == 0``.

Masks are Python integers, so any qubit count works here; the compiled
kernels take at most ``KERNEL_MAX_QUBITS``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from cehamming import gf2

KERNEL_MAX_QUBITS = 64

_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_SYMBOL = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_MINUS = ("-", "−")


class PauliParseError(ValueError):
    """Raised for malformed Pauli strings; ``position`` is the offending index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits beyond the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self)!r})"

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x_mask, self.z_mask, self.phase_exp + 2)

    @property
    def weight(self) -> int:
        return weight(self)

    @property
    def letters(self) -> str:
        return format_pauli(self, signed=False)

    @property
    def symplectic(self) -> int:
        """The 2n-bit vector ``x_mask || z_mask`` (x in the high half)."""
        return self.x_mask << self.n | self.z_mask

    def unsigned(self) -> PauliOperator:
        return PauliOperator(self.n, self.x_mask, self.z_mask, 0)

    def commutes_with(self, other: PauliOperator) -> bool:
        return commutes(self, other)

    def letter(self, qubit: int) -> str:
        return _SYMBOL[(self.x_mask >> qubit & 1, self.z_mask >> qubit & 1)]

    def support(self) -> list[int]:
        mask = self.x_mask | self.z_mask
        return [j for j in range(self.n) if mask >> j & 1]


def identity(n: int) -> PauliOperator:
    return PauliOperator(n, 0, 0, 0)


def single(n: int, qubit: int, letter: str) -> PauliOperator:
    """Weight-one operator ``letter`` on ``qubit``."""
    x, z = _LETTERS[letter]
    return PauliOperator(n, x << qubit, z << qubit, 0)


def from_letters(n: int, letters: dict[int, str], phase_exp: int = 0) -> PauliOperator:
    """Build an operator from ``{qubit: letter}``, e.g. ``{1: "X", 2: "Z"}``."""
    x_mask = z_mask = 0
    for q, c in letters.items():
        x, z = _LETTERS[c]
        x_mask |= x << q
        z_mask |= z << q
    return PauliOperator(n, x_mask, z_mask, phase_exp)


def parse_pauli(text: str, sign: int = 1) -> PauliOperator:
    """Parse ``[+|-|i|+i|-i]`` followed by letters over ``IXYZ``.

    ``sign=-1`` negates whatever the text says, so ``parse_pauli("ZIIIZIII", -1)``
    and ``parse_pauli("-ZIIIZIII")`` are the same operator.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    body = text.strip()
    phase = 0 if sign == 1 else 2
    pos = 0
    if body[:1] == "+":
        pos = 1
    elif body[:1] in _MINUS:
        phase += 2
        pos = 1
    if body[pos : pos + 1] == "i":
        phase += 1
        pos += 1
    letters = body[pos:]
    if not letters:
        raise PauliParseError("empty Pauli string", pos)
    x_mask = z_mask = 0
    for j, c in enumerate(letters):
        try:
            x, z = _LETTERS[c]
        except KeyError:
            raise PauliParseError(f"invalid Pauli character {c!r}", pos + j) from None
        x_mask |= x << j
        z_mask |= z << j
    return PauliOperator(len(letters), x_mask, z_mask, phase)


def format_pauli(p: PauliOperator, signed: bool = True) -> str:
    letters = "".join(p.letter(j) for j in range(p.n))
    return _PREFIX[p.phase_exp] + letters if signed else letters


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """The product ``p @ q`` with exact phase."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")
    x = p.x_mask ^ q.x_mask
    z = p.z_mask ^ q.z_mask
    # letters -> X^x Z^z form, reorder Z^z1 X^x2, then back to letters
    phase = (
        p.phase_exp
        + q.phase_exp
        + (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x & z).bit_count()
    )
    return PauliOperator(p.n, x, z, phase)


def product(ops: Sequence[PauliOperator], n: int) -> PauliOperator:
    out = identity(n)
    for op in ops:
        out = multiply(out, op)
    return out


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    return gf2.parity(p.x_mask & q.z_mask ^ p.z_mask & q.x_mask)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")
    return symplectic_product(p, q) == 0


def weight(p: PauliOperator) -> int:
    return (p.x_mask | p.z_mask).bit_count()


@dataclass(frozen=True)
class SymplecticBasis:
    """Reduced echelon basis of the symplectic row space of a generator list.

    ``combos[i]`` records which input generators (bit ``g`` = generator ``g``)
    XOR to ``rows[i]``; it lets :func:`in_group` rebuild exact phases.
    """

    n: int
    rows: tuple[int, ...]
    combos: tuple[int, ...]
    generators: tuple[PauliOperator, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def decompose(self, vec: int) -> tuple[int, int]:
        """Return ``(residual, combo)``; ``residual == 0`` iff ``vec`` is in the span."""
        combo = 0
        for row, c in zip(self.rows, self.combos):
            if vec >> (row.bit_length() - 1) & 1:
                vec ^= row
                combo ^= c
        return vec, combo

    def contains(self, p: PauliOperator) -> bool:
        return self.decompose(p.symplectic)[0] == 0


def build_basis(gens: Sequence[PauliOperator], n: int | None = None) -> SymplecticBasis:
    if n is None:
        if not gens:
            raise ValueError("qubit count required for an empty generator list")
        n = gens[0].n
    for g in gens:
        if g.n != n:
            raise ValueError(f"size mismatch: {g.n} vs {n} qubits")
    pivots: dict[int, tuple[int, int]] = {}
    for idx, g in enumerate(gens):
        v, c = g.symplectic, 1 << idx
        for piv in sorted(pivots, reverse=True):
            if v >> piv & 1:
                v ^= pivots[piv][0]
                c ^= pivots[piv][1]
        if not v:
            continue
        piv = v.bit_length() - 1
        for other, (row, rc) in pivots.items():
            if row >> piv & 1:
                pivots[other] = (row ^ v, rc ^ c)
        pivots[piv] = (v, c)
    order = sorted(pivots, reverse=True)
    return SymplecticBasis(
        n=n,
        rows=tuple(pivots[p][0] for p in order),
        combos=tuple(pivots[p][1] for p in order),
        generators=tuple(gens),
    )


def in_group(
    e: PauliOperator,
    gens: Sequence[PauliOperator] | SymplecticBasis,
    mod_phase: bool = True,
) -> bool:
    """Whether ``e`` lies in the group generated by ``gens``.

    With ``mod_phase=False`` the phase must match the product of the
    contributing generators taken in ascending index order.
    """
    basis = gens if isinstance(gens, SymplecticBasis) else build_basis(gens, e.n)
    if basis.n != e.n:
        raise ValueError(f"size mismatch: {e.n} vs {basis.n} qubits")
    residual, combo = basis.decompose(e.symplectic)
    if residual:
        return False
    if mod_phase:
        return True
    chosen = [g for i, g in enumerate(basis.generators) if combo >> i & 1]
    return product(chosen, e.n).phase_exp == e.phase_exp
