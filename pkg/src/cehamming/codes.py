"""Extended Hamming checks and the constant-excitation dual-rail code family.

The family parameter ``r >= 2`` gives ``n = 2**(r+1)`` physical qubits and
``k = 2**r - (r+1)`` logical qubits.  Qubits ``0 .. 2**r - 1`` carry the outer
code; qubit ``m + 2**r`` is the dual-rail partner of qubit ``m``.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from cehamming import gf2
from cehamming.pauli import (
    PauliOperator,
    build_basis,
    commutes,
    format_pauli,
    parse_pauli,
    symplectic_product,
)


class CodeConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class CheckMatrix:
    """Parity checks of the extended Hamming code on ``2**r`` bits.

    ``rows[i]`` has bit ``m`` set when position ``m`` is in the support of
    check ``i``.
    """

    r: int
    rows: tuple[int, ...]

    @property
    def length(self) -> int:
        return 1 << self.r

    def supports(self) -> list[list[int]]:
        return [[m for m in range(self.length) if row >> m & 1] for row in self.rows]

    def row_strings(self) -> list[str]:
        """Rows as bit strings with position 0 leftmost."""
        return ["".join(str(row >> m & 1) for m in range(self.length)) for row in self.rows]

    def rank(self) -> int:
        return gf2.rank(self.rows)

    def codewords(self) -> list[int]:
        """Every word annihilated by the checks (exhaustive, keep ``r`` small)."""
        return gf2.span(gf2.nullspace(self.rows, self.length))

    def min_distance(self) -> int:
        return min(w.bit_count() for w in self.codewords() if w)


def _check_r(r: int) -> None:
    if not isinstance(r, int) or r < 2:
        raise CodeConstructionError(f"family parameter r must be an integer >= 2, got {r!r}")


def extended_hamming_checks(r: int) -> CheckMatrix:
    """Row 0 covers positions with the top bit set; row ``i`` covers positions whose bit ``r-i`` is clear."""
    _check_r(r)
    length = 1 << r
    rows = [sum(1 << m for m in range(length) if m >> (r - 1) & 1)]
    for i in range(1, r + 1):
        rows.append(sum(1 << m for m in range(length) if not m >> (r - i) & 1))
    return CheckMatrix(r, tuple(rows))


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    r: int | None = None
    claimed_distance: int | None = 3
    name: str = ""

    @property
    def m(self) -> int:
        """Number of generators (syndrome length)."""
        return len(self.generators)

    @property
    def label(self) -> str:
        return self.name or f"[[{self.n},{self.k},{self.claimed_distance}]]"

    def generator_strings(self) -> list[str]:
        return [format_pauli(g) for g in self.generators]

    def with_generators(self, generators) -> StabilizerCode:
        return StabilizerCode(
            self.n,
            self.k,
            tuple(generators),
            self.logical_x,
            self.logical_z,
            self.r,
            self.claimed_distance,
            self.name,
        )


def _ce_generators(r: int) -> list[PauliOperator]:
    half = 1 << r
    n = 2 * half
    gens = []
    for support in extended_hamming_checks(r).supports():
        x_mask = z_mask = 0
        for m in support:
            x_mask |= 1 << m | 1 << (m + half)
            z_mask |= 1 << (half - 1 - m)
        # mirrored Z support never meets the X support, so no Y letters arise
        gens.append(PauliOperator(n, x_mask, z_mask, 0))
    for m in range(half):
        gens.append(PauliOperator(n, 0, 1 << m | 1 << (m + half), 2))
    return gens


def build_ce_code(r: int) -> StabilizerCode:
    """The ``[[2**(r+1), 2**r-(r+1), 3]]`` constant-excitation code."""
    _check_r(r)
    n = 1 << (r + 1)
    k = (1 << r) - (r + 1)
    gens = tuple(_ce_generators(r))
    bare = StabilizerCode(n, k, gens, r=r)
    lx, lz = derive_logical_operators(bare)
    return StabilizerCode(n, k, gens, tuple(lx), tuple(lz), r=r, name=f"ce-r{r}")


def derive_logical_operators(
    code: StabilizerCode,
) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Complete the generators to a symplectic basis and return ``(logical_x, logical_z)``.

    Logical Z operators are taken Z-type where the code allows it (reduced
    against the Z-type part of the stabilizer, which pushes them onto low
    qubits); the remainder and all logical X operators come from the
    normalizer, solved so that ``logical_x[i]`` anticommutes only with
    ``logical_z[i]``.  Output depends only on the generator list.
    """
    gens = list(code.generators)
    n = code.n
    full = (1 << n) - 1
    for i, g in enumerate(gens):
        for h in gens[i + 1 :]:
            if not commutes(g, h):
                raise CodeConstructionError(f"generators {format_pauli(g)} and {format_pauli(h)} anticommute")
    basis = build_basis(gens, n)
    if basis.rank != len(gens):
        raise CodeConstructionError(f"generators are dependent (rank {basis.rank} < {len(gens)})")
    stab_rows = list(basis.rows)

    def sp(a: int, b: int) -> int:
        return gf2.parity((a >> n) & b ^ (a & full) & (b >> n))

    # Z-type stabilizers are exactly the rref rows without an x part
    stab_z = [row for row in stab_rows if not row >> n]
    z_normalizer = gf2.nullspace([g.x_mask for g in gens], n)
    reduced = [gf2.reduce(z, stab_z) for z in z_normalizer]
    logical_z = []
    span_rows = list(stab_rows)
    for z in sorted(gf2.rref(v for v in reduced if v), key=lambda v: v.bit_length()):
        if len(logical_z) == code.k:
            break
        if gf2.reduce(z, span_rows):
            logical_z.append(z)
            span_rows = gf2.rref(span_rows + [z])

    # v commutes with g iff v has even overlap with g's x/z-swapped vector
    swapped = [(g.z_mask << n) | g.x_mask for g in gens]
    normalizer = gf2.nullspace(swapped, 2 * n)
    for v in sorted(normalizer):
        if len(logical_z) == code.k:
            break
        if gf2.reduce(v, span_rows) and not any(sp(v, z) for z in logical_z):
            logical_z.append(gf2.reduce(v, stab_rows))
            span_rows = gf2.rref(span_rows + [v])
    if len(logical_z) != code.k:
        raise CodeConstructionError(f"found {len(logical_z)} logical Z operators, expected {code.k}")

    pool = []
    for v in sorted(normalizer):
        if len(pool) == code.k:
            break
        if gf2.reduce(v, span_rows):
            pool.append(v)
            span_rows = gf2.rref(span_rows + [v])
    if len(pool) != code.k:
        raise CodeConstructionError("normalizer too small for the stated k")

    # Gauss-Jordan on the pairing matrix: pool[i] -> dual of logical_z[i]
    rows = [[sp(v, z) for z in logical_z] for v in pool]
    for col in range(code.k):
        piv = next((i for i in range(col, code.k) if rows[i][col]), None)
        if piv is None:
            raise CodeConstructionError("logical operators are not symplectically paired")
        rows[col], rows[piv] = rows[piv], rows[col]
        pool[col], pool[piv] = pool[piv], pool[col]
        for i in range(code.k):
            if i != col and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[col])]
                pool[i] ^= pool[col]
    for j in range(code.k):
        for i in range(j):
            if sp(pool[j], pool[i]):
                pool[j] ^= logical_z[i]
    logical_x = [gf2.reduce(v, stab_rows) for v in pool]

    def op(v: int) -> PauliOperator:
        return PauliOperator(n, v >> n, v & full, 0)

    return [op(v) for v in logical_x], [op(v) for v in logical_z]


CANONICAL_8_1_3_GENERATORS = (
    "ZZXXIIXX",
    "XXZZXXII",
    "XZXZXIXI",
    "-ZIIIZIII",
    "-IZIIIZII",
    "-IIZIIIZI",
    "-IIIZIIIZ",
)
CANONICAL_8_1_3_LOGICAL_X = "IZZYIIIX"
CANONICAL_8_1_3_LOGICAL_Z = "ZZZZIIII"


def canonical_code_8_1_3() -> StabilizerCode:
    """The published ``[[8,1,3]]`` instance with its printed logical operators."""
    return StabilizerCode(
        n=8,
        k=1,
        generators=tuple(parse_pauli(s) for s in CANONICAL_8_1_3_GENERATORS),
        logical_x=(parse_pauli(CANONICAL_8_1_3_LOGICAL_X),),
        logical_z=(parse_pauli(CANONICAL_8_1_3_LOGICAL_Z),),
        r=2,
        name="ce-8-1-3",
    )


def format_code(code: StabilizerCode) -> str:
    r = code.r if code.r is not None else "-"
    lines = [f"{code.n} {code.k} {r}"]
    lines += [format_pauli(p) for p in code.generators]
    lines += [format_pauli(p) for p in code.logical_x]
    lines += [format_pauli(p) for p in code.logical_z]
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> StabilizerCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise CodeConstructionError("empty code file")
    try:
        n_s, k_s, r_s = lines[0].split()
        n, k = int(n_s), int(k_s)
        r = None if r_s == "-" else int(r_s)
    except ValueError:
        raise CodeConstructionError(f"bad header line {lines[0]!r}; expected 'n k r'") from None
    body = [parse_pauli(s) for s in lines[1:]]
    m = n - k
    if len(body) != m + 2 * k:
        raise CodeConstructionError(f"expected {m + 2 * k} operator lines, found {len(body)}")
    if any(p.n != n for p in body):
        raise CodeConstructionError(f"operator length differs from n = {n}")
    return StabilizerCode(
        n, k, tuple(body[:m]), tuple(body[m : m + k]), tuple(body[m + k :]), r=r, name=f"file-r{r}"
    )


def write_code_file(code: StabilizerCode, path: str | os.PathLike) -> None:
    """Write atomically: a temp file in the target directory is renamed into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(format_code(code))
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def read_code_file(path: str | os.PathLike) -> StabilizerCode:
    return parse_code(Path(path).read_text())
