"""Acceptance criteria, one test each, with their stated tolerances and time limits.

Each test prints a PASS/FAIL line; the same lines are repeated in the pytest
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from cehamming.codes import build_ce_code, canonical_code_8_1_3, extended_hamming_checks
from cehamming.experiment import (
    SweepConfig,
    code_rate,
    comparison_ratio,
    exhaustive_low_weight_analysis,
    monte_carlo_sweep,
    no_weight2_quadratic_coefficient,
    bound_quadratic_coefficient,
    pseudo_threshold,
    threshold_bound,
)
from cehamming.noise import NoiseConfig, Ordering, build_lookup, ideal_codeword, pauli_syndrome, run_shot
from cehamming.pauli import (
    PauliOperator,
    build_basis,
    commutes,
    format_pauli,
    in_group,
    multiply,
    parse_pauli,
    single,
    weight,
)
from cehamming.statevec import (
    GateOp,
    StateVector,
    apply_collective_z,
    apply_gate,
    apply_pauli,
    codespace_projection,
    codeword_oracle_r2,
    encode_8_1_3,
    excitation_spectrum,
    fidelity,
    logical_state,
    resolve_encoder_gate_order,
)
from cehamming.verify import claimed_weight3_logical, compute_distance, min_weight_logical, verify_constant_excitation
from conftest import record_criterion

S2 = 1 / math.sqrt(2)


def matches_4_digits(value: float, printed: float) -> bool:
    """``printed`` is ``value`` rounded to 4 significant digits (either rounding of a tie)."""
    unit = 10 ** (math.floor(math.log10(abs(printed))) - 3)
    return abs(value - printed) <= unit / 2 + 1e-15


@contextmanager
def criterion(number: int, title: str, limit_s: float, notes: list[str]):
    start = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - start
    if failure is None and elapsed >= limit_s:
        failure = AssertionError(f"took {elapsed:.2f}s, limit {limit_s}s")
    detail = "; ".join(notes + [f"{elapsed:.2f}s of {limit_s}s"])
    if failure is not None:
        detail = f"{failure}; {detail}"
    record_criterion(number, title, failure is None, detail)
    if failure is not None:
        raise failure


def test_criterion_1_golden_generators(golden):
    notes = []
    with criterion(1, "golden generators and logicals", 1.0, notes):
        code = build_ce_code(2)
        assert code.generator_strings() == golden["generators_8_1_3"]
        lx, lz = parse_pauli(golden["logical_x_8_1_3"]), parse_pauli(golden["logical_z_8_1_3"])
        full = list(code.generators) + [code.logical_x[0], code.logical_z[0]]
        assert in_group(lx, full) and in_group(lz, full), "printed logicals outside <S, derived pair>"
        assert all(commutes(lx, g) and commutes(lz, g) for g in code.generators)
        assert not commutes(lx, lz)
        assert not in_group(lx, list(code.generators)) and not in_group(lz, list(code.generators))
        notes.append(f"derived X={format_pauli(code.logical_x[0])} Z={format_pauli(code.logical_z[0])}")


def test_criterion_2_syndrome_table(golden):
    notes = []
    with criterion(2, "syndrome table reproduction", 1.0, notes):
        code = canonical_code_8_1_3()
        rows = golden["syndrome_table_8_1_3"]
        assert len(rows) == 24
        for label, expected in rows.items():
            got = pauli_syndrome(single(8, int(label[1]), label[0]), code)
            assert got == expected, f"{label}: {got} != {expected}"
        shared = [pauli_syndrome(single(8, m, "Z"), code) for m in range(4)]
        assert shared == [pauli_syndrome(single(8, m + 4, "Z"), code) for m in range(4)]
        assert shared == golden["degenerate_z_syndromes"]
        assert len(build_lookup(code)) == 21
        notes.append("24/24 rows")


def test_criterion_3_distance():
    notes = []
    with criterion(3, "distance 3 for r = 2, 3, 4", 30.0, notes):
        for r in (2, 3, 4):
            code = build_ce_code(r)
            witness = min_weight_logical(code, 3)
            assert compute_distance(code, 3) == 3 and witness.weight == 3
            assert min_weight_logical(code, 2) is None
            claimed = claimed_weight3_logical(r)
            assert all(commutes(claimed, g) for g in code.generators)
            assert not in_group(claimed, list(code.generators))
            notes.append(f"r={r} witness {format_pauli(witness)}")


def test_criterion_4_constant_excitation():
    notes = []
    with criterion(4, "constant excitation and collective-Z immunity", 30.0, notes):
        rng = np.random.default_rng(20240404)
        for r in (2, 3):
            code = build_ce_code(r)
            assert verify_constant_excitation(code) == 1 << r
            worst = 1.0
            for _ in range(100):
                c = rng.normal(size=2**code.k) + 1j * rng.normal(size=2**code.k)
                psi = logical_state(code, c / np.linalg.norm(c))
                spec = excitation_spectrum(psi)
                assert set(spec) == {1 << r} and abs(spec[1 << r] - 1) < 1e-10
                out = apply_collective_z(psi.copy(), rng.uniform(0, 2 * np.pi))
                worst = min(worst, fidelity(psi, out))
            assert worst >= 1 - 1e-10
            notes.append(f"r={r} min fidelity {worst:.15f}")


def test_criterion_5_encoder():
    notes = []
    with criterion(5, "encoding circuit", 5.0, notes):
        res = resolve_encoder_gate_order()
        code = canonical_code_8_1_3()
        for alpha, beta in [(1, 0), (0, 1), (S2, S2), (S2, 1j * S2)]:
            out = encode_8_1_3(alpha, beta)
            assert codespace_projection(out, code)[0] >= 1 - 1e-10
            assert fidelity(out, codeword_oracle_r2((alpha, beta))) >= 1 - 1e-10
        notes.append(f"gate order {res.label} (rightmost first)")


def test_criterion_6_weight1_composite():
    notes = []
    with criterion(6, "weight-1 correction under collective rotation", 10.0, notes):
        code = canonical_code_8_1_3()
        ideal = ideal_codeword(code, 0)
        rng = np.random.default_rng(6)
        grid = [2 * math.pi * i / 16 for i in range(16)]
        ok = total = 0
        for j, t, dt in itertools.product(range(8), "XYZ", grid):
            shot = run_shot(code, 0, NoiseConfig(0.5, dt), rng, error=single(8, j, t), ideal=ideal)
            ok += shot.success
            total += 1
        assert (ok, total) == (384, 384), f"{ok}/{total}"
        notes.append(f"{ok}/{total}")


def test_criterion_7_noise_curves(golden):
    notes = []
    with criterion(7, "noise curves against the exact oracle", 300.0, notes):
        analysis = exhaustive_low_weight_analysis(canonical_code_8_1_3())
        want = golden["exact_counts_8_1_3"]
        assert analysis.counts == (1, 24, want["A2"])
        c = analysis.quadratic_coefficient
        assert c == Fraction(want["c"])
        grid = (1e-3, 5e-3, 1e-2)
        trials = 1_000_000
        rand = monte_carlo_sweep(SweepConfig(2, grid, trials, None, 42), with_analysis=False)
        fixed = monte_carlo_sweep(SweepConfig(2, grid, trials, 0.0, 42), with_analysis=False)
        for a, b in zip(rand.points, fixed.points):
            expected = analysis.failure_probability(a.p)
            sigma = math.sqrt(expected * (1 - expected) / trials)
            assert abs(a.failure_rate - expected) <= 3 * sigma + 30 * a.p**3, (a.p, a.failure_rate, expected)
            assert abs(a.failure_rate - b.failure_rate) <= 3 * sigma, (a.p, a.failure_rate, b.failure_rate)
            notes.append(f"p={a.p:g} random {a.failure_rate:.3e} fixed {b.failure_rate:.3e} oracle {expected:.3e}")
        n = 8
        notes.append(
            f"p^2 coefficient: claimed {bound_quadratic_coefficient(n)}, "
            f"without weight-2 correction {no_weight2_quadratic_coefficient(n)}, exact {c} = {float(c):.6g}"
        )
        notes.append("claimed coefficient NOT reproduced" if c != bound_quadratic_coefficient(n) else "reproduced")


def test_criterion_8_thresholds_and_rates(golden):
    notes = []
    with criterion(8, "threshold bound, ratio, rates, pseudo-threshold", 1.0, notes):
        assert matches_4_digits(threshold_bound(8), golden["threshold_bound_8"])
        assert matches_4_digits(comparison_ratio(), golden["comparison_ratio"])
        assert comparison_ratio() == pytest.approx(15 * 13 / (8 * 6))
        assert code_rate(2) == Fraction(1, 8)
        assert abs(float(code_rate(40)) - 0.5) < 1e-10
        pt = pseudo_threshold(exhaustive_low_weight_analysis(canonical_code_8_1_3()))
        assert pt is not None
        ratio = pt / threshold_bound(8)
        notes.append(f"bound {threshold_bound(8):.6g}, ratio {comparison_ratio():.6g}")
        notes.append(f"pseudo-threshold {pt:.6g} = {ratio:.4g} x 1/48")
        assert 0.5 <= ratio <= 2.0, f"pseudo-threshold {pt:.6g} is {ratio:.4g} x 1/48, outside a factor of 2"


# -- criterion 9: module invariants under randomized inputs -----------------

CASES = 1000


def _rand_pauli(rng, n):
    return PauliOperator(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))


def _pauli_properties(rng):
    for _ in range(CASES):
        n = int(rng.integers(1, 9))
        p, q, r = (_rand_pauli(rng, n) for _ in range(3))
        assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))
        pq, qp = multiply(p, q), multiply(q, p)
        assert (pq.x_mask, pq.z_mask) == (qp.x_mask, qp.z_mask)
        assert (pq.phase_exp - qp.phase_exp) % 4 == (0 if commutes(p, q) else 2)
        assert weight(pq) <= weight(p) + weight(q)
        text = "".join(rng.choice(list("IXYZ"), size=int(rng.integers(1, 65))))
        text = ["", "-", "i", "-i"][int(rng.integers(4))] + text
        assert format_pauli(parse_pauli(text)) == text
    gens = list(canonical_code_8_1_3().generators)
    for _ in range(CASES):
        mixed = list(gens)
        for _ in range(6):
            a, b = rng.integers(7, size=2)
            if a != b:
                mixed[a] = multiply(mixed[a], mixed[b])
        target = _rand_pauli(rng, 8)
        assert in_group(target, mixed) == in_group(target, gens)


def _code_properties(rng):
    for r in range(2, 7):
        code = build_ce_code(r)
        h = 1 << r
        gens = code.generators
        assert all(commutes(a, b) for i, a in enumerate(gens) for b in gens[i + 1 :])
        assert build_basis(list(gens)).rank == code.n - code.k
        assert code.k == h - (r + 1)
        for m in range(h):
            assert gens[r + 1 + m] == PauliOperator(code.n, 0, 1 << m | 1 << (m + h), 2)
    for r in (2, 3, 4):
        assert extended_hamming_checks(r).min_distance() == 4
        code = build_ce_code(r)
        for i, x in enumerate(code.logical_x):
            assert all(commutes(x, g) for g in code.generators)
            assert [not commutes(x, z) for z in code.logical_z] == [j == i for j in range(code.k)]
    assert build_ce_code(2).generators == canonical_code_8_1_3().generators


def _verifier_properties(rng):
    for r in (2, 3, 4):
        code = build_ce_code(r)
        assert compute_distance(code, 3) == 3
        assert min_weight_logical(code, 3).weight == claimed_weight3_logical(r).weight
    for r in range(2, 7):
        assert verify_constant_excitation(build_ce_code(r)) == 1 << r


def _statevec_properties(rng):
    for _ in range(CASES):
        amps = rng.normal(size=64) + 1j * rng.normal(size=64)
        s = StateVector(6, amps / np.linalg.norm(amps))
        kind = ["H", "S", "Sdg", "T", "Tdg", "X"][int(rng.integers(6))]
        apply_gate(s, GateOp(kind, (int(rng.integers(6)),)))
        a, b = rng.choice(6, size=2, replace=False)
        apply_gate(s, GateOp("CX", (int(a), int(b))))
        apply_pauli(s, _rand_pauli(rng, 6))
        apply_collective_z(s, rng.uniform(0, 2 * np.pi))
        assert abs(s.norm_sq() - 1) < 1e-12
    for r in (2, 3):
        code = build_ce_code(r)
        for _ in range(100):
            c = rng.normal(size=2**code.k) + 1j * rng.normal(size=2**code.k)
            psi = logical_state(code, c / np.linalg.norm(c))
            assert fidelity(psi, apply_collective_z(psi.copy(), rng.uniform(0, 2 * np.pi))) >= 1 - 1e-10
    code = canonical_code_8_1_3()
    for _ in range(CASES // 10):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = logical_state(code, c / np.linalg.norm(c))
        theta, j = rng.uniform(0, 2 * np.pi), int(rng.integers(8))
        lhs = apply_collective_z(apply_pauli(psi.copy(), single(8, j, "X")), theta)
        base = apply_collective_z(psi.copy(), theta)
        rhs = np.cos(2 * theta) * apply_pauli(base.copy(), single(8, j, "X")).amplitudes + np.sin(
            2 * theta
        ) * apply_pauli(base.copy(), single(8, j, "Y")).amplitudes
        assert fidelity(lhs, StateVector(8, rhs)) >= 1 - 1e-10
    for alpha, beta in [(1, 0), (0, 1), (S2, S2), (S2, 1j * S2)]:
        assert fidelity(encode_8_1_3(alpha, beta), codeword_oracle_r2((alpha, beta))) >= 1 - 1e-10


def _noise_properties(rng):
    code = canonical_code_8_1_3()
    for j in range(8):
        sx, sy, sz = (int(pauli_syndrome(single(8, j, t), code), 2) for t in "XYZ")
        assert sy == sx ^ sz
    flipped = code.with_generators([-g if i == 3 else g for i, g in enumerate(code.generators)])
    for _ in range(CASES):
        e = _rand_pauli(rng, 8)
        assert pauli_syndrome(e, flipped) == pauli_syndrome(e, code)
    gens = list(code.generators)
    for m in range(4):
        table = build_lookup(code)
        corr_a = table.lookup(pauli_syndrome(single(8, m, "Z"), code))
        assert in_group(multiply(corr_a, single(8, m + 4, "Z")), gens)
    ideal = ideal_codeword(code, 0)
    for _ in range(CASES):
        seed = int(rng.integers(1 << 31))
        cfg = NoiseConfig(float(rng.uniform(0, 0.5)), None, Ordering(["cc-after-pauli", "pauli-after-cc"][seed % 2]))
        a = run_shot(code, 0, cfg, np.random.default_rng(seed), ideal=ideal)
        b = run_shot(code, 0, cfg, np.random.default_rng(seed), ideal=ideal)
        assert a == b


def _experiment_properties(rng):
    for r in range(2, 40):
        assert code_rate(r) * 2 ** (r + 1) + (r + 1) + 2**r == 2 ** (r + 1)
    report = monte_carlo_sweep(SweepConfig(2, (0.01, 0.03, 0.06, 0.1), 20_000, None, 9), with_analysis=False)
    rates = [pt.failure_rate for pt in report.points]
    for lo, hi, pt in zip(rates, rates[1:], report.points):
        assert hi >= lo - 3 * pt.stderr


def test_criterion_9_property_suites():
    notes = []
    with criterion(9, "module invariants under randomized testing", 120.0, notes):
        rng = np.random.default_rng(909)
        for name, fn in [
            ("pauli", _pauli_properties),
            ("codes", _code_properties),
            ("verifier", _verifier_properties),
            ("statevec", _statevec_properties),
            ("noise", _noise_properties),
            ("experiment", _experiment_properties),
        ]:
            t0 = time.perf_counter()
            fn(rng)
            notes.append(f"{name} {time.perf_counter() - t0:.1f}s")
