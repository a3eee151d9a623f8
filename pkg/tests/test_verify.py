import pytest

from cehamming.codes import StabilizerCode, build_ce_code, canonical_code_8_1_3
from cehamming.pauli import PauliOperator, commutes, format_pauli, in_group, parse_pauli, single
from cehamming.verify import (
    BudgetExceededError,
    GreaterThan,
    NotConstantExcitationError,
    VerificationError,
    claimed_weight3_logical,
    compute_distance,
    min_weight_logical,
    outer_checks,
    outer_code_undetectable,
    verify_code,
    verify_constant_excitation,
    report_ok,
)


def brute_force_min_logical(code, w_max):
    """Independent oracle: every Pauli on n qubits, filtered by weight."""
    gens = list(code.generators)
    best = None
    for x in range(1 << code.n):
        for z in range(1 << code.n):
            w = (x | z).bit_count()
            if w == 0 or w > w_max or (best is not None and w >= best):
                continue
            p = PauliOperator(code.n, x, z)
            if all(commutes(p, g) for g in gens) and not in_group(p, gens):
                best = w
    return best


def test_distance_8_1_3():
    code = canonical_code_8_1_3()
    assert compute_distance(code, 3) == 3
    assert compute_distance(code, 2) == GreaterThan(2)
    assert str(compute_distance(code, 2)) == "greater than 2"
    assert brute_force_min_logical(code, 3) == 3


@pytest.mark.parametrize("r", [2, 3, 4])
def test_distance_family(r):
    code = build_ce_code(r)
    witness = min_weight_logical(code, 3)
    assert witness.weight == 3
    assert all(commutes(witness, g) for g in code.generators)
    assert not in_group(witness, list(code.generators))
    assert min_weight_logical(code, 2) is None
    assert claimed_weight3_logical(r).weight == witness.weight


def test_witness_tie_break():
    # lexicographically first support, then X < Y < Z
    assert format_pauli(min_weight_logical(build_ce_code(2), 3)) == "XIIZXIII"
    assert format_pauli(min_weight_logical(build_ce_code(3), 3)) == "XIIIIIIZXIIIIIII"


def test_budget_guard():
    # 3^4 C(128, 4) fits the budget; 3^4 C(200, 4) does not
    big = StabilizerCode(200, 200, ())
    with pytest.raises(BudgetExceededError):
        compute_distance(big, 4)
    with pytest.raises(BudgetExceededError):
        compute_distance(build_ce_code(2), 5)
    with pytest.raises(ValueError):
        compute_distance(build_ce_code(2), 0)


def test_distance_beyond_word_size():
    # n = 128 takes the pure-Python enumeration path
    assert compute_distance(build_ce_code(6), 1) == GreaterThan(1)


def test_claimed_logicals():
    op = claimed_weight3_logical(2)
    assert op == PauliOperator(8, 1 << 1 | 1 << 5, 1 << 2)
    assert format_pauli(op) == "IXZIIXII"
    assert claimed_weight3_logical(3) == PauliOperator(16, 1 << 3 | 1 << 11, 1 << 4)
    for r in (4, 5):
        claimed_weight3_logical(r)


def test_outer_code():
    for r in (2, 3):
        op = outer_code_undetectable(r)
        checks = outer_checks(r)
        assert len(checks) == r + 1
        assert op.weight == 2 and all(commutes(op, c) for c in checks)
    x0 = single(4, 0, "X")
    assert not all(commutes(x0, c) for c in outer_checks(2))
    # weight 2 slips past the outer checks but not past the concatenated code
    assert compute_distance(build_ce_code(2), 2) == GreaterThan(2)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_constant_excitation(r):
    assert verify_constant_excitation(build_ce_code(r)) == 1 << r


def test_missing_pair_check_rejected():
    code = build_ce_code(2)
    gens = list(code.generators)
    gens[3] = parse_pauli("ZIIIZIII")  # wrong sign: even parity allowed
    with pytest.raises(NotConstantExcitationError):
        verify_constant_excitation(code.with_generators(gens))
    with pytest.raises(NotConstantExcitationError):
        verify_constant_excitation(code.with_generators(code.generators[:6]))


def test_report():
    code = build_ce_code(2)
    report = verify_code(code, 3)
    d = report.to_dict()
    assert d["distance"] == 3 and d["excitation"] == 4 and d["commutation_ok"] and d["independence_ok"]
    assert report_ok(report, code)
    weak = verify_code(code, 2)
    assert weak.to_dict()["distance"] == "greater than 2"
    assert report_ok(weak, code)


def test_report_flags_tampering():
    code = build_ce_code(2)
    gens = list(code.generators)
    gens[0] = parse_pauli("ZZXXIIYX")
    report = verify_code(code.with_generators(gens), 3)
    assert not report.commutation_ok
    assert not report_ok(report, code.with_generators(gens))


def test_verification_error_is_assertion():
    assert issubclass(VerificationError, AssertionError)
