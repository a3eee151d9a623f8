"""The compiled and pure-Python backends must agree bit for bit."""

import numpy as np
import pytest

from cehamming import _fallback, kernels
from cehamming.codes import build_ce_code
from cehamming.noise import NoiseConfig, Ordering, draws_per_shot, ideal_codeword, run_shot, run_shots
from cehamming.verify import min_weight_logical

BACKENDS = [_fallback]
if kernels.BACKEND == "cython":
    BACKENDS.append(kernels.get_backend("cython"))


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python") is _fallback
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_forced_fallback(monkeypatch):
    import importlib

    monkeypatch.setenv("CEHAMMING_PURE_PYTHON", "1")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.BACKEND == "python"
    finally:
        monkeypatch.delenv("CEHAMMING_PURE_PYTHON")
        importlib.reload(kernels)


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("ordering", list(Ordering))
@pytest.mark.parametrize("dt", [None, 0.7])
def test_batch_matches_single_shot(r, ordering, dt):
    code = build_ce_code(r)
    noise = NoiseConfig(0.15, dt, ordering)
    ideal = ideal_codeword(code, 1)
    shots = 120 if r == 2 else 40
    u = np.random.default_rng(r).random((shots, draws_per_shot(code)))
    expected = []
    for row in u:
        res = run_shot(code, 1, noise, _Replay(row), ideal=ideal)
        expected.append((res.success, res.heralded_uncorrectable))
    for impl in BACKENDS:
        batch = run_shots(code, ideal, noise, u, backend=impl)
        got = list(zip(batch.success.tolist(), batch.heralded.tolist()))
        assert got == expected, impl.__name__


class _Replay:
    """Stands in for a Generator and hands ``run_shot`` a fixed row of uniforms."""

    def __init__(self, row):
        self.row = row

    def random(self, size):
        assert size == len(self.row)
        return self.row


@pytest.mark.parametrize("w", [1, 2, 3])
def test_zero_syndrome_patterns_agree(w):
    code = build_ce_code(2)
    gx = np.array([g.x_mask for g in code.generators], dtype=np.uint64)
    gz = np.array([g.z_mask for g in code.generators], dtype=np.uint64)
    ref = list(_fallback.iter_zero_syndrome(code.n, w, [(g.x_mask, g.z_mask) for g in code.generators]))
    for impl in BACKENDS:
        xs, zs = impl.zero_syndrome_patterns(code.n, w, gx, gz)
        assert list(zip(xs.tolist(), zs.tolist())) == ref


def test_witness_same_on_both_paths():
    code = build_ce_code(3)
    assert min_weight_logical(code, 3).weight == 3
