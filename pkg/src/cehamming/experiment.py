"""Exact low-weight analysis, Monte Carlo sweeps, pseudo-thresholds and rate formulas."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import itertools
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from cehamming.codes import StabilizerCode, _check_r, build_ce_code
from cehamming.noise import (
    NoiseConfig,
    Ordering,
    build_lookup,
    draws_per_shot,
    ideal_codeword,
    pauli_syndrome,
    run_shots,
)
from cehamming.pauli import PauliOperator, build_basis, in_group, multiply

CHUNK_TRIALS = 1 << 15
EXACT_BUDGET = 10**6


def bound_quadratic_coefficient(n: int) -> int:
    """The closed-form ``n(n-2)`` coefficient behind the ``1/(n(n-2))`` bound."""
    return n * (n - 2)


def no_weight2_quadratic_coefficient(n: int) -> int:
    """Coefficient of p^2 in ``1 - F`` when only weight <= 1 errors are corrected."""
    return math.comb(n, 2)


def _binomial_poly(n: int, w: int) -> list[Fraction]:
    """Coefficients of ``(p/3)^w (1-p)^(n-w)`` in powers of p."""
    out = [Fraction(0)] * (n + 1)
    for j in range(n - w + 1):
        out[w + j] = Fraction(math.comb(n - w, j) * (-1) ** j, 3**w)
    return out


@dataclass(frozen=True)
class LowWeightAnalysis:
    """Counts ``A_w`` of correctable Pauli patterns by weight and the success polynomial."""

    n: int
    counts: tuple[int, ...]
    totals: tuple[int, ...]

    @property
    def success_coefficients(self) -> list[Fraction]:
        poly = [Fraction(0)] * (self.n + 1)
        for w, a in enumerate(self.counts):
            for i, c in enumerate(_binomial_poly(self.n, w)):
                poly[i] += a * c
        return poly

    @property
    def quadratic_coefficient(self) -> Fraction:
        """Exact ``c`` with ``1 - S(p) = c p^2 + O(p^3)``."""
        return -self.success_coefficients[2] if self.n >= 2 else Fraction(0)

    def success_probability(self, p: float) -> float:
        return sum(a * (p / 3) ** w * (1 - p) ** (self.n - w) for w, a in enumerate(self.counts))

    def failure_probability(self, p: float) -> float:
        return 1.0 - self.success_probability(p)

    def to_dict(self) -> dict:
        c = self.quadratic_coefficient
        return {
            "A": list(self.counts),
            "patterns": list(self.totals),
            "quadratic_coefficient": str(c),
            "quadratic_coefficient_float": float(f"{float(c):.12g}"),
        }


def exhaustive_low_weight_analysis(code: StabilizerCode, w_max: int = 2) -> LowWeightAnalysis:
    """Decode every Pauli pattern of weight ``<= w_max`` and count the corrected ones.

    A pattern counts when the correction times the error lies in the
    stabilizer group up to phase.  The rotation is taken as zero here; the
    composite channel is checked separately at weight one.
    """
    if w_max > 2 or w_max < 0:
        raise ValueError("exact analysis covers weights 0..2")
    if code.n > 16:
        raise ValueError("exact analysis is limited to n <= 16")
    total = sum(math.comb(code.n, w) * 3**w for w in range(w_max + 1))
    if total > EXACT_BUDGET:
        raise ValueError(f"{total} patterns exceed the exact-analysis budget")
    table = build_lookup(code, strict=False)
    basis = build_basis(list(code.generators), code.n)
    counts, totals = [], []
    for w in range(w_max + 1):
        good = seen = 0
        for support in itertools.combinations(range(code.n), w):
            for types in itertools.product("XYZ", repeat=w):
                x = z = 0
                for q, t in zip(support, types):
                    x |= (t != "Z") << q
                    z |= (t != "X") << q
                e = PauliOperator(code.n, x, z)
                seen += 1
                corr = table.lookup(pauli_syndrome(e, code))
                if corr is not None and in_group(multiply(corr, e), basis):
                    good += 1
        counts.append(good)
        totals.append(seen)
    return LowWeightAnalysis(code.n, tuple(counts), tuple(totals))


def quadratic_model(c: float) -> Callable[[float], float]:
    """Failure model ``1 - F(p) = c p^2``."""
    return lambda p: c * p * p


def pseudo_threshold(
    model: LowWeightAnalysis | Callable[[float], float],
    lo: float = 0.0,
    hi: float = 0.5,
    tol: float = 1e-12,
    grid: int = 4096,
) -> float | None:
    """Smallest ``p`` in ``(lo, hi)`` where the encoded failure equals ``p``.

    ``model`` is a :class:`LowWeightAnalysis` or a callable ``p -> 1 - F(p)``.
    A coarse scan brackets the first upward crossing, bisection refines it.
    Returns ``None`` when there is no crossing in range.
    """
    failure = model.failure_probability if isinstance(model, LowWeightAnalysis) else model

    def gap(p: float) -> float:
        return failure(p) - p

    ps = np.linspace(lo, hi, grid + 1)[1:]
    prev = ps[0]
    if gap(prev) >= 0:
        return float(prev)
    for p in ps[1:]:
        if gap(p) >= 0:
            a, b = prev, p
            while b - a > tol:
                mid = 0.5 * (a + b)
                if gap(mid) < 0:
                    a = mid
                else:
                    b = mid
            return 0.5 * (a + b)
        prev = p
    return None


def threshold_bound(n: int) -> float:
    if n <= 2:
        raise ValueError("bound needs n >= 3")
    return 1.0 / (n * (n - 2))


def comparison_ratio(n_other: int = 15, n_this: int = 8) -> float:
    """Ratio of threshold bounds, e.g. 15 qubits versus 8."""
    return threshold_bound(n_this) / threshold_bound(n_other)


def code_rate(r: int) -> Fraction:
    _check_r(r)
    return Fraction((1 << r) - (r + 1), 1 << (r + 1))


# -- Monte Carlo ------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    r: int = 2
    p_grid: tuple[float, ...] = (1e-3, 5e-3, 1e-2)
    trials: int = 100_000
    delta_t: float | None = None
    seed: int = 42
    ordering: Ordering = Ordering.CC_AFTER_PAULI
    logical_input: int = 0
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(not 0.0 <= p < 1.0 for p in self.p_grid):
            raise ValueError("grid values must lie in [0, 1)")
        _check_r(self.r)


def stream_key(seed: int, point: int) -> np.ndarray:
    return np.random.SeedSequence([seed, point]).generate_state(2, dtype=np.uint64)


def trial_uniforms(seed: int, point: int, start: int, count: int, width: int) -> np.ndarray:
    """Rows ``start .. start+count`` of the counter-based stream for one grid point.

    Trial ``t`` always reads the same ``width`` doubles regardless of how the
    trials are chunked; ``width`` must be a multiple of four.
    """
    if width % 4:
        raise ValueError("row width must be a multiple of 4")
    bitgen = np.random.Philox(key=stream_key(seed, point))
    bitgen.advance(start * width // 4)
    return np.random.Generator(bitgen).random((count, width))


def trial_rng(seed: int, point: int, trial: int, code: StabilizerCode) -> np.random.Generator:
    """Generator positioned at one trial's row, for replaying a sweep shot with ``run_shot``."""
    bitgen = np.random.Philox(key=stream_key(seed, point))
    bitgen.advance(trial * draws_per_shot(code) // 4)
    return np.random.Generator(bitgen)


@dataclass
class PointRecord:
    p: float
    trials: int
    failures: int
    heralded: int

    @property
    def fidelity(self) -> float:
        return 1.0 - self.failures / self.trials

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        f = self.failure_rate
        return math.sqrt(f * (1 - f) / self.trials)


@dataclass
class ExperimentReport:
    config: SweepConfig
    code_id: str
    n: int
    points: list[PointRecord]
    analysis: LowWeightAnalysis | None
    pseudo_threshold: float | None
    backend: str
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def coefficients(self) -> dict:
        out = {
            "closed_form": bound_quadratic_coefficient(self.n),
            "no_weight2_correction": no_weight2_quadratic_coefficient(self.n),
            "exact_oracle": None,
        }
        if self.analysis is not None:
            out["exact_oracle"] = float(f"{float(self.analysis.quadratic_coefficient):.12g}")
            out["exact_oracle_fraction"] = str(self.analysis.quadratic_coefficient)
            out["closed_form_reproduced"] = self.analysis.quadratic_coefficient == out["closed_form"]
        return out

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["ordering"] = self.config.ordering.value
        cfg["delta_t"] = "random" if self.config.delta_t is None else self.config.delta_t
        return {
            "code": self.code_id,
            "n": self.n,
            "config": cfg,
            "points": [
                {
                    "p": pt.p,
                    "trials": pt.trials,
                    "failures": pt.failures,
                    "heralded": pt.heralded,
                    "fidelity": _sig12(pt.fidelity),
                    "stderr": _sig12(pt.stderr),
                    "oracle_failure": None if self.analysis is None else _sig12(self.analysis.failure_probability(pt.p)),
                }
                for pt in self.points
            ],
            "exact_analysis": None if self.analysis is None else self.analysis.to_dict(),
            "quadratic_coefficients": self.coefficients(),
            "pseudo_threshold": None if self.pseudo_threshold is None else _sig12(self.pseudo_threshold),
            "pseudo_threshold_status": "ok" if self.pseudo_threshold is not None else "no-crossing",
            "threshold_bound": _sig12(threshold_bound(self.n)),
            "metadata": {"seed": self.config.seed, "backend": self.backend, "timestamp": self.timestamp},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "trials", "failures", "heralded", "fidelity", "stderr"])
        for pt in self.points:
            w.writerow([repr(pt.p), pt.trials, pt.failures, pt.heralded, f"{pt.fidelity:.12g}", f"{pt.stderr:.12g}"])
        return buf.getvalue()


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _run_chunk(args) -> tuple[int, int, int]:
    config, point, p, start, count = args
    code = _sweep_code(config.r)
    ideal = ideal_codeword(code, config.logical_input)
    u = trial_uniforms(config.seed, point, start, count, draws_per_shot(code))
    batch = run_shots(code, ideal, NoiseConfig(p, config.delta_t, config.ordering), u)
    return point, batch.failures, int(np.count_nonzero(batch.heralded))


_CODES: dict[int, StabilizerCode] = {}


def _sweep_code(r: int) -> StabilizerCode:
    if r not in _CODES:
        _CODES[r] = build_ce_code(r)
    return _CODES[r]


def monte_carlo_sweep(config: SweepConfig, with_analysis: bool = True) -> ExperimentReport:
    """Run ``config.trials`` shots per grid point; reproducible from the seed alone."""
    from cehamming import kernels

    code = _sweep_code(config.r)
    if code.n > 16:
        raise ValueError("Monte Carlo simulation is limited to n <= 16")
    tasks = [
        (config, i, p, start, min(CHUNK_TRIALS, config.trials - start))
        for i, p in enumerate(config.p_grid)
        for start in range(0, config.trials, CHUNK_TRIALS)
    ]
    failures = [0] * len(config.p_grid)
    heralded = [0] * len(config.p_grid)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_chunk, tasks))
    else:
        results = map(_run_chunk, tasks)
    for point, f, h in results:
        failures[point] += f
        heralded[point] += h
    points = [PointRecord(p, config.trials, failures[i], heralded[i]) for i, p in enumerate(config.p_grid)]
    analysis = exhaustive_low_weight_analysis(code) if with_analysis else None
    threshold = pseudo_threshold(analysis) if analysis is not None else None
    return ExperimentReport(config, code.label, code.n, points, analysis, threshold, kernels.BACKEND)


def oracle_band(analysis: LowWeightAnalysis, point: PointRecord) -> tuple[float, float]:
    """``(|empirical - oracle|, 3 sigma + 30 p^3)`` for the agreement check."""
    expected = analysis.failure_probability(point.p)
    sigma = math.sqrt(max(expected * (1 - expected), 0.0) / point.trials)
    return abs(point.failure_rate - expected), 3 * sigma + 30 * point.p**3


def sweep_records(points: Sequence[PointRecord]) -> list[dict]:
    return [
        {"p": pt.p, "trials": pt.trials, "failures": pt.failures, "heralded": pt.heralded, "fidelity": pt.fidelity}
        for pt in points
    ]
