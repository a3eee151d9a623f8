"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--shots 20000] [--repeat 3]

Prints one row per (kernel, backend) with the best wall time and the speedup.
Both backends are also checked to return identical results.
"""

import argparse
import time

import numpy as np

from cehamming import _fallback, kernels
from cehamming.codes import build_ce_code
from cehamming.noise import NoiseConfig, draws_per_shot, ideal_codeword, run_shots


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_shots(r, shots, repeat, backends):
    code = build_ce_code(r)
    ideal = ideal_codeword(code, 0)
    u = np.random.default_rng(0).random((shots, draws_per_shot(code)))
    noise = NoiseConfig(0.05, None)
    rows = {}
    for name, impl in backends.items():
        t, batch = best_of(lambda: run_shots(code, ideal, noise, u, backend=impl), repeat)
        rows[name] = (t, batch.failures)
    return f"simulate_shots r={r} ({shots} shots)", rows


def bench_patterns(r, w, repeat, backends):
    code = build_ce_code(r)
    gx = np.array([g.x_mask for g in code.generators], dtype=np.uint64)
    gz = np.array([g.z_mask for g in code.generators], dtype=np.uint64)
    rows = {}
    for name, impl in backends.items():
        t, (xs, _) = best_of(lambda: impl.zero_syndrome_patterns(code.n, w, gx, gz), repeat)
        rows[name] = (t, len(xs))
    return f"zero_syndrome_patterns r={r} w={w}", rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shots", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"python": _fallback}
    if kernels.BACKEND == "cython":
        backends["cython"] = kernels.get_backend("cython")
    else:
        print("compiled extension not built; timing the fallback only")

    cases = [
        bench_shots(2, args.shots, args.repeat, backends),
        bench_shots(3, max(args.shots // 80, 1), args.repeat, backends),
        bench_patterns(3, 3, args.repeat, backends),
        bench_patterns(4, 3, args.repeat, backends),
    ]
    print(f"{'kernel':44s} {'backend':8s} {'seconds':>10s} {'speedup':>8s}  result")
    for label, rows in cases:
        base = rows["python"][0]
        results = {v[1] for v in rows.values()}
        for name, (t, res) in rows.items():
            print(f"{label:44s} {name:8s} {t:10.4f} {base / t:8.1f}x  {res}")
        if len(results) != 1:
            raise SystemExit(f"backends disagree on {label}: {rows}")


if __name__ == "__main__":
    main()
