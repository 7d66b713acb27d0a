"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Micro benchmarks time the raw kernels; the workload benchmark times a slice of
the p-th root and Galois suites end to end with each backend selected.
"""
from __future__ import annotations

import argparse
import json
import random
import timeit

from eqhitchin import kernels
from eqhitchin.verification import suite_galois, suite_root


def _vectors(rng: random.Random, p: int, bound: int) -> tuple[list[int], list[int]]:
    return [rng.randint(-bound, bound) for _ in range(p)], [rng.randint(-bound, bound) for _ in range(p)]


def _graded_terms(rng: random.Random, p: int, n: int) -> list:
    monos = [(a, b) for a in range(4) for b in range(4 - a)]
    return [(m, [rng.randint(-20, 20) for _ in range(n)], rng.randint(1, 6)) for m in monos]


def micro(backend, repeat: int) -> dict[str, float]:
    rng = random.Random(0)
    out = {}
    for p in (5, 31):
        a, b = _vectors(rng, p, 1000)
        out[f"cyclic_mul p={p}"] = min(timeit.repeat(lambda: backend.cyclic_mul(a, b, p), number=2000, repeat=repeat))
        out[f"field_mul p={p}"] = min(timeit.repeat(lambda: backend.field_mul(a[:-1], b[:-1], p),
                                                     number=2000, repeat=repeat))
    big_a, big_b = _vectors(rng, 7, 10 ** 40)
    out["cyclic_mul p=7 bigint"] = min(timeit.repeat(lambda: backend.cyclic_mul(big_a, big_b, 7),
                                                     number=2000, repeat=repeat))
    ta, tb = _graded_terms(rng, 5, 4), _graded_terms(rng, 5, 4)
    out["graded_mul d=3"] = min(timeit.repeat(lambda: backend.graded_mul(ta, tb, (1, 1), 3, 5, True),
                                              number=200, repeat=repeat))
    return out


def workload() -> None:
    suite_root(n=20, seed=7)
    suite_galois(per_case=2, seed=7)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="emit machine-readable results")
    args = ap.parse_args()
    before = kernels.current()
    results: dict[str, dict[str, float]] = {}
    try:
        for name in kernels.available():
            backend = kernels.use(name)
            res = micro(backend, args.repeat)
            res["workload (root + galois suites)"] = min(timeit.repeat(workload, number=1, repeat=args.repeat))
            results[name] = res
    finally:
        kernels.use(before)
    if args.json:
        print(json.dumps(results, indent=2))
        return
    names = sorted(results)
    rows = list(results[names[0]])
    width = max(len(r) for r in rows)
    print(f"{'benchmark'.ljust(width)}  " + "  ".join(n.rjust(10) for n in names)
          + ("  speedup" if len(names) == 2 else ""))
    for r in rows:
        line = f"{r.ljust(width)}  " + "  ".join(f"{results[n][r]:10.4f}" for n in names)
        if len(names) == 2 and results["cython"][r] > 0:
            line += f"  {results['python'][r] / results['cython'][r]:6.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled kernels are not built; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
