"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times population fitness evaluation on every shipped dataset, the
exhaustive search on datasets 1-4, and one full GA run, and checks that
both backends agree exactly.
"""
import argparse
import timeit

import numpy as np

from mtfp import ga, kernels
from mtfp.instance_io import load_dataset


def best_of(fn, repeat, number=1):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--ga-dataset", type=int, default=4)
    args = ap.parse_args()

    backends = sorted(kernels.BACKENDS)
    print(f"available backends: {', '.join(backends)} (default: {kernels.BACKEND})")
    if "cython" not in backends:
        print("compiled extension not built; only the fallback can be timed")

    print("\npopulation fitness, n_p=50 (microseconds per call)")
    print(f"{'dataset':>8} {'n_i':>5} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    rng = np.random.default_rng(0)
    for n in range(1, 8):
        inst = load_dataset(n)
        groups = rng.integers(inst.n_k, size=(50, inst.n_i))
        out, times = {}, {}
        for b in backends:
            out[b] = kernels.population_fitness(groups, inst.socio, inst.dept_of, inst.req, backend=b)
            times[b] = best_of(
                lambda: kernels.population_fitness(groups, inst.socio, inst.dept_of, inst.req, backend=b),
                args.repeat, number=20,
            )
        assert all(np.array_equal(out[backends[0]], o) for o in out.values())
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{n:>8} {inst.n_i:>5} " + " ".join(f"{times[b] * 1e6:>10.1f}" for b in backends) + f"   {speed:6.1f}x")

    print("\nexhaustive search (milliseconds)")
    print(f"{'dataset':>8} {'count':>9} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in range(1, 5):
        inst = load_dataset(n)
        res, times = {}, {}
        for b in backends:
            res[b] = kernels.exhaustive_search(inst.socio, inst.dept_of, inst.req, backend=b)
            reps = 1 if (b == "python" and n == 4) else args.repeat
            times[b] = best_of(lambda: kernels.exhaustive_search(inst.socio, inst.dept_of, inst.req, backend=b), reps)
        first = res[backends[0]]
        assert all(np.array_equal(first[0], r[0]) and first[1:] == r[1:] for r in res.values())
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{n:>8} {first[2]:>9} " + " ".join(f"{times[b] * 1e3:>10.2f}" for b in backends) + f"   {speed:6.1f}x")

    inst = load_dataset(args.ga_dataset)
    params = ga.derive_params(inst, seed=1)
    print(f"\nfull GA run on dataset {args.ga_dataset} ({params.n_gen} generations)")
    results = {}
    for b in backends:
        results[b] = ga.run(inst, params, backend=b)
        print(f"{b:>8}: {results[b].elapsed:.3f} s, best fitness {results[b].best_fitness:.4f}")
    assert len({r.best_fitness for r in results.values()}) == 1


if __name__ == "__main__":
    main()
