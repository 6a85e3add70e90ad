"""Command-line front end: ``mtfp solve|exact|bench|sweep|gen|validate``.

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 exhaustive budget refusal, 4 GA finished on an infeasible allocation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, ga, kernels
from .bench import (
    BENCH_COLUMNS,
    SWEEP_COLUMNS,
    TIME_COLUMNS,
    bench_directory,
    format_bench_table,
    sweep,
    sweep_rows,
    write_csv,
)
from .core import Allocation, InvalidInputError, ProblemInstance
from .exhaustive import DEFAULT_BUDGET, BudgetExceededError, solve_exact
from .instance_io import (
    DocumentParseError,
    DocumentValidationError,
    GeneratorConfig,
    build_benchmark_dataset,
    datasets_dir,
    dumps,
    generate_instance,
    loads,
    read_instance,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def int_range(text: str) -> list[int]:
    """Parse ``5:12`` (inclusive), ``5,6,9`` or a single integer."""
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return values


def _load(path: str) -> ProblemInstance:
    return read_instance(path)


def allocation_table(alloc: Allocation, n_k: int) -> str:
    """Individuals by groups 0/1 matrix, with I1.. rows and G1.. columns."""
    a = alloc.to_matrix(n_k)
    labels = [f"I{i + 1}" for i in range(a.shape[0])]
    w = max(len(s) for s in labels)
    head = " " * w + " |" + "".join(f" G{k + 1:<2}" for k in range(n_k))
    rows = [head, "-" * len(head)]
    for lab, row in zip(labels, a.tolist()):
        rows.append(f"{lab:>{w}} |" + "".join(f" {v:<3}" for v in row))
    return "\n".join(rows)


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    params = ga.derive_params(
        inst, args.K, seed=args.seed, n_p=args.pop_size, beta=args.beta,
        alpha=args.alpha, n_gen=args.generations,
    )
    res = ga.run(inst, params)
    print(f"instance:     {inst.name}")
    print(f"best fitness: {res.best_fitness:.4f}")
    print(f"feasible:     {'yes' if res.feasible else 'no'}")
    print(f"evaluations:  {res.evaluations} ({params.n_p} x {params.n_gen} generations)")
    print(f"elapsed:      {res.elapsed:.3f} s")
    print()
    print(allocation_table(res.best_allocation, inst.n_k))
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_exact(args) -> int:
    inst = _load(args.instance)
    try:
        res = solve_exact(inst, budget=args.budget)
    except BudgetExceededError as exc:
        print(f"refused: {exc.feasible_count} feasible allocations exceed budget {exc.budget} (N/A)")
        return EXIT_BUDGET
    print(f"instance:       {inst.name}")
    print(f"best cohesion:  {res.best_cohesion:.4f}")
    print(f"feasible count: {res.feasible_count}")
    print(f"elapsed:        {res.elapsed:.4g} s")
    print()
    print(allocation_table(res.best_allocation, inst.n_k))
    return EXIT_OK


def cmd_bench(args) -> int:
    directory = Path(args.directory) if args.directory else datasets_dir()
    if not directory.is_dir():
        print(f"not a directory: {directory}", file=sys.stderr)
        return EXIT_USAGE
    rows = bench_directory(directory, n_runs=args.runs, base_seed=args.seed, budget=args.budget, K=args.K)
    columns = [c for c in BENCH_COLUMNS if not (args.omit_times and c in TIME_COLUMNS)]
    print(format_bench_table(rows, with_times=not args.omit_times))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(rows, fh, columns)
    return EXIT_OK


def cmd_sweep(args) -> int:
    records = sweep(
        args.n_i, args.k, n_j=args.n_j, runs=args.runs, seed=args.seed,
        backend=args.backend, repeat=args.repeat,
    )
    rows = sweep_rows(records)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(rows, fh, SWEEP_COLUMNS)
    else:
        write_csv(rows, sys.stdout, SWEEP_COLUMNS)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.dataset is not None:
        inst = build_benchmark_dataset(args.dataset)
    else:
        missing = [f for f in ("n_i", "n_j", "n_k") if getattr(args, f) is None]
        if missing:
            print(f"gen: --{' --'.join(m.replace('_', '-') for m in missing)} required without --dataset", file=sys.stderr)
            return EXIT_USAGE
        config = GeneratorConfig(
            n_i=args.n_i, n_j=args.n_j, n_k=args.n_k,
            positive_rate=args.positive_rate, negative_rate=args.negative_rate, seed=args.seed,
        )
        inst = generate_instance(config)
    text = dumps(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    text = Path(args.instance).read_text()
    try:
        inst = loads(text)
    except DocumentValidationError as exc:
        for v in exc.violations:
            print(v)
        return EXIT_INVALID
    print(f"ok: {inst.name} (n_i={inst.n_i}, n_j={inst.n_j}, n_k={inst.n_k})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtfp", description="Multiple Team Formation Problem solver")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run the genetic algorithm on one instance")
    s.add_argument("instance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-K", type=float, default=ga.DEFAULT_K, help="generation-count scale (default 20)")
    s.add_argument("--beta", type=float, help="per-gene crossover swap probability (default 0.2)")
    s.add_argument("--alpha", type=float, help="per-gene mutation probability (default 1/n_i)")
    s.add_argument("--pop-size", type=int, help="population size (default 50)")
    s.add_argument("--generations", type=int, help="override the derived generation count")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("exact", help="exhaustive optimum of one instance")
    e.add_argument("instance")
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max feasible allocations to enumerate")
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bench", help="exhaustive + GA statistics for a directory of instances")
    b.add_argument("directory", nargs="?", help="directory of .mtfp files (default: shipped datasets)")
    b.add_argument("--runs", type=int, default=20)
    b.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.add_argument("-K", type=float, default=ga.DEFAULT_K)
    b.add_argument("--output", "-o", help="CSV output path")
    b.add_argument("--omit-times", action="store_true", help="leave out wall-clock columns (byte-reproducible output)")
    b.set_defaults(func=cmd_bench)

    w = sub.add_parser("sweep", help="exhaustive-method timing sweep over n_i and k")
    w.add_argument("--n-i", type=int_range, default=list(range(5, 13)), help="e.g. 5:12")
    w.add_argument("--k", type=int_range, default=list(range(2, 6)), help="e.g. 2:5")
    w.add_argument("--n-j", type=int, default=3)
    w.add_argument("--runs", type=int, default=20, help="instances per cell (>= 3)")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--repeat", type=int, default=1, help="time each instance this many times, keep the fastest")
    w.add_argument("--backend", choices=["reference", *sorted(kernels.BACKENDS)], default=None,
                   help="exhaustive scorer (default: fastest available kernel)")
    w.add_argument("--output", "-o", help="CSV output path (default stdout)")
    w.set_defaults(func=cmd_sweep)

    g = sub.add_parser("gen", help="write a random or benchmark instance document")
    g.add_argument("--dataset", type=int, choices=range(1, 8), help="rebuild shipped benchmark dataset N")
    g.add_argument("--n-i", type=int)
    g.add_argument("--n-j", type=int)
    g.add_argument("--n-k", type=int)
    g.add_argument("--positive-rate", type=float, default=0.4)
    g.add_argument("--negative-rate", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", "-o")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check an instance document")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except DocumentValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DocumentParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
