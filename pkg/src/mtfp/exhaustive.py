"""Exact solver: enumerate every allocation that meets the requirement matrix.

Only feasible allocations are generated. Within each department the members
(in index order) receive every distinct arrangement of that department's
group quota labels, in lexicographic order; departments are then combined as
a Cartesian product with department 1 varying slowest. The compiled search
in :mod:`mtfp.kernels` walks the same order, so ties resolve identically.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .core import Allocation, ProblemInstance, general_cohesion

DEFAULT_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    """The instance has more feasible allocations than the evaluation budget."""

    def __init__(self, feasible_count: int, budget: int):
        self.feasible_count = feasible_count
        self.budget = budget
        super().__init__(f"{feasible_count} feasible allocations exceed the budget of {budget}")


@dataclass
class ExactResult:
    best_allocation: Allocation
    best_cohesion: float
    feasible_count: int
    evaluations: int
    elapsed: float = field(compare=False)


def multinomial(parts) -> int:
    """Number of distinct arrangements of a multiset with the given part sizes."""
    total, out = 0, 1
    for p in parts:
        total += int(p)
        out *= math.comb(total, int(p))
    return out


def count_feasible(instance: ProblemInstance) -> int:
    """Exact (arbitrary precision) count of allocations meeting the requirement matrix."""
    instance.check()
    return math.prod(multinomial(row) for row in instance.req.tolist())


def quota_arrangements(quotas) -> Iterator[tuple[int, ...]]:
    """Lexicographic distinct sequences with ``quotas[g]`` copies of label ``g``."""
    remaining = [int(q) for q in quotas]
    n = sum(remaining)
    seq = [0] * n

    def place(t: int) -> Iterator[tuple[int, ...]]:
        if t == n:
            yield tuple(seq)
            return
        for g, left in enumerate(remaining):
            if left:
                remaining[g] -= 1
                seq[t] = g
                yield from place(t + 1)
                remaining[g] += 1

    return place(0)


def enumerate_feasible(instance: ProblemInstance) -> Iterator[Allocation]:
    instance.check()
    dept_members = [np.flatnonzero(instance.dept_of == j).tolist() for j in range(instance.n_j)]
    per_dept = [list(quota_arrangements(row)) for row in instance.req.tolist()]
    group_of = [0] * instance.n_i
    for combo in itertools.product(*per_dept):
        for members, labels in zip(dept_members, combo):
            for i, g in zip(members, labels):
                group_of[i] = g
        yield Allocation(tuple(group_of))


def solve_exact(
    instance: ProblemInstance,
    budget: int | None = DEFAULT_BUDGET,
    backend: str | None = None,
    validate: bool = True,
) -> ExactResult:
    """Score every feasible allocation and keep the first best.

    Raises :class:`BudgetExceededError` before enumerating when the feasible
    count is above ``budget`` (``None`` disables the guard). ``validate=False``
    skips the invariant check for instances already known to be valid.

    ``backend`` picks a kernel (``"cython"`` or ``"python"``) or
    ``"reference"``, which walks :func:`enumerate_feasible` and scores each
    allocation with :func:`~mtfp.core.general_cohesion`.
    """
    t0 = time.perf_counter()
    if validate:
        instance.check()
    count = None
    if budget is not None:
        count = math.prod(multinomial(row) for row in instance.req.tolist())
        if count > budget:
            raise BudgetExceededError(count, budget)
    if backend == "reference":
        best_alloc, best_cohesion, seen = _scan_reference(instance)
    else:
        best, best_pair, seen = kernels.exhaustive_search(
            instance.socio, instance.dept_of, instance.req, backend=backend
        )
        best_alloc, best_cohesion = Allocation(tuple(best)), best_pair / instance.n_i
    elapsed = time.perf_counter() - t0
    if count is not None and seen != count:
        raise AssertionError(f"search visited {seen} allocations, expected {count}")
    return ExactResult(
        best_allocation=best_alloc,
        best_cohesion=best_cohesion,
        feasible_count=seen,
        evaluations=seen,
        elapsed=elapsed,
    )


def _scan_reference(instance: ProblemInstance) -> tuple[Allocation, float, int]:
    best, best_value, seen = None, -math.inf, 0
    for alloc in enumerate_feasible(instance):
        seen += 1
        value = general_cohesion(alloc, instance)
        if value > best_value:
            best, best_value = alloc, value
    return best, best_value, seen
