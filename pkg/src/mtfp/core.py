"""Problem data model and objective arithmetic for the Multiple Team Formation Problem.

Indices are zero-based throughout the library: individual ``i`` in
``range(n_i)``, department ``j`` in ``range(n_j)``, group ``k`` in
``range(n_k)``. Instance documents and CLI output use one-based labels.

Everything here is pure and deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class InvalidInputError(ValueError):
    """Raised when arguments have the wrong shape or violate a precondition."""


class InvalidInstanceError(InvalidInputError):
    """Raised when a problem instance breaks one or more invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid instance:\n  " + "\n  ".join(self.violations))


def _int_matrix(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be a 2-D grid, got {arr.ndim}-D")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """Sociometric matrix, requirement matrix and department labels.

    ``socio[i, j]`` is the opinion of individual ``i`` about ``j`` (-1, 0, +1).
    ``req[j, k]`` is the head count group ``k`` needs from department ``j``.
    ``dept_of[i]`` is the department of individual ``i``.

    Construction only checks array ranks; call :func:`validate_instance` or
    :meth:`check` for the full invariant set.
    """

    socio: np.ndarray
    req: np.ndarray
    dept_of: np.ndarray
    name: str = "unnamed"

    def __post_init__(self):
        object.__setattr__(self, "socio", _int_matrix(self.socio, "socio"))
        object.__setattr__(self, "req", _int_matrix(self.req, "req"))
        dept = np.array(self.dept_of, dtype=np.int64)
        if dept.ndim != 1:
            raise InvalidInputError("dept_of must be a 1-D sequence")
        dept.setflags(write=False)
        object.__setattr__(self, "dept_of", dept)

    @property
    def n_i(self) -> int:
        return int(self.socio.shape[0])

    @property
    def n_j(self) -> int:
        return int(self.req.shape[0])

    @property
    def n_k(self) -> int:
        return int(self.req.shape[1])

    def check(self) -> "ProblemInstance":
        """Return ``self`` or raise :class:`InvalidInstanceError`."""
        violations = validate_instance(self)
        if violations:
            raise InvalidInstanceError(violations)
        return self

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.socio, other.socio)
            and np.array_equal(self.req, other.req)
            and np.array_equal(self.dept_of, other.dept_of)
        )

    __hash__ = None


@dataclass(frozen=True)
class Allocation:
    """One group index per individual (the decoded allocation matrix)."""

    group_of: tuple[int, ...] = field()

    def __post_init__(self):
        object.__setattr__(self, "group_of", tuple(int(g) for g in self.group_of))

    def __len__(self) -> int:
        return len(self.group_of)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.group_of, dtype=np.int64)

    def members(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.group_of) if g == k]

    def to_matrix(self, n_k: int) -> np.ndarray:
        """Dense 0/1 allocation matrix with shape ``(n_i, n_k)``."""
        a = np.zeros((len(self.group_of), n_k), dtype=np.int64)
        a[np.arange(len(self.group_of)), self.as_array()] = 1
        return a

    @classmethod
    def from_matrix(cls, matrix) -> "Allocation":
        a = np.asarray(matrix)
        if a.ndim != 2 or not np.all(a.sum(axis=1) == 1) or not np.isin(a, (0, 1)).all():
            raise InvalidInputError("allocation matrix needs exactly one 1 per row")
        return cls(tuple(np.argmax(a, axis=1)))


def _check_alloc(alloc: Allocation, n_i: int, n_k: int) -> np.ndarray:
    if len(alloc) != n_i:
        raise InvalidInputError(f"allocation covers {len(alloc)} individuals, instance has {n_i}")
    groups = alloc.as_array()
    if groups.size and (groups.min() < 0 or groups.max() >= n_k):
        raise InvalidInputError(f"group indices must lie in [0, {n_k})")
    return groups


def group_cohesion(alloc: Allocation, socio: np.ndarray, k: int) -> float:
    """Cohesion of group ``k``: sum of opinions among its members over its size.

    Ordered pairs ``(i, j)`` with ``i != j`` both count. An empty group has
    cohesion 0.
    """
    socio = np.asarray(socio)
    if socio.ndim != 2 or socio.shape[0] != socio.shape[1]:
        raise InvalidInputError("sociometric matrix must be square")
    if len(alloc) != socio.shape[0]:
        raise InvalidInputError(
            f"allocation covers {len(alloc)} individuals, matrix has {socio.shape[0]}"
        )
    if k < 0:
        raise InvalidInputError(f"group index {k} is negative")
    members = alloc.members(k)
    n_ik = len(members)
    if n_ik == 0:
        return 0.0
    block = socio[np.ix_(members, members)]
    total = int(block.sum()) - int(np.trace(block))
    return total / n_ik


def general_cohesion(alloc: Allocation, instance: ProblemInstance) -> float:
    """Size-weighted sum of group cohesions, ``sum_k (n_ik / n_i) * E_k``."""
    n_i = instance.n_i
    groups = _check_alloc(alloc, n_i, instance.n_k)
    sizes = np.bincount(groups, minlength=instance.n_k)
    total = 0.0
    for k in range(instance.n_k):
        total += (sizes[k] / n_i) * group_cohesion(alloc, instance.socio, k)
    return total


def derived_requirements(alloc: Allocation, instance: ProblemInstance) -> np.ndarray:
    """Head counts actually delivered: entry ``(j, k)`` counts department ``j`` in group ``k``."""
    groups = _check_alloc(alloc, instance.n_i, instance.n_k)
    if instance.dept_of.shape[0] != instance.n_i:
        raise InvalidInputError("dept_of length differs from n_i")
    got = np.zeros((instance.n_j, instance.n_k), dtype=np.int64)
    np.add.at(got, (instance.dept_of, groups), 1)
    return got


def penalty(got, want) -> int:
    """Sum of absolute cell differences between two requirement matrices."""
    got = np.asarray(got, dtype=np.int64)
    want = np.asarray(want, dtype=np.int64)
    if got.shape != want.shape:
        raise InvalidInputError(f"requirement shapes differ: {got.shape} vs {want.shape}")
    return int(np.abs(got - want).sum())


def fitness(alloc: Allocation, instance: ProblemInstance) -> float:
    """Penalised objective: general cohesion minus the requirement violation."""
    return general_cohesion(alloc, instance) - penalty(
        derived_requirements(alloc, instance), instance.req
    )


def is_feasible(alloc: Allocation, instance: ProblemInstance) -> bool:
    return bool(np.array_equal(derived_requirements(alloc, instance), instance.req))


def department_sizes(req) -> np.ndarray:
    return np.asarray(req, dtype=np.int64).sum(axis=1)


def validate_instance(instance: ProblemInstance) -> list[str]:
    """List every invariant violation of ``instance``; empty means valid."""
    out: list[str] = []
    s, r, d = instance.socio, instance.req, instance.dept_of

    if s.shape[0] != s.shape[1]:
        out.append(f"socio: matrix is {s.shape[0]}x{s.shape[1]}, must be square")
    elif s.shape[0] < 1:
        out.append("socio: needs at least one individual")
    else:
        for i, j in zip(*np.nonzero(~np.isin(s, (-1, 0, 1)))):
            out.append(f"socio[{i + 1},{j + 1}]: value {s[i, j]} not in {{-1, 0, 1}}")
        for i in np.nonzero(np.diag(s))[0]:
            out.append(f"socio[{i + 1},{i + 1}]: diagonal entry {s[i, i]} must be 0")

    if r.shape[0] < 1 or r.shape[1] < 1:
        out.append(f"req: shape {r.shape} needs at least one department and one group")
    for j, k in zip(*np.nonzero(r < 0)):
        out.append(f"req[{j + 1},{k + 1}]: negative head count {r[j, k]}")

    n_i = s.shape[0]
    if int(r.sum()) != n_i:
        out.append(f"req: total head count {int(r.sum())} differs from n_i={n_i}")

    if d.shape[0] != n_i:
        out.append(f"dept_of: length {d.shape[0]} differs from n_i={n_i}")
    bad = np.nonzero((d < 0) | (d >= r.shape[0]))[0]
    for i in bad:
        out.append(f"dept_of[{i + 1}]: department {d[i] + 1} outside 1..{r.shape[0]}")
    if bad.size == 0 and r.shape[0] > 0:
        counts = np.bincount(d, minlength=r.shape[0])
        want = department_sizes(r)
        for j in range(r.shape[0]):
            if counts[j] != want[j]:
                out.append(
                    f"dept {j + 1}: {counts[j]} individuals but requirement row sums to {want[j]}"
                )
    return out


def sequential_departments(req) -> np.ndarray:
    """Assign individuals to departments in order of the requirement row sums."""
    sizes = department_sizes(req)
    return np.repeat(np.arange(len(sizes), dtype=np.int64), sizes)


def pair_sum(groups: Iterable[int], socio) -> int:
    """Integer sum of ``socio[i, j]`` over ordered same-group pairs, ``i != j``."""
    g = np.asarray(list(groups), dtype=np.int64)
    s = np.asarray(socio, dtype=np.int64)
    same = g[:, None] == g[None, :]
    np.fill_diagonal(same, False)
    return int(s[same].sum())
