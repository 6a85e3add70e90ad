"""Genetic algorithm over one-hot chromosomes.

A population is a ``uint8`` array of shape ``(n_p, n_i, n_g)``: one chromosome
per row, one gene per individual, each gene a one-hot bit vector whose set
position is the individual's group. Every operator preserves the one-hot
property, so only the requirement-matrix constraint needs the penalty.

One ``numpy.random.Generator`` drives initialisation, then per generation:
selection, crossover, mutation.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from . import kernels
from .core import Allocation, InvalidInputError, ProblemInstance, is_feasible

DEFAULT_K = 20.0
DEFAULT_POP_SIZE = 50
DEFAULT_BETA = 0.2


class OneHotError(AssertionError):
    """A gene lost its exactly-one-bit-set property."""


@dataclass(frozen=True)
class GAParams:
    n_gen: int
    n_p: int = DEFAULT_POP_SIZE
    beta: float = DEFAULT_BETA
    alpha: float = 0.1
    tournament_size: int = 2
    seed: int | None = 0

    def __post_init__(self):
        if self.n_gen < 1:
            raise InvalidInputError(f"n_gen must be >= 1, got {self.n_gen}")
        if self.n_p < 2 or self.n_p % 2:
            raise InvalidInputError(f"n_p must be even and >= 2, got {self.n_p}")
        for name in ("beta", "alpha"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidInputError(f"{name} must lie in [0, 1], got {v}")
        if self.tournament_size < 1:
            raise InvalidInputError("tournament_size must be >= 1")


@dataclass
class SolveResult:
    best_allocation: Allocation
    best_fitness: float
    feasible: bool
    history: list[float] = field(repr=False)
    evaluations: int
    elapsed: float = field(compare=False)


def generation_count(n_i: int, n_g: int, K: float = DEFAULT_K) -> int:
    """``round(K * n_i * ln(n_g))``, at least 1 (half-up rounding)."""
    if K <= 0:
        raise InvalidInputError(f"K must be positive, got {K}")
    raw = K * n_i * math.log(n_g)
    n_gen = math.floor(raw + 0.5)
    if n_gen < 1:
        warnings.warn(
            f"derived generation count {raw:g} for n_i={n_i}, n_g={n_g}; clamped to 1",
            RuntimeWarning,
            stacklevel=3,
        )
        n_gen = 1
    return n_gen


def derive_params(instance: ProblemInstance, K: float = DEFAULT_K, **overrides) -> GAParams:
    """Default GA settings scaled to the instance; keyword overrides win."""
    unknown = set(overrides) - {f.name for f in fields(GAParams)}
    if unknown:
        raise InvalidInputError(f"unknown GA parameters: {sorted(unknown)}")
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if "n_gen" in overrides:
        n_gen = overrides.pop("n_gen")
    else:
        n_gen = generation_count(instance.n_i, instance.n_k, K)
    base = dict(n_gen=n_gen, n_p=DEFAULT_POP_SIZE, beta=DEFAULT_BETA, alpha=1.0 / instance.n_i)
    base.update(overrides)
    return GAParams(**base)


def encode(alloc: Allocation, n_g: int) -> np.ndarray:
    return Allocation.to_matrix(alloc, n_g).astype(np.uint8)


def decode(chrom) -> Allocation:
    c = np.asarray(chrom)
    if c.ndim != 2 or not np.all(c.sum(axis=1) == 1) or not np.isin(c, (0, 1)).all():
        raise OneHotError("every gene must have exactly one bit set")
    return Allocation(tuple(np.argmax(c, axis=1)))


def decode_population(pop: np.ndarray) -> np.ndarray:
    """Group indices for a whole population, shape ``(n_p, n_i)``."""
    return np.argmax(pop, axis=2)


def init_population(n_p: int, n_i: int, n_g: int, rng: np.random.Generator) -> np.ndarray:
    if min(n_p, n_i, n_g) < 1:
        raise InvalidInputError("n_p, n_i and n_g must all be >= 1")
    pop = np.zeros((n_p, n_i, n_g), dtype=np.uint8)
    bits = rng.integers(n_g, size=(n_p, n_i))
    np.put_along_axis(pop, bits[..., None], 1, axis=2)
    return pop


def tournament_select(pop: np.ndarray, fit, rng: np.random.Generator, size: int = 2) -> np.ndarray:
    """Fill a new population with winners of ``size``-way tournaments.

    Contestants are drawn uniformly with replacement. The fittest wins; ties
    go to a uniformly random contestant among the tied best.
    """
    pop = np.asarray(pop)
    fit = np.asarray(fit, dtype=np.float64)
    n = len(pop)
    if n == 0:
        raise InvalidInputError("cannot select from an empty population")
    if fit.shape != (n,):
        raise InvalidInputError(f"{n} chromosomes but {fit.shape} fitness values")
    contenders = rng.integers(n, size=(n, size))
    cfit = fit[contenders]
    # random keys only break ties among the top fitness
    keys = rng.random((n, size))
    top = cfit == cfit.max(axis=1, keepdims=True)
    pick = np.argmax(np.where(top, keys, -1.0), axis=1)
    winners = contenders[np.arange(n), pick]
    return pop[winners].copy()


def crossover(pop: np.ndarray, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Swap whole genes between consecutive parents with probability ``beta``."""
    pop = np.asarray(pop)
    if len(pop) % 2:
        raise InvalidInputError(f"crossover needs an even population, got {len(pop)}")
    out = pop.copy()
    a, b = out[0::2], out[1::2]
    swap = rng.random(a.shape[:2]) < beta
    tmp = a[swap].copy()
    a[swap] = b[swap]
    b[swap] = tmp
    return out


def mutate(pop: np.ndarray, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Re-draw each gene with probability ``alpha`` (new bit may equal the old one)."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInputError(f"alpha must lie in [0, 1], got {alpha}")
    out = np.array(pop, copy=True)
    n_p, n_i, n_g = out.shape
    hit = rng.random((n_p, n_i)) < alpha
    bits = rng.integers(n_g, size=(n_p, n_i))
    fresh = np.zeros_like(out)
    np.put_along_axis(fresh, bits[..., None], 1, axis=2)
    out[hit] = fresh[hit]
    return out


def run(
    instance: ProblemInstance,
    params: GAParams,
    rng: np.random.Generator | None = None,
    backend: str | None = None,
) -> SolveResult:
    """Evolve for ``params.n_gen`` generations and return the best-ever individual.

    No elitism: the best chromosome is only recorded, never re-injected.
    """
    instance.check()
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n_i, n_g = instance.n_i, instance.n_k
    socio = np.ascontiguousarray(instance.socio)
    dept = np.ascontiguousarray(instance.dept_of)
    req = np.ascontiguousarray(instance.req)

    t0 = time.perf_counter()
    pop = init_population(params.n_p, n_i, n_g, rng)
    best_fit = -math.inf
    best_groups = None
    history: list[float] = []
    evaluations = 0
    for _ in range(params.n_gen):
        groups = decode_population(pop)
        fit = kernels.population_fitness(groups, socio, dept, req, backend=backend)
        evaluations += len(fit)
        idx = int(np.argmax(fit))
        if fit[idx] > best_fit:
            best_fit = float(fit[idx])
            best_groups = groups[idx].copy()
        history.append(best_fit)
        pop = tournament_select(pop, fit, rng, params.tournament_size)
        pop = crossover(pop, params.beta, rng)
        pop = mutate(pop, params.alpha, rng)
    elapsed = time.perf_counter() - t0

    best = Allocation(tuple(best_groups))
    return SolveResult(
        best_allocation=best,
        best_fitness=best_fit,
        feasible=is_feasible(best, instance),
        history=history,
        evaluations=evaluations,
        elapsed=elapsed,
    )


def solve(instance: ProblemInstance, seed: int | None = 0, K: float = DEFAULT_K, **overrides) -> SolveResult:
    """Run the GA with derived parameters."""
    params = derive_params(instance, K, seed=seed, **overrides)
    return run(instance, params)


__all__ = [
    "GAParams",
    "OneHotError",
    "SolveResult",
    "crossover",
    "decode",
    "decode_population",
    "derive_params",
    "encode",
    "generation_count",
    "init_population",
    "mutate",
    "run",
    "solve",
    "tournament_select",
]
