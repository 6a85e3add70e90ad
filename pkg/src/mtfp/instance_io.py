"""Instance documents (``.mtfp``) and random instance generation.

Document grammar (one-based department labels, ``#`` starts a comment line)::

    name: <free text to end of line>
    dimensions: <n_i> <n_j> <n_k>
    departments:
    <n_i integers in 1..n_j>
    requirements:
    <n_j rows of n_k non-negative integers>
    sociometric:
    <n_i rows of n_i integers in {-1, 0, 1}>

Cells may be separated by whitespace and/or commas. Sections must appear in
this order. ``departments`` may wrap over several lines; grid sections need
exactly one matrix row per line. :func:`dumps` writes the canonical form.
"""
from __future__ import annotations

import io
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO

import numpy as np

from .core import InvalidInputError, ProblemInstance, sequential_departments, validate_instance

SUFFIX = ".mtfp"
SECTIONS = ("name", "dimensions", "departments", "requirements", "sociometric")
_HEADER = re.compile(r"^([a-z_]+)\s*:\s*(.*)$")
_SEP = re.compile(r"[\s,]+")


class DocumentParseError(InvalidInputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class DocumentValidationError(InvalidInputError):
    """A well-formed document whose contents break instance invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid instance:\n  " + "\n  ".join(self.violations))


def _ints(text: str, lineno: int) -> list[int]:
    tokens = [t for t in _SEP.split(text.strip()) if t]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not re.fullmatch(r"[+-]?\d+", t))
        raise DocumentParseError(f"expected an integer, found {bad!r}", lineno) from None


def _grid(rows: list[tuple[int, list[int]]], n_rows: int, n_cols: int, section: str, header_line: int):
    if len(rows) != n_rows:
        raise DocumentParseError(f"{section}: expected {n_rows} rows, found {len(rows)}", header_line)
    for lineno, row in rows:
        if len(row) != n_cols:
            raise DocumentParseError(f"{section}: expected {n_cols} values, found {len(row)}", lineno)
    return np.array([row for _, row in rows], dtype=np.int64).reshape(n_rows, n_cols)


def loads(text: str) -> ProblemInstance:
    """Parse and validate a document; raise on the first syntax error or on all violations."""
    sections: dict[str, tuple[int, str, list[tuple[int, list[int]]]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            key, inline = m.group(1), m.group(2)
            if key not in SECTIONS:
                raise DocumentParseError(f"unknown section {key!r}", lineno)
            if key in sections:
                raise DocumentParseError(f"duplicate section {key!r}", lineno)
            expected = SECTIONS[len(sections)]
            if key != expected:
                raise DocumentParseError(f"section {key!r} out of order, expected {expected!r}", lineno)
            rows = [] if key == "name" or not inline else [(lineno, _ints(inline, lineno))]
            sections[key] = (lineno, inline, rows)
            current = key
            continue
        if current is None or current == "name":
            raise DocumentParseError(f"unexpected content {line[:30]!r}", lineno)
        sections[current][2].append((lineno, _ints(line, lineno)))

    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise DocumentParseError(f"missing section(s): {', '.join(missing)}")

    name = sections["name"][1].strip()
    dim_line, _, dim_rows = sections["dimensions"]
    dims = [v for _, row in dim_rows for v in row]
    if len(dims) != 3 or min(dims) < 1:
        raise DocumentParseError("dimensions: need three positive integers n_i n_j n_k", dim_line)
    n_i, n_j, n_k = dims

    dep_line, _, dep_rows = sections["departments"]
    depts = [v for _, row in dep_rows for v in row]
    if len(depts) != n_i:
        raise DocumentParseError(f"departments: expected {n_i} labels, found {len(depts)}", dep_line)

    req = _grid(sections["requirements"][2], n_j, n_k, "requirements", sections["requirements"][0])
    socio = _grid(sections["sociometric"][2], n_i, n_i, "sociometric", sections["sociometric"][0])

    instance = ProblemInstance(socio=socio, req=req, dept_of=np.array(depts) - 1, name=name)
    violations = validate_instance(instance)
    if violations:
        raise DocumentValidationError(violations)
    return instance


def load_instance(source: IO) -> ProblemInstance:
    """Read a document from a binary or text stream."""
    data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError(f"not UTF-8 text: {exc}") from None
    return loads(data)


def read_instance(path) -> ProblemInstance:
    with open(path, "rb") as fh:
        return load_instance(fh)


def _format_grid(grid: np.ndarray) -> list[str]:
    if grid.size == 0:
        return [""] * grid.shape[0]
    width = max(len(str(v)) for v in grid.ravel().tolist())
    return [" ".join(f"{v:>{width}}" for v in row) for row in grid.tolist()]


def dumps(instance: ProblemInstance) -> str:
    name = " ".join(instance.name.split())
    lines = [
        "# MTFP instance",
        f"name: {name}",
        f"dimensions: {instance.n_i} {instance.n_j} {instance.n_k}",
        "departments:",
        " ".join(str(d + 1) for d in instance.dept_of.tolist()),
        "requirements:",
        *_format_grid(instance.req),
        "sociometric:",
        *_format_grid(instance.socio),
    ]
    return "\n".join(lines) + "\n"


def save_instance(instance: ProblemInstance, sink: IO) -> None:
    """Write the canonical document to a binary or text stream."""
    violations = validate_instance(instance)
    if violations:
        raise DocumentValidationError(violations)
    text = dumps(instance)
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def write_instance(instance: ProblemInstance, path) -> None:
    with open(path, "wb") as fh:
        save_instance(instance, fh)


@dataclass(frozen=True)
class GeneratorConfig:
    n_i: int
    n_j: int
    n_k: int
    positive_rate: float = 0.4
    negative_rate: float = 0.1
    seed: int | None = None

    def __post_init__(self):
        if min(self.n_i, self.n_j, self.n_k) < 1:
            raise InvalidInputError("n_i, n_j and n_k must be >= 1")
        if self.n_i < max(self.n_j, self.n_k):
            raise InvalidInputError(
                f"n_i={self.n_i} cannot give every department and group a member "
                f"(n_j={self.n_j}, n_k={self.n_k})"
            )
        p, q = self.positive_rate, self.negative_rate
        if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0 and p + q <= 1.0 + 1e-12):
            raise InvalidInputError(f"rates must lie in [0, 1] with sum <= 1, got {p}, {q}")


def _covering_labels(n: int, n_labels: int, rng: np.random.Generator) -> np.ndarray:
    labels = np.concatenate([np.arange(n_labels), rng.integers(n_labels, size=n - n_labels)])
    rng.shuffle(labels)
    return labels


def generate_instance(config: GeneratorConfig, rng: np.random.Generator | None = None, name: str | None = None) -> ProblemInstance:
    """Random instance with i.i.d. opinions and a random requirement matrix.

    Every department and every group receives at least one person. Departments
    are numbered sequentially by size, as in the shipped datasets.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    n = config.n_i
    u = rng.random((n, n))
    socio = np.zeros((n, n), dtype=np.int64)
    socio[u < config.positive_rate] = 1
    socio[(u >= config.positive_rate) & (u < config.positive_rate + config.negative_rate)] = -1
    np.fill_diagonal(socio, 0)

    req = np.zeros((config.n_j, config.n_k), dtype=np.int64)
    np.add.at(req, (_covering_labels(n, config.n_j, rng), _covering_labels(n, config.n_k, rng)), 1)

    if name is None:
        name = (
            f"random n_i={config.n_i} n_j={config.n_j} n_k={config.n_k} "
            f"p+={config.positive_rate:g} p-={config.negative_rate:g} seed={config.seed}"
        )
    return ProblemInstance(socio=socio, req=req, dept_of=sequential_departments(req), name=name)


# Benchmark dataset 1: requirement and sociometric matrices.
DATASET1_REQUIREMENTS = [
    [2, 2, 0],
    [2, 1, 0],
    [0, 1, 1],
    [0, 0, 1],
]
DATASET1_SOCIOMETRIC = [
    [0, 1, 0, 0, 1, -1, 1, 1, 1, -1],
    [0, 0, 0, 0, 1, 1, 1, 0, -1, 1],
    [1, 1, 0, 1, -1, 1, 1, -1, 1, 1],
    [1, 1, 1, 0, 0, 1, 1, 1, 1, 1],
    [0, 0, -1, -1, 0, 1, 1, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 1, -1, 0, 1],
    [1, 1, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, -1, 0, 0, 1, 1, 0, -1, 0],
]

# (n_i, n_k, n_j) per benchmark dataset, in shipped order.
DATASET_SHAPES = {
    1: (10, 3, 4),
    2: (15, 3, 3),
    3: (20, 2, 4),
    4: (21, 3, 3),
    5: (50, 4, 4),
    6: (100, 5, 4),
    7: (200, 6, 5),
}


def dataset1() -> ProblemInstance:
    req = np.array(DATASET1_REQUIREMENTS)
    return ProblemInstance(
        socio=np.array(DATASET1_SOCIOMETRIC),
        req=req,
        dept_of=sequential_departments(req),
        name="dataset-1",
    )


def build_benchmark_dataset(number: int) -> ProblemInstance:
    """Dataset ``number``: the fixed reference matrices for 1, seeded regenerations otherwise."""
    if number == 1:
        return dataset1()
    n_i, n_k, n_j = DATASET_SHAPES[number]
    config = GeneratorConfig(n_i=n_i, n_j=n_j, n_k=n_k, seed=number)
    inst = generate_instance(config)
    return ProblemInstance(
        socio=inst.socio, req=inst.req, dept_of=inst.dept_of,
        name=f"dataset-{number} ({inst.name})",
    )


def datasets_dir() -> Path:
    return Path(str(resources.files("mtfp") / "datasets"))


def load_dataset(number: int) -> ProblemInstance:
    return read_instance(datasets_dir() / f"dataset{number}{SUFFIX}")
