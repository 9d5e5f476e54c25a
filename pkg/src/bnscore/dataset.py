"""Complete categorical samples and their contingency statistics.

A :class:`Dataset` stores level-encoded observations; :func:`counts` turns a
(child, parent set) pair into the :class:`LocalCounts` cube consumed by every
score and entropy routine.  Both types are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dag import Dag
from .errors import FormatError, MissingDataError

__all__ = ["Variable", "Dataset", "LocalCounts", "load_csv", "counts", "builtin_examples"]

# counts() refuses parent sets whose configuration space would not fit in memory
_MAX_CONFIGURATIONS = 1 << 24


@dataclass(frozen=True)
class Variable:
    """A named categorical variable with an ordered list of level labels."""

    name: str
    levels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError(f"variable {self.name!r} has no levels")


@dataclass(frozen=True, eq=False)
class Dataset:
    """A complete categorical sample: one row of level indices per observation."""

    variables: tuple[Variable, ...]
    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != len(self.variables):
            raise ValueError(
                f"rows must be (n, {len(self.variables)}), got shape {rows.shape}"
            )
        for i, var in enumerate(self.variables):
            col = rows[:, i]
            if col.size and (col.min() < 0 or col.max() >= len(var.levels)):
                raise ValueError(f"column {var.name!r} has out-of-range level indices")
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def level_counts(self) -> tuple[int, ...]:
        return tuple(len(v.levels) for v in self.variables)

    def var_index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise ValueError(f"unknown variable {name!r}")

    def to_csv(self) -> str:
        """Render back to CSV text (header + level labels)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.names)
        for row in self.rows:
            writer.writerow([self.variables[i].levels[row[i]] for i in range(len(row))])
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class LocalCounts:
    """Contingency cube for one child given an ordered parent set.

    ``n_ijk[j, k]`` counts rows where the child takes level ``k`` and the
    parents take configuration ``j``; configurations are mixed-radix numbers
    over the parents sorted by variable index, first parent most significant.
    Derived fields: ``n_ij`` row sums, ``q_tilde`` the number of observed
    configurations, ``r_tilde[j]`` the number of positive cells in row ``j``.
    """

    child: int
    parents: tuple[int, ...]
    r: int
    q: int
    n_ijk: np.ndarray
    n_ij: np.ndarray
    q_tilde: int
    r_tilde: np.ndarray
    parent_levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_ijk.shape != (self.q, self.r) or np.any(self.n_ijk < 0):
            raise ValueError("n_ijk must be a non-negative (q, r) table")
        if not np.array_equal(self.n_ij, self.n_ijk.sum(axis=1)):
            raise ValueError("n_ij must be the row sums of n_ijk")
        if self.q_tilde != int((self.n_ij > 0).sum()):
            raise ValueError("q_tilde must count the observed configurations")
        if not np.array_equal(self.r_tilde, (self.n_ijk > 0).sum(axis=1)):
            raise ValueError("r_tilde must count positive cells per configuration")
        expected_q = 1
        for levels in self.parent_levels:
            expected_q *= levels
        if len(self.parent_levels) != len(self.parents) or expected_q != self.q:
            raise ValueError("parent_levels inconsistent with parents and q")

    @property
    def n(self) -> int:
        return int(self.n_ij.sum())

    def config_levels(self, j: int) -> tuple[int, ...]:
        """Decode configuration index ``j`` into one level index per parent."""
        out = []
        for levels in reversed(self.parent_levels):
            out.append(j % levels)
            j //= levels
        return tuple(reversed(out))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def counts(data: Dataset, child: int, parents: Sequence[int]) -> LocalCounts:
    """Contingency counts of ``child`` given ``parents`` (a set of indices).

    The parent set is canonicalised by sorting, so any ordering of the same
    indices produces the same table.  Raises ValueError if the child appears
    among the parents or any index is out of range.
    """
    n_vars = len(data.variables)
    if not 0 <= child < n_vars:
        raise ValueError(f"child index {child} out of range")
    parents = tuple(sorted(int(p) for p in parents))
    if len(set(parents)) != len(parents):
        raise ValueError("duplicate parent indices")
    for p in parents:
        if not 0 <= p < n_vars:
            raise ValueError(f"parent index {p} out of range")
        if p == child:
            raise ValueError(f"child {child} listed among its parents")

    r = len(data.variables[child].levels)
    parent_levels = tuple(len(data.variables[p].levels) for p in parents)
    q = 1
    for levels in parent_levels:
        q *= levels
    if q > _MAX_CONFIGURATIONS:
        raise ValueError(f"parent configuration space too large ({q} cells)")

    if parents:
        weights = np.ones(len(parents), dtype=np.int64)
        for t in range(len(parents) - 2, -1, -1):
            weights[t] = weights[t + 1] * parent_levels[t + 1]
        config = data.rows[:, parents] @ weights
    else:
        config = np.zeros(data.n, dtype=np.int64)
    flat = config * r + data.rows[:, child]
    n_ijk = np.bincount(flat, minlength=q * r).reshape(q, r)

    n_ij = n_ijk.sum(axis=1)
    r_tilde = (n_ijk > 0).sum(axis=1)
    return LocalCounts(
        child=child,
        parents=parents,
        r=r,
        q=q,
        n_ijk=_freeze(n_ijk),
        n_ij=_freeze(n_ij),
        q_tilde=int((n_ij > 0).sum()),
        r_tilde=_freeze(r_tilde),
        parent_levels=parent_levels,
    )


def load_csv(path: str | Path, has_header: bool = True) -> Dataset:
    """Read a complete categorical sample from a comma-separated file.

    Levels are the distinct strings of each column in first-appearance order;
    with ``has_header`` the first row supplies variable names, otherwise the
    names are V1..VN.  Raises FormatError for empty or ragged input and
    MissingDataError for empty cells.
    """
    text = Path(path).read_text(encoding="utf-8")
    records = [row for row in csv.reader(io.StringIO(text)) if row]
    if not records:
        raise FormatError(f"{path}: file is empty")

    if has_header:
        names = [cell.strip() for cell in records[0]]
        body = records[1:]
    else:
        names = [f"V{i + 1}" for i in range(len(records[0]))]
        body = records
    if not body:
        raise FormatError(f"{path}: no data rows")
    width = len(names)
    if width == 0:
        raise FormatError(f"{path}: no columns")

    levels: list[list[str]] = [[] for _ in range(width)]
    index: list[dict[str, int]] = [{} for _ in range(width)]
    rows = np.empty((len(body), width), dtype=np.int64)
    for rno, record in enumerate(body):
        if len(record) != width:
            raise FormatError(
                f"{path}: row {rno + 1} has {len(record)} fields, expected {width}"
            )
        for cno, cell in enumerate(record):
            value = cell.strip()
            if value == "":
                raise MissingDataError(
                    f"{path}: empty cell at row {rno + 1}, column {cno + 1}"
                )
            code = index[cno].get(value)
            if code is None:
                code = len(levels[cno])
                levels[cno].append(value)
                index[cno][value] = code
            rows[rno, cno] = code

    variables = tuple(
        Variable(name, tuple(col_levels)) for name, col_levels in zip(names, levels)
    )
    return Dataset(variables, rows)


def _binary_dataset(rows: list[tuple[int, int, int, int]]) -> Dataset:
    variables = tuple(Variable(name, ("0", "1")) for name in ("X", "Y", "Z", "W"))
    return Dataset(variables, np.array(rows, dtype=np.int64))


def builtin_examples() -> list[tuple[Dataset, Dag, Dag]]:
    """The two bundled four-variable fixtures with their nested DAG pair.

    Both entries share the DAGs g_minus = {Z->X, W->X} and g_plus = g_minus
    plus Y->X over the variables (X, Y, Z, W).  The first sample induces
    singular conditional distributions of X (every observed parent
    configuration determines X); the second induces non-singular ones.  In
    both, adding Y leaves half of the parent configurations unobserved while
    reproducing the same observed conditional counts.
    """
    # rows are (X, Y, Z, W); three copies of each pattern, n = 12
    d1 = _binary_dataset(
        [(0, 0, 0, 0)] * 3 + [(1, 0, 1, 0)] * 3 + [(1, 0, 0, 1)] * 3 + [(0, 1, 1, 1)] * 3
    )
    d2 = _binary_dataset(
        [(0, 0, 0, 0)] * 2 + [(1, 0, 0, 0)]
        + [(0, 0, 1, 0)] + [(1, 0, 1, 0)] * 2
        + [(0, 0, 0, 1)] + [(1, 0, 0, 1)] * 2
        + [(0, 1, 1, 1)] * 2 + [(1, 1, 1, 1)]
    )
    g_minus = Dag(4, frozenset({(2, 0), (3, 0)}))
    g_plus = Dag(4, frozenset({(2, 0), (3, 0), (1, 0)}))
    return [(d1, g_minus, g_plus), (d2, g_minus, g_plus)]
