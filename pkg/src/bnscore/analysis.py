"""Bayes factors, hyperparameter sweeps, and maximum-entropy comparisons.

Everything here compares a nested DAG pair (g_minus, g_plus) that differs in
exactly one family.  Because the uniform structure prior cancels and the
scores decompose, the Bayes factor reduces to the difference of the two local
log scores of the child whose parent set changed.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dag import Dag
from .dataset import Dataset, LocalCounts, counts
from .entropy import empirical_entropy, me_score, posterior_expected_entropy
from .scores import AlphaSpec, ScoreSpec, alpha_table, local_score

__all__ = [
    "Preference",
    "bayes_factor",
    "differing_child",
    "SweepRecord",
    "SweepCurve",
    "default_grid",
    "alpha_sweep",
    "me_prefer",
    "RegularityResult",
    "regularity_check",
]

SWEEP_KINDS = ("bdeu", "bds", "bdj", "k2", "bdla")

# relative tolerance below which two likelihood-weighted entropies count as equal
ME_INDIFFERENCE_RTOL = 1e-12


class Preference(enum.Enum):
    PREFER_MINUS = "prefer_minus"
    PREFER_PLUS = "prefer_plus"
    INDIFFERENT = "indifferent"


def differing_child(data: Dataset, g_minus: Dag, g_plus: Dag) -> int | None:
    """Index of the single node whose parent set differs, or None if identical.

    Raises ValueError when the DAGs differ at more than one node (the general
    ratio of totals is available through ``scores.total_score``).
    """
    if g_minus.node_count != g_plus.node_count:
        raise ValueError("DAGs have different node counts")
    if g_minus.node_count != len(data.variables):
        raise ValueError("DAG node count does not match data")
    diff = [
        i
        for i in range(g_minus.node_count)
        if g_minus.parents(i) != g_plus.parents(i)
    ]
    if not diff:
        return None
    if len(diff) > 1:
        raise ValueError(f"DAGs differ at {len(diff)} nodes, expected exactly one")
    return diff[0]


def _family_pair(
    data: Dataset, g_minus: Dag, g_plus: Dag
) -> tuple[int, LocalCounts, LocalCounts]:
    child = differing_child(data, g_minus, g_plus)
    if child is None:
        raise ValueError("DAGs are identical")
    return (
        child,
        counts(data, child, g_minus.parents(child)),
        counts(data, child, g_plus.parents(child)),
    )


def bayes_factor(data: Dataset, g_minus: Dag, g_plus: Dag, spec: ScoreSpec) -> float:
    """Log Bayes factor of g_minus against g_plus (positive favours g_minus).

    Equal to the difference of the differing child's local log scores; 0 for
    identical DAGs.
    """
    child = differing_child(data, g_minus, g_plus)
    if child is None:
        return 0.0
    c_minus = counts(data, child, g_minus.parents(child))
    c_plus = counts(data, child, g_plus.parents(child))
    return local_score(c_minus, spec) - local_score(c_plus, spec)


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of one score family.

    ``log_bf`` is log score(g_minus) - log score(g_plus); ``log_bf_rev`` is
    its negation, recorded so either orientation can be read off directly.
    ``ee_*`` are the expected posterior entropies of the differing family and
    ``me_*`` the likelihood-weighted products used for the maximum-entropy
    comparison.
    """

    alpha: float
    score: str
    log_bf: float
    log_bf_rev: float
    ee_minus: float
    ee_plus: float
    me_minus: float
    me_plus: float


@dataclass(frozen=True)
class SweepCurve:
    """Sweep of a nested DAG pair over a grid of imaginary sample sizes."""

    grid: tuple[float, ...]
    child: int
    records: tuple[SweepRecord, ...]

    CSV_COLUMNS = (
        "alpha",
        "score",
        "log_bf",
        "log_bf_rev",
        "ee_minus",
        "ee_plus",
        "me_minus",
        "me_plus",
    )

    def for_score(self, name: str) -> list[SweepRecord]:
        return [rec for rec in self.records if rec.score == name]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.CSV_COLUMNS)
            for rec in self.records:
                writer.writerow(
                    [
                        repr(rec.alpha),
                        rec.score,
                        repr(rec.log_bf),
                        repr(rec.log_bf_rev),
                        repr(rec.ee_minus),
                        repr(rec.ee_plus),
                        repr(rec.me_minus),
                        repr(rec.me_plus),
                    ]
                )


def default_grid(lo: float = 1e-4, hi: float = 1e4, points: int = 201) -> tuple[float, ...]:
    """Log-spaced grid of imaginary sample sizes."""
    if not (0 < lo < hi) or points < 2:
        raise ValueError("need 0 < lo < hi and at least 2 points")
    return tuple(float(a) for a in np.logspace(math.log10(lo), math.log10(hi), points))


def _spec_at(kind: str, alpha: float, level: int) -> AlphaSpec:
    if kind in ("bdeu", "bds", "bdla"):
        return AlphaSpec(kind, alpha=alpha, level=level)
    return AlphaSpec(kind)


def alpha_sweep(
    data: Dataset,
    g_minus: Dag,
    g_plus: Dag,
    kinds: Sequence[str] = ("bdeu", "bds"),
    grid: Sequence[float] | None = None,
    bdla_level: int = 5,
) -> SweepCurve:
    """Evaluate Bayes factors and entropy comparisons across a grid of alphas.

    Returns one record per (alpha, score kind), ordered by grid index; kinds
    without an alpha hyperparameter (k2, bdj) produce flat curves.
    """
    for kind in kinds:
        if kind not in SWEEP_KINDS:
            raise ValueError(f"cannot sweep score kind {kind!r}")
    if grid is None:
        grid = default_grid()
    grid = tuple(float(a) for a in grid)
    if any(a <= 0 for a in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing and positive")

    child, c_minus, c_plus = _family_pair(data, g_minus, g_plus)
    records = []
    for alpha in grid:
        for kind in kinds:
            spec = _spec_at(kind, alpha, bdla_level)
            lbf = local_score(c_minus, spec) - local_score(c_plus, spec)
            if spec.kind == "bdla":
                # mixture kind: report the mixture products and entropies at
                # the grid centre for the ee columns
                ee_minus = posterior_expected_entropy(
                    c_minus, alpha_table(AlphaSpec.bdeu(alpha), c_minus)
                )
                ee_plus = posterior_expected_entropy(
                    c_plus, alpha_table(AlphaSpec.bdeu(alpha), c_plus)
                )
            else:
                ee_minus = posterior_expected_entropy(c_minus, alpha_table(spec, c_minus))
                ee_plus = posterior_expected_entropy(c_plus, alpha_table(spec, c_plus))
            records.append(
                SweepRecord(
                    alpha=alpha,
                    score=kind,
                    log_bf=lbf,
                    log_bf_rev=-lbf,
                    ee_minus=ee_minus,
                    ee_plus=ee_plus,
                    me_minus=me_score(c_minus, spec),
                    me_plus=me_score(c_plus, spec),
                )
            )
    return SweepCurve(grid=grid, child=child, records=tuple(records))


def me_prefer(
    data: Dataset,
    g_minus: Dag,
    g_plus: Dag,
    spec: AlphaSpec,
    rtol: float = ME_INDIFFERENCE_RTOL,
) -> Preference:
    """Maximum-entropy preference between the nested pair.

    Prefers the DAG whose likelihood-weighted expected entropy is larger;
    differences below ``rtol`` (relative to the larger value) count as
    indifference.
    """
    _, c_minus, c_plus = _family_pair(data, g_minus, g_plus)
    v_minus = me_score(c_minus, spec)
    v_plus = me_score(c_plus, spec)
    scale = max(abs(v_minus), abs(v_plus))
    if scale == 0.0 or abs(v_minus - v_plus) <= rtol * scale:
        return Preference.INDIFFERENT
    return Preference.PREFER_PLUS if v_plus > v_minus else Preference.PREFER_MINUS


@dataclass(frozen=True)
class RegularityResult:
    """Outcome of the regularity check with the four quantities behind it."""

    regular: bool
    h_minus: float
    h_plus: float
    log_bd_minus: float
    log_bd_plus: float


def regularity_check(
    data: Dataset, g_minus: Dag, g_plus: Dag, spec: ScoreSpec
) -> RegularityResult:
    """Check that the score does not prefer the larger of two nested families
    when the smaller one has no higher empirical entropy.

    ``regular`` is False exactly when h_minus <= h_plus yet the score of the
    larger parent set is strictly higher -- the witness that the score can
    favour added complexity carrying no extra information.
    """
    child = differing_child(data, g_minus, g_plus)
    if child is None:
        # identical DAGs: trivially regular; report node 0's family
        c_same = counts(data, 0, g_minus.parents(0))
        h = empirical_entropy(c_same)
        s = local_score(c_same, spec)
        return RegularityResult(True, h, h, s, s)
    p_minus = set(g_minus.parents(child))
    p_plus = set(g_plus.parents(child))
    if not p_minus <= p_plus:
        raise ValueError("parent sets are not nested (g_minus must be the smaller)")
    c_minus = counts(data, child, g_minus.parents(child))
    c_plus = counts(data, child, g_plus.parents(child))
    h_minus = empirical_entropy(c_minus)
    h_plus = empirical_entropy(c_plus)
    s_minus = local_score(c_minus, spec)
    s_plus = local_score(c_plus, spec)
    violated = h_minus <= h_plus + 1e-12 and s_minus < s_plus - 1e-12
    return RegularityResult(not violated, h_minus, h_plus, s_minus, s_plus)
