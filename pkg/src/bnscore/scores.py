"""Dirichlet-multinomial family scores and BIC, all in natural-log space.

The marginal likelihood of a child given its parents under a Dirichlet prior
with per-cell weights a_ijk is a product over parent configurations of
gamma-function ratios; :func:`local_log_bd` evaluates its log.  The classical
prior choices are expressed as :class:`AlphaSpec` kinds:

* ``bdeu``   - a_ijk = alpha / (r * q), uniform over all cells;
* ``bds``    - a_ijk = alpha / (r * q_tilde) on observed configurations, 0
  elsewhere (the sparse variant that keeps the realised prior weight equal
  across structures);
* ``bdj``    - a_ijk = 1/2 (Jeffreys);
* ``k2``     - a_ijk = 1;
* ``bdla``   - an even mixture of ``bdeu`` scores over the grid
  {2**-L, ..., 2**L};
* ``custom`` - an explicit weight table.

Scores are per-family and decomposable; :func:`total_score` sums them over
the families of a DAG.  All functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .dag import Dag
from .dataset import Dataset, LocalCounts, counts
from .errors import PriorSupportError
from .specfun import log_gamma

__all__ = [
    "AlphaSpec",
    "BicSpec",
    "AlphaTable",
    "ScoreSpec",
    "alpha_table",
    "bdla_grid",
    "local_log_bd",
    "local_log_bdla",
    "local_bic",
    "local_score",
    "total_score",
    "effective_params",
    "effective_params_total",
    "d_edf",
    "effective_iss",
    "TermDecomposition",
    "bdeu_term_decomposition",
]

_KINDS = ("bdeu", "bds", "bdj", "k2", "bdla", "custom")


@dataclass(frozen=True, eq=False)
class AlphaSpec:
    """Choice of Dirichlet prior: kind plus imaginary sample size.

    ``alpha`` is the total prior weight for ``bdeu``/``bds`` and the centre of
    the mixture grid for ``bdla``; ``level`` is the bdla grid half-width L;
    ``custom_table`` holds explicit per-cell weights for kind ``custom``.
    """

    kind: str
    alpha: float = 1.0
    level: int = 5
    custom_table: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown score kind {self.kind!r}")
        if self.kind in ("bdeu", "bds", "bdla"):
            if not (math.isfinite(self.alpha) and self.alpha > 0):
                raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        if self.kind == "bdla" and self.level < 1:
            raise ValueError(f"bdla level must be >= 1, got {self.level}")
        if self.kind == "custom":
            if self.custom_table is None:
                raise ValueError("custom kind requires a weight table")
            table = np.asarray(self.custom_table, dtype=float)
            if table.ndim != 2 or np.any(table < 0) or not np.all(np.isfinite(table)):
                raise ValueError("custom table must be a 2-D array of finite weights >= 0")
            table = table.copy()
            table.setflags(write=False)
            object.__setattr__(self, "custom_table", table)
        elif self.custom_table is not None:
            raise ValueError("custom_table is only valid with kind 'custom'")

    @classmethod
    def bdeu(cls, alpha: float = 1.0) -> "AlphaSpec":
        return cls("bdeu", alpha=alpha)

    @classmethod
    def bds(cls, alpha: float = 1.0) -> "AlphaSpec":
        return cls("bds", alpha=alpha)

    @classmethod
    def bdj(cls) -> "AlphaSpec":
        return cls("bdj")

    @classmethod
    def k2(cls) -> "AlphaSpec":
        return cls("k2")

    @classmethod
    def bdla(cls, alpha: float = 1.0, level: int = 5) -> "AlphaSpec":
        return cls("bdla", alpha=alpha, level=level)

    @classmethod
    def custom(cls, table: np.ndarray) -> "AlphaSpec":
        return cls("custom", custom_table=table)


@dataclass(frozen=True)
class BicSpec:
    """BIC scoring; ``penalty`` selects the dimension count.

    ``literal`` uses q * (r - 1) parameters per family; ``effective`` uses the
    effective parameter count (positive cells minus observed configurations),
    which zeroes the penalty difference on sparse singular tables.
    """

    penalty: str = "literal"

    def __post_init__(self) -> None:
        if self.penalty not in ("literal", "effective"):
            raise ValueError(f"penalty must be 'literal' or 'effective', got {self.penalty!r}")


ScoreSpec = Union[AlphaSpec, BicSpec]


@dataclass(frozen=True, eq=False)
class AlphaTable:
    """Materialised per-cell prior weights for one family (q x r)."""

    alpha_ijk: np.ndarray

    def __post_init__(self) -> None:
        table = np.asarray(self.alpha_ijk, dtype=float)
        if table.ndim != 2:
            raise ValueError("alpha_ijk must be 2-D")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "alpha_ijk", table)

    @property
    def alpha_ij(self) -> np.ndarray:
        return self.alpha_ijk.sum(axis=1)

    @property
    def total(self) -> float:
        return float(self.alpha_ijk.sum())


def alpha_table(spec: AlphaSpec, c: LocalCounts) -> AlphaTable:
    """Materialise the per-cell weight table of ``spec`` for the family ``c``.

    ``bdla`` is not materialised here: it is a mixture over ``bdeu`` tables,
    handled by :func:`local_log_bdla`.
    """
    if spec.kind == "bdeu":
        return AlphaTable(np.full((c.q, c.r), spec.alpha / (c.r * c.q)))
    if spec.kind == "bds":
        table = np.zeros((c.q, c.r))
        if c.q_tilde > 0:
            table[c.n_ij > 0, :] = spec.alpha / (c.r * c.q_tilde)
        return AlphaTable(table)
    if spec.kind == "bdj":
        return AlphaTable(np.full((c.q, c.r), 0.5))
    if spec.kind == "k2":
        return AlphaTable(np.full((c.q, c.r), 1.0))
    if spec.kind == "custom":
        table = spec.custom_table
        if table.shape != (c.q, c.r):
            raise ValueError(
                f"custom table shape {table.shape} does not match counts ({c.q}, {c.r})"
            )
        return AlphaTable(table)
    raise ValueError(f"no single weight table for kind {spec.kind!r}")


def local_log_bd(c: LocalCounts, t: AlphaTable) -> float:
    """Log marginal likelihood of one family under weight table ``t``.

    Configurations with zero prior weight and zero counts are skipped (their
    gamma ratios cancel exactly); zero prior weight with positive counts means
    the data lie outside the prior's support and raises PriorSupportError.
    The result is the sequential-predictive (prequential) form: it carries no
    multinomial coefficient.
    """
    if t.alpha_ijk.shape != (c.q, c.r):
        raise ValueError(
            f"weight table shape {t.alpha_ijk.shape} does not match counts ({c.q}, {c.r})"
        )
    total = 0.0
    alpha = t.alpha_ijk
    for j in range(c.q):
        a_ij = float(alpha[j].sum())
        n_ij = int(c.n_ij[j])
        if a_ij == 0.0:
            if n_ij > 0:
                raise PriorSupportError(
                    f"configuration {j} has observations but zero prior weight"
                )
            continue
        if n_ij > 0:
            total += log_gamma(a_ij) - log_gamma(a_ij + n_ij)
        for k in range(c.r):
            a = float(alpha[j, k])
            n = int(c.n_ijk[j, k])
            if n == 0:
                continue
            if a == 0.0:
                raise PriorSupportError(
                    f"cell ({j}, {k}) has observations but zero prior weight"
                )
            total += log_gamma(a + n) - log_gamma(a)
    return total


def bdla_grid(level: int) -> tuple[float, ...]:
    """The imaginary-sample-size grid {2**-L, ..., 2**L} for the mixture score."""
    if level < 1:
        raise ValueError("level must be >= 1")
    return tuple(2.0 ** e for e in range(-level, level + 1))


def local_log_bdla(c: LocalCounts, spec: AlphaSpec) -> float:
    """Log of the even mixture of bdeu marginal likelihoods over the grid.

    Computed as a max-shifted log-sum-exp, so it is exact in log space and
    always lies between the smallest and largest component score.
    """
    if spec.kind != "bdla":
        raise ValueError(f"expected a bdla spec, got kind {spec.kind!r}")
    parts = [
        local_log_bd(c, alpha_table(AlphaSpec.bdeu(s), c)) for s in bdla_grid(spec.level)
    ]
    top = max(parts)
    return top + math.log(sum(math.exp(p - top) for p in parts) / len(parts))


def local_bic(c: LocalCounts, penalty: str = "literal") -> float:
    """BIC of one family: max log-likelihood minus (log n / 2) * dimensions.

    The log-likelihood is evaluated at the frequency estimates n_ijk / n_ij
    with 0 * log 0 = 0; unobserved configurations contribute nothing.  For an
    empty sample the score is 0.
    """
    if penalty not in ("literal", "effective"):
        raise ValueError(f"penalty must be 'literal' or 'effective', got {penalty!r}")
    n = c.n
    if n == 0:
        return 0.0
    loglik = 0.0
    for j in range(c.q):
        n_ij = int(c.n_ij[j])
        if n_ij == 0:
            continue
        for k in range(c.r):
            n_ijk = int(c.n_ijk[j, k])
            if n_ijk > 0:
                loglik += n_ijk * math.log(n_ijk / n_ij)
    dims = c.q * (c.r - 1) if penalty == "literal" else effective_params(c)
    return loglik - 0.5 * math.log(n) * dims


def local_score(c: LocalCounts, spec: ScoreSpec) -> float:
    """Per-family log score under ``spec`` (any BD kind or BIC)."""
    if isinstance(spec, BicSpec):
        return local_bic(c, spec.penalty)
    if spec.kind == "bdla":
        return local_log_bdla(c, spec)
    return local_log_bd(c, alpha_table(spec, c))


def total_score(data: Dataset, g: Dag, spec: ScoreSpec) -> float:
    """Decomposable total log score: the sum of per-family scores over ``g``."""
    if g.node_count != len(data.variables):
        raise ValueError(
            f"DAG has {g.node_count} nodes but data has {len(data.variables)} variables"
        )
    if isinstance(spec, AlphaSpec) and spec.kind == "custom":
        raise ValueError("custom weight tables are per-family; use local_log_bd")
    return sum(
        local_score(counts(data, i, g.parents(i)), spec) for i in range(g.node_count)
    )


def effective_params(c: LocalCounts) -> int:
    """Effective parameter count of a family: positive cells minus observed rows."""
    return int(c.r_tilde.sum()) - c.q_tilde


def effective_params_total(data: Dataset, g: Dag) -> int:
    """Effective parameter count of a DAG: summed over its families."""
    if g.node_count != len(data.variables):
        raise ValueError("DAG node count does not match data")
    return sum(
        effective_params(counts(data, i, g.parents(i))) for i in range(g.node_count)
    )


def d_edf(c_minus: LocalCounts, c_plus: LocalCounts) -> int:
    """Effective degrees of freedom between two nested families."""
    return effective_params(c_plus) - effective_params(c_minus)


def effective_iss(c: LocalCounts, alpha: float) -> float:
    """Realised prior weight of the bdeu prior: alpha * q_tilde / q.

    Prior weight on unobserved configurations cancels out of the marginal
    likelihood, so only this fraction of ``alpha`` actually informs the score.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    return alpha * c.q_tilde / c.q


@dataclass(frozen=True)
class TermDecomposition:
    """Split of the bdeu log score into data-free and data-dependent terms.

    ``prior_term + likelihood_term`` equals the bdeu log score exactly.  The
    three approximation fields are the standard closed forms: the prior term
    behaves like q(r-1)·log(a_ijk) as a_ijk -> 0 and like
    alpha·log(r) + q(r-1)/2·log(a_ijk / 2π) as a_ijk -> infinity, while for
    sparse samples the likelihood term behaves like -q(r-1)·log(a_ijk).
    """

    prior_term: float
    likelihood_term: float
    approx_prior_small: float
    approx_prior_large: float
    approx_likelihood_sparse: float


def bdeu_term_decomposition(c: LocalCounts, alpha: float) -> TermDecomposition:
    """Exact prior/likelihood split of the bdeu log score plus its approximations."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    a_ijk = alpha / (c.r * c.q)
    a_ij = c.r * a_ijk
    prior = 0.0
    lik = 0.0
    for j in range(c.q):
        prior += log_gamma(a_ij) - c.r * log_gamma(a_ijk)
        lik -= log_gamma(a_ij + int(c.n_ij[j]))
        for k in range(c.r):
            lik += log_gamma(a_ijk + int(c.n_ijk[j, k]))
    dims = c.q * (c.r - 1)
    return TermDecomposition(
        prior_term=prior,
        likelihood_term=lik,
        approx_prior_small=dims * math.log(a_ijk),
        approx_prior_large=alpha * math.log(c.r) + 0.5 * dims * math.log(a_ijk / (2 * math.pi)),
        approx_likelihood_sparse=-dims * math.log(a_ijk),
    )
