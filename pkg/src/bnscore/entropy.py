"""Bayesian entropy estimators for one family of a discrete network.

Three estimators of the conditional entropy of a child given its parents,
all summed over parent configurations with the 0*log(0) = 0 convention:

* :func:`empirical_entropy`   - plug-in entropy of the observed frequencies;
* :func:`marginal_posterior_entropy` - plug-in entropy of the posterior-mean
  probabilities (a_ijk + n_ijk) / (a_ij + n_ij);
* :func:`posterior_expected_entropy` - the exact posterior mean of the
  entropy under the Dirichlet posterior, in digamma closed form.

The closed form has a Monte-Carlo twin, :func:`mc_expected_entropy`, kept
deliberately independent (it averages plug-in entropies of posterior Dirichlet
draws) so the two can be checked against each other.  :func:`me_score`
combines the expected entropy with the marginal likelihood into the quantity
used for maximum-entropy model comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import LocalCounts
from .scores import AlphaSpec, AlphaTable, alpha_table, bdla_grid, local_log_bd
from .specfun import digamma

__all__ = [
    "EntropyReport",
    "empirical_entropy",
    "marginal_posterior_entropy",
    "posterior_expected_entropy",
    "lemma1_bias",
    "lemma1_approx",
    "me_score",
    "unobserved_config_term",
    "mc_expected_entropy",
    "entropy_report",
]

ROW_MASKS = ("observed", "all")


def _row_mask(c: LocalCounts, t: AlphaTable | None, rows: str) -> np.ndarray:
    if rows not in ROW_MASKS:
        raise ValueError(f"rows must be one of {ROW_MASKS}, got {rows!r}")
    observed = c.n_ij > 0
    if rows == "observed" or t is None:
        return observed
    return observed | (t.alpha_ij > 0)


def _check_shapes(c: LocalCounts, t: AlphaTable) -> None:
    if t.alpha_ijk.shape != (c.q, c.r):
        raise ValueError(
            f"weight table shape {t.alpha_ijk.shape} does not match counts ({c.q}, {c.r})"
        )


def empirical_entropy(c: LocalCounts) -> float:
    """Sum over observed configurations of the entropy of the row frequencies."""
    total = 0.0
    for j in range(c.q):
        n_ij = int(c.n_ij[j])
        if n_ij == 0:
            continue
        for k in range(c.r):
            n = int(c.n_ijk[j, k])
            if n > 0:
                p = n / n_ij
                total -= p * math.log(p)
    return total


def marginal_posterior_entropy(
    c: LocalCounts, t: AlphaTable, rows: str = "observed"
) -> float:
    """Plug-in entropy of the posterior-mean probabilities.

    ``rows`` selects which configurations enter the sum: ``"observed"`` (the
    default, matching the reference tables this package reproduces) restricts
    to n_ij > 0, while ``"all"`` also includes prior-only rows with positive
    weight, each contributing the entropy of the prior mean.
    """
    _check_shapes(c, t)
    mask = _row_mask(c, t, rows)
    total = 0.0
    for j in np.flatnonzero(mask):
        denom = float(t.alpha_ij[j]) + int(c.n_ij[j])
        for k in range(c.r):
            p = (float(t.alpha_ijk[j, k]) + int(c.n_ijk[j, k])) / denom
            if p > 0:
                total -= p * math.log(p)
    return total


def posterior_expected_entropy(c: LocalCounts, t: AlphaTable, rows: str = "all") -> float:
    """Exact posterior mean of the conditional entropy (digamma closed form).

    Rows with zero weight and zero counts contribute nothing, which is what
    makes the sparse prior immune to inflation from unobserved configurations.
    """
    _check_shapes(c, t)
    mask = _row_mask(c, t, rows)
    total = 0.0
    for j in np.flatnonzero(mask):
        denom = float(t.alpha_ij[j]) + int(c.n_ij[j])
        total += digamma(denom + 1.0)
        for k in range(c.r):
            cell = float(t.alpha_ijk[j, k]) + int(c.n_ijk[j, k])
            if cell > 0:
                total -= cell / denom * digamma(cell + 1.0)
    return total


def lemma1_bias(c: LocalCounts, t: AlphaTable, rows: str = "observed") -> float:
    """Bias term sum_j (r - 1) / (2 (a_ij + n_ij)) linking the two posterior estimators."""
    _check_shapes(c, t)
    mask = _row_mask(c, t, rows)
    total = 0.0
    for j in np.flatnonzero(mask):
        denom = float(t.alpha_ij[j]) + int(c.n_ij[j])
        total += (c.r - 1) / (2.0 * denom)
    return total


def lemma1_approx(c: LocalCounts, t: AlphaTable, rows: str = "observed") -> float:
    """Second-order approximation of the expected entropy: plug-in minus bias.

    The error decays quadratically in the augmented row totals a_ij + n_ij,
    provided every evaluated cell's augmented count grows; cells pinned at
    zero counts keep a fixed per-cell error whose weight only decays linearly.
    """
    return marginal_posterior_entropy(c, t, rows) - lemma1_bias(c, t, rows)


def me_score(c: LocalCounts, spec: AlphaSpec) -> float:
    """Expected entropy weighted by the marginal likelihood.

    For point priors this is posterior_expected_entropy * exp(log score); the
    mixture kind averages the per-component products.  This is the quantity
    compared between candidate structures under the maximum-entropy rule.
    """
    if spec.kind == "bdla":
        parts = []
        for s in bdla_grid(spec.level):
            t = alpha_table(AlphaSpec.bdeu(s), c)
            parts.append(
                posterior_expected_entropy(c, t) * math.exp(local_log_bd(c, t))
            )
        return sum(parts) / len(parts)
    t = alpha_table(spec, c)
    return posterior_expected_entropy(c, t) * math.exp(local_log_bd(c, t))


def unobserved_config_term(
    r: int, alpha_ijk: float, n_unobserved: int
) -> tuple[float, float]:
    """Contribution of prior-only configurations to the expected entropy.

    Returns ``(exact, approx)`` where exact is
    n_unobserved * (psi(r*a + 1) - psi(a + 1)) -- the sum the closed form
    assigns to rows with no observations -- and approx is the displayed
    second-order form n_unobserved * (log r - (r - 1) / (2 r a)).  With zero
    weight the ratios cancel and both terms are exactly 0.
    """
    if r < 1 or n_unobserved < 0:
        raise ValueError("need r >= 1 and n_unobserved >= 0")
    if alpha_ijk < 0 or not math.isfinite(alpha_ijk):
        raise ValueError(f"alpha_ijk must be finite and >= 0, got {alpha_ijk!r}")
    if alpha_ijk == 0.0 or n_unobserved == 0:
        return (0.0, 0.0)
    exact = n_unobserved * (digamma(r * alpha_ijk + 1.0) - digamma(alpha_ijk + 1.0))
    a_ij = r * alpha_ijk
    approx = n_unobserved * (math.log(r) - (r - 1) / (2.0 * a_ij))
    return (exact, approx)


def mc_expected_entropy(
    c: LocalCounts,
    t: AlphaTable,
    samples: int = 100_000,
    seed: int = 0,
    chunk_size: int = 20_000,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the expected entropy with its standard error.

    Draws row-wise Dirichlet posteriors as normalised unit-scale gamma
    variates and averages the plug-in conditional entropy.  Deterministic for
    a fixed seed; chunked accumulation keeps memory bounded while partial
    sums combine in chunk order.
    """
    _check_shapes(c, t)
    if samples < 1000:
        raise ValueError("need at least 1000 samples for a usable standard error")
    rng = np.random.default_rng(seed)
    totals = np.zeros(samples)
    for j in range(c.q):
        shape = t.alpha_ijk[j] + c.n_ijk[j]
        if shape.sum() == 0:
            continue
        done = 0
        while done < samples:
            m = min(chunk_size, samples - done)
            draws = rng.standard_gamma(shape, size=(m, c.r))
            p = draws / draws.sum(axis=1, keepdims=True)
            with np.errstate(divide="ignore", invalid="ignore"):
                h = np.where(p > 0, -p * np.log(p), 0.0)
            totals[done : done + m] += h.sum(axis=1)
            done += m
    estimate = float(totals.mean())
    stderr = float(totals.std(ddof=1) / math.sqrt(samples))
    return (estimate, stderr)


@dataclass(frozen=True)
class EntropyReport:
    """All entropy estimators for one family under one prior choice."""

    empirical: float
    marginal_posterior: float
    expected_posterior: float
    lemma1_bias: float
    me_score: float


def entropy_report(c: LocalCounts, spec: AlphaSpec, rows: str = "observed") -> EntropyReport:
    """Assemble the full report; ``rows`` only affects the plug-in estimator
    and the bias term (the exact expected entropy always includes every row
    with positive weight or counts)."""
    if spec.kind == "bdla":
        # report the estimators at the grid centre, the mixture only for the
        # likelihood-weighted product
        t = alpha_table(AlphaSpec.bdeu(spec.alpha), c)
    else:
        t = alpha_table(spec, c)
    return EntropyReport(
        empirical=empirical_entropy(c),
        marginal_posterior=marginal_posterior_entropy(c, t, rows),
        expected_posterior=posterior_expected_entropy(c, t),
        lemma1_bias=lemma1_bias(c, t, rows),
        me_score=me_score(c, spec),
    )
