"""Shared oracles and generators for the test suite.

The oracles here deliberately avoid the code paths they check: exact
rational arithmetic (gamma-ratio recurrences over fractions.Fraction) for the
marginal-likelihood values, a sequential-predictive product for the same
quantity, and dataset/DAG generators used by the property suites.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from bnscore import Dag, Dataset, LocalCounts, Variable, counts, is_acyclic
from bnscore import same_equivalence_class


def make_counts(n_ijk, parent_levels=None, child: int = 0) -> LocalCounts:
    """Build a LocalCounts directly from a (q, r) table of non-negative ints."""
    table = np.asarray(n_ijk, dtype=np.int64)
    q, r = table.shape
    if parent_levels is None:
        parent_levels = () if q == 1 else (q,)
    parents = tuple(range(child + 1, child + 1 + len(parent_levels)))
    table = table.copy()
    table.setflags(write=False)
    n_ij = table.sum(axis=1)
    n_ij.setflags(write=False)
    r_tilde = (table > 0).sum(axis=1)
    r_tilde.setflags(write=False)
    return LocalCounts(
        child=child,
        parents=parents,
        r=r,
        q=q,
        n_ijk=table,
        n_ij=n_ij,
        q_tilde=int((n_ij > 0).sum()),
        r_tilde=r_tilde,
        parent_levels=tuple(parent_levels),
    )


def scale_counts(c: LocalCounts, factor: int) -> LocalCounts:
    return make_counts(c.n_ijk * factor, parent_levels=c.parent_levels, child=c.child)


def fraction_bd(n_ijk, alpha_ijk) -> Fraction:
    """Exact marginal likelihood via the recurrence G(a+n)/G(a) = prod(a+t).

    Independent of the log-gamma route: pure rational arithmetic, valid for
    rational weights and integer counts.  Rows with zero total weight and no
    observations are skipped, mirroring the cancellation of their ratios.
    """

    def ratio(a: Fraction, n: int) -> Fraction:
        out = Fraction(1)
        for t in range(n):
            out *= a + t
        return out

    total = Fraction(1)
    n_ijk = np.asarray(n_ijk)
    for j in range(n_ijk.shape[0]):
        alphas = [Fraction(a) for a in alpha_ijk[j]]
        a_ij = sum(alphas, Fraction(0))
        n_ij = int(n_ijk[j].sum())
        if a_ij == 0:
            if n_ij > 0:
                raise ValueError("counts outside prior support")
            continue
        total /= ratio(a_ij, n_ij)
        for k in range(n_ijk.shape[1]):
            total *= ratio(alphas[k], int(n_ijk[j, k]))
    return total


def expand_rows(c: LocalCounts) -> list[tuple[int, int]]:
    """The multiset of (configuration, child level) observations behind a table."""
    rows = []
    for j in range(c.q):
        for k in range(c.r):
            rows.extend([(j, k)] * int(c.n_ijk[j, k]))
    return rows


def prequential_log(rows: list[tuple[int, int]], alpha_ijk) -> float:
    """Log of the ordered product of one-step predictive probabilities.

    For each observation (j, k) in sequence the factor is
    (a_jk + m_jk) / (a_j + m_j) with m the counts of previously seen rows.
    This is the sequential route to the same marginal likelihood, free of any
    gamma function.
    """
    alpha = np.asarray(alpha_ijk, dtype=float)
    seen = np.zeros_like(alpha)
    total = 0.0
    for j, k in rows:
        m_j = seen[j].sum()
        total += math.log((alpha[j, k] + seen[j, k]) / (alpha[j].sum() + m_j))
        seen[j, k] += 1
    return total


def random_dataset(
    rng: np.random.Generator,
    n_vars: int,
    max_levels: int = 3,
    n_rows: int = 20,
) -> Dataset:
    """IID uniform categorical sample with 2..max_levels levels per variable."""
    level_counts = rng.integers(2, max_levels + 1, size=n_vars)
    rows = np.column_stack(
        [rng.integers(0, lc, size=n_rows) for lc in level_counts]
    )
    variables = tuple(
        Variable(f"X{i}", tuple(str(v) for v in range(lc)))
        for i, lc in enumerate(level_counts)
    )
    return Dataset(variables, rows)


def random_dag(rng: np.random.Generator, n_vars: int, arc_prob: float = 0.4) -> Dag:
    """Random DAG: sample an order, include forward arcs independently."""
    order = list(rng.permutation(n_vars))
    arcs = set()
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            if rng.random() < arc_prob:
                arcs.add((order[i], order[j]))
    return Dag(n_vars, frozenset(arcs))


def random_equivalent_pair(
    rng: np.random.Generator, n_vars: int, max_tries: int = 200
) -> tuple[Dag, Dag]:
    """A DAG and a distinct member of its equivalence class (single reversal)."""
    for _ in range(max_tries):
        g = random_dag(rng, n_vars)
        arcs = list(g.sorted_arcs())
        rng.shuffle(arcs)
        for u, v in arcs:
            candidate_arcs = (g.arcs - {(u, v)}) | {(v, u)}
            if not is_acyclic(n_vars, candidate_arcs):
                continue
            g2 = Dag(n_vars, candidate_arcs)
            if same_equivalence_class(g, g2):
                return g, g2
    raise RuntimeError("could not generate an equivalent pair")


def dataset_from_dag(
    rng: np.random.Generator,
    g: Dag,
    level_counts: list[int],
    n_rows: int,
) -> Dataset:
    """Sample a dataset from ``g`` with Dirichlet(1) conditional tables."""
    from bnscore import topological_order

    n_vars = g.node_count
    cpts = {}
    for v in range(n_vars):
        ps = g.parents(v)
        q = 1
        for p in ps:
            q *= level_counts[p]
        cpts[v] = rng.dirichlet(np.ones(level_counts[v]), size=q)
    rows = np.zeros((n_rows, n_vars), dtype=np.int64)
    order = topological_order(g)
    for t in range(n_rows):
        for v in order:
            ps = g.parents(v)
            j = 0
            for p in ps:
                j = j * level_counts[p] + rows[t, p]
            rows[t, v] = rng.choice(level_counts[v], p=cpts[v][j])
    variables = tuple(
        Variable(f"X{i}", tuple(str(s) for s in range(level_counts[i])))
        for i in range(n_vars)
    )
    return Dataset(variables, rows)


def shuffled(rows: list, seed: int) -> list:
    out = list(rows)
    random.Random(seed).shuffle(out)
    return out
