"""Greedy structure search with decomposable-score caching.

Hill climbing walks the space of DAGs by single-arc additions, deletions and
reversals, re-using cached per-family scores so each candidate move costs at
most two family evaluations.  :func:`exhaustive_best` enumerates every DAG on
up to five nodes and serves as the ground-truth oracle for the search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .dag import Dag, is_acyclic
from .dataset import Dataset, counts
from .scores import ScoreSpec, local_score

__all__ = [
    "Move",
    "neighbors",
    "HillClimbResult",
    "hill_climb",
    "exhaustive_best",
    "all_dags",
]

# move kinds in their deterministic ordering ("add" < "delete" < "reverse")
_KIND_ORDER = ("add", "delete", "reverse")

_MAX_EXHAUSTIVE_NODES = 5
_SCORE_TIE_TOL = 1e-10


@dataclass(frozen=True, order=True)
class Move:
    kind: str
    u: int
    v: int


def neighbors(g: Dag, max_parents: int = 5) -> list[Move]:
    """All legal single-arc moves from ``g`` in deterministic order.

    Additions and reversals must keep the graph acyclic and must not push any
    node past ``max_parents``; deletions are always legal.  Ordered by
    (kind, u, v) with kinds ordered add < delete < reverse.
    """
    if max_parents < 0:
        raise ValueError("max_parents must be >= 0")
    n = g.node_count
    parent_count = [len(g.parents(v)) for v in range(n)]
    moves: list[Move] = []
    for u in range(n):
        for v in range(n):
            if u == v or g.has_arc(u, v) or g.has_arc(v, u):
                continue
            if parent_count[v] + 1 > max_parents:
                continue
            if is_acyclic(n, g.arcs | {(u, v)}):
                moves.append(Move("add", u, v))
    for u, v in g.sorted_arcs():
        moves.append(Move("delete", u, v))
    for u, v in g.sorted_arcs():
        if parent_count[u] + 1 > max_parents:
            continue
        if is_acyclic(n, (g.arcs - {(u, v)}) | {(v, u)}):
            moves.append(Move("reverse", u, v))
    moves.sort(key=lambda m: (_KIND_ORDER.index(m.kind), m.u, m.v))
    return moves


class _FamilyCache:
    """Memoised per-family log scores; entries never change once written."""

    def __init__(self, data: Dataset, spec: ScoreSpec):
        self._data = data
        self._spec = spec
        self._cache: dict[tuple[int, tuple[int, ...]], float] = {}

    def __call__(self, child: int, parents: tuple[int, ...]) -> float:
        key = (child, parents)
        value = self._cache.get(key)
        if value is None:
            value = local_score(counts(self._data, child, parents), self._spec)
            self._cache[key] = value
        return value


@dataclass(frozen=True)
class HillClimbResult:
    dag: Dag
    score: float
    moves: tuple[tuple[int, Move, float], ...]  # (iteration, move, delta)
    iterations: int


def _move_delta(cache: _FamilyCache, g: Dag, move: Move) -> float:
    u, v = move.u, move.v
    if move.kind == "add":
        old = g.parents(v)
        new = tuple(sorted(old + (u,)))
        return cache(v, new) - cache(v, old)
    if move.kind == "delete":
        old = g.parents(v)
        new = tuple(p for p in old if p != u)
        return cache(v, new) - cache(v, old)
    # reverse: v loses parent u, u gains parent v
    old_v = g.parents(v)
    new_v = tuple(p for p in old_v if p != u)
    old_u = g.parents(u)
    new_u = tuple(sorted(old_u + (v,)))
    return (cache(v, new_v) - cache(v, old_v)) + (cache(u, new_u) - cache(u, old_u))


def _apply(g: Dag, move: Move) -> Dag:
    if move.kind == "add":
        return g.with_arc(move.u, move.v)
    if move.kind == "delete":
        return g.without_arc(move.u, move.v)
    return g.with_reversed_arc(move.u, move.v)


def hill_climb(
    data: Dataset,
    spec: ScoreSpec,
    max_parents: int = 5,
    max_iter: int = 200,
) -> HillClimbResult:
    """Greedy ascent from the empty DAG to a local score optimum.

    Each iteration applies the single move with the largest strict score
    improvement (first move in neighbor order on ties) and stops when no move
    improves the score.  Fully deterministic for fixed inputs.
    """
    if data.n == 0:
        raise ValueError("cannot learn from an empty sample")
    if max_parents < 0:
        raise ValueError("max_parents must be >= 0")
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")

    cache = _FamilyCache(data, spec)
    n = len(data.variables)
    current = Dag.empty(n)
    score = sum(cache(i, ()) for i in range(n))
    log: list[tuple[int, Move, float]] = []

    for iteration in range(1, max_iter + 1):
        best_move: Move | None = None
        best_delta = 0.0
        for move in neighbors(current, max_parents):
            delta = _move_delta(cache, current, move)
            if delta > best_delta:
                best_move, best_delta = move, delta
        if best_move is None:
            break
        current = _apply(current, best_move)
        score += best_delta
        log.append((iteration, best_move, best_delta))
    return HillClimbResult(dag=current, score=score, moves=tuple(log), iterations=len(log))


def _parent_subsets(n: int) -> dict[int, list[tuple[int, ...]]]:
    """All parent subsets per node, smallest first, lexicographic within size."""
    out: dict[int, list[tuple[int, ...]]] = {}
    for v in range(n):
        others = [u for u in range(n) if u != v]
        subsets: list[tuple[int, ...]] = []
        for size in range(n):
            subsets.extend(itertools.combinations(others, size))
        out[v] = subsets
    return out


def _acyclic_parent_map(parent_map: tuple[tuple[int, ...], ...]) -> bool:
    n = len(parent_map)
    remaining = set(range(n))
    indeg = {v: len(parent_map[v]) for v in remaining}
    children: dict[int, list[int]] = {v: [] for v in remaining}
    for v, ps in enumerate(parent_map):
        for u in ps:
            children[u].append(v)
    ready = [v for v in remaining if indeg[v] == 0]
    seen = 0
    while ready:
        node = ready.pop()
        seen += 1
        for kid in children[node]:
            indeg[kid] -= 1
            if indeg[kid] == 0:
                ready.append(kid)
    return seen == n


def all_dags(node_count: int) -> Iterator[Dag]:
    """Every DAG on ``node_count`` nodes (25 on three nodes, 543 on four)."""
    if node_count > _MAX_EXHAUSTIVE_NODES:
        raise ValueError(f"refusing to enumerate DAGs on more than {_MAX_EXHAUSTIVE_NODES} nodes")
    subsets = _parent_subsets(node_count)
    for parent_map in itertools.product(*(subsets[v] for v in range(node_count))):
        if _acyclic_parent_map(parent_map):
            arcs = frozenset(
                (u, v) for v, ps in enumerate(parent_map) for u in ps
            )
            yield Dag(node_count, arcs)


def exhaustive_best(data: Dataset, spec: ScoreSpec) -> tuple[Dag, float]:
    """Globally best-scoring DAG by enumeration (at most five nodes).

    Ties within 1e-10 are broken towards fewer arcs, then lexicographically
    smaller sorted arc lists, so the result is deterministic.
    """
    n = len(data.variables)
    if n > _MAX_EXHAUSTIVE_NODES:
        raise ValueError(f"exhaustive search supports at most {_MAX_EXHAUSTIVE_NODES} nodes")
    cache = _FamilyCache(data, spec)
    subsets = _parent_subsets(n)

    best_score = -float("inf")
    best_map: tuple[tuple[int, ...], ...] | None = None
    best_key: tuple[int, list[tuple[int, int]]] | None = None
    for parent_map in itertools.product(*(subsets[v] for v in range(n))):
        if not _acyclic_parent_map(parent_map):
            continue
        score = sum(cache(v, ps) for v, ps in enumerate(parent_map))
        arcs = sorted((u, v) for v, ps in enumerate(parent_map) for u in ps)
        key = (len(arcs), arcs)
        if score > best_score + _SCORE_TIE_TOL:
            best_score, best_map, best_key = score, parent_map, key
        elif score >= best_score - _SCORE_TIE_TOL and (best_key is None or key < best_key):
            best_score = max(best_score, score)
            best_map, best_key = parent_map, key
    assert best_map is not None
    arcs = frozenset((u, v) for v, ps in enumerate(best_map) for u in ps)
    return Dag(n, arcs), best_score
