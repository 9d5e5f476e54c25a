"""Directed acyclic graphs over variable indices.

A :class:`Dag` is an immutable value: mutation helpers return new instances,
and acyclicity is enforced on every construction.  Equivalence of two DAGs is
decided by comparing skeletons and v-structures (colliders whose parents are
not adjacent).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import FormatError

__all__ = [
    "Dag",
    "is_acyclic",
    "topological_order",
    "skeleton",
    "v_structures",
    "same_equivalence_class",
    "parse_dag",
    "format_dag",
    "to_dot",
]

Arc = tuple[int, int]


def _validate_arcs(node_count: int, arcs: Iterable[Arc]) -> frozenset[Arc]:
    out = set()
    for arc in arcs:
        u, v = arc
        u, v = int(u), int(v)
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise ValueError(f"arc {arc!r} out of range for {node_count} nodes")
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        out.add((u, v))
    return frozenset(out)


def is_acyclic(node_count: int, arcs: Iterable[Arc]) -> bool:
    """True iff the directed graph has no cycle (so a topological order exists)."""
    children: dict[int, list[int]] = {}
    for u, v in arcs:
        children.setdefault(u, []).append(v)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * node_count
    for start in range(node_count):
        if color[start] != WHITE:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            node, i = stack[-1]
            kids = children.get(node, ())
            if i < len(kids):
                stack[-1] = (node, i + 1)
                kid = kids[i]
                if color[kid] == GRAY:
                    return False
                if color[kid] == WHITE:
                    color[kid] = GRAY
                    stack.append((kid, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return True


@dataclass(frozen=True)
class Dag:
    """A DAG over ``node_count`` variables with arcs (parent, child)."""

    node_count: int
    arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise ValueError("node_count must be >= 0")
        arcs = _validate_arcs(self.node_count, self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if not is_acyclic(self.node_count, arcs):
            raise ValueError("graph contains a directed cycle")

    @classmethod
    def empty(cls, node_count: int) -> "Dag":
        return cls(node_count, frozenset())

    def parents(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(u for u, w in self.arcs if w == v))

    def children(self, u: int) -> tuple[int, ...]:
        return tuple(sorted(w for p, w in self.arcs if p == u))

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs or (v, u) in self.arcs

    def with_arc(self, u: int, v: int) -> "Dag":
        return Dag(self.node_count, self.arcs | {(u, v)})

    def without_arc(self, u: int, v: int) -> "Dag":
        return Dag(self.node_count, self.arcs - {(u, v)})

    def with_reversed_arc(self, u: int, v: int) -> "Dag":
        if (u, v) not in self.arcs:
            raise ValueError(f"arc ({u}, {v}) not present")
        return Dag(self.node_count, (self.arcs - {(u, v)}) | {(v, u)})

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)


def topological_order(g: Dag) -> list[int]:
    """One topological order of ``g`` (Kahn; ties resolved by node index)."""
    indeg = [0] * g.node_count
    for _, v in g.arcs:
        indeg[v] += 1
    ready = sorted(i for i in range(g.node_count) if indeg[i] == 0)
    order: list[int] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for kid in g.children(node):
            indeg[kid] -= 1
            if indeg[kid] == 0:
                ready.append(kid)
        ready.sort()
    return order


def skeleton(g: Dag) -> frozenset[tuple[int, int]]:
    """Undirected edge set: each arc with direction dropped, as (min, max) pairs."""
    return frozenset((min(u, v), max(u, v)) for u, v in g.arcs)


def v_structures(g: Dag) -> frozenset[tuple[int, int, int]]:
    """Colliders j -> i <- k with j, k non-adjacent, canonicalised as (j, i, k), j < k."""
    out = set()
    for i in range(g.node_count):
        ps = g.parents(i)
        for a in range(len(ps)):
            for b in range(a + 1, len(ps)):
                j, k = ps[a], ps[b]
                if not g.adjacent(j, k):
                    out.add((j, i, k))
    return frozenset(out)


def same_equivalence_class(g1: Dag, g2: Dag) -> bool:
    """True iff the two DAGs share skeleton and v-structures."""
    if g1.node_count != g2.node_count:
        raise ValueError("DAGs have different node counts")
    return skeleton(g1) == skeleton(g2) and v_structures(g1) == v_structures(g2)


def parse_dag(text: str, names: Sequence[str]) -> Dag:
    """Parse the one-arc-per-line text format ("Parent -> Child").

    Blank lines and '#' comments are ignored; variable names must come from
    ``names``, which also fixes the node count.
    """
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate variable names")
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("->")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'Parent -> Child', got {raw!r}")
        u_name, v_name = parts[0].strip(), parts[1].strip()
        for name in (u_name, v_name):
            if name not in index:
                raise FormatError(f"line {lineno}: unknown variable {name!r}")
        arcs.append((index[u_name], index[v_name]))
    try:
        return Dag(len(names), frozenset(arcs))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_dag(g: Dag, names: Sequence[str]) -> str:
    """Inverse of :func:`parse_dag`; arcs sorted for reproducible output."""
    lines = [f"{names[u]} -> {names[v]}" for u, v in g.sorted_arcs()]
    return "\n".join(lines) + ("\n" if lines else "")


def to_dot(g: Dag, names: Sequence[str]) -> str:
    """DOT digraph text for visualisation."""
    lines = ["digraph g {"]
    for name in names:
        lines.append(f'  "{name}";')
    for u, v in g.sorted_arcs():
        lines.append(f'  "{names[u]}" -> "{names[v]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
