"""Integer-levelled graphs: balls of regular trees, the coset tree on
which a lamplighter family acts, and fiber products of two such graphs
over matching level functions.

Tree vertices carry coordinates (n, c): an integer level n and a finite
configuration supported on positions >= n.  The parent (one step toward
the distinguished end) forgets position n; a vertex has q children.
"""

from __future__ import annotations

import csv
import io
import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .metric import DistanceMatrix
from .words import GroupPoint


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class TreeVertex:
    n: int
    c: tuple  # sorted ((position, value), ...), positions >= n, values nonzero

    def __post_init__(self):
        if any(pos < self.n for pos, _ in self.c):
            raise TreeError(f"configuration below level {self.n}")

    def parent(self):
        return TreeVertex(self.n + 1, tuple((p, v) for p, v in self.c if p >= self.n + 1))

    def children(self, q):
        out = []
        for val in range(q):
            extra = ((self.n - 1, val),) if val else ()
            out.append(TreeVertex(self.n - 1, tuple(sorted(extra + self.c))))
        return out

    def id(self):
        return f"{self.n}|" + ",".join(f"{p}:{v}" for p, v in self.c)

    def __repr__(self):
        return self.id()


BASEPOINT = TreeVertex(0, ())


def tree_distance(v: TreeVertex, w: TreeVertex) -> int:
    """Graph distance via the lowest common ancestor level."""
    cv, cw = dict(v.c), dict(w.c)
    top = max([v.n, w.n] + [p + 1 for p in set(cv) | set(cw) if cv.get(p) != cw.get(p)])
    return (top - v.n) + (top - w.n)


# ---------------------------------------------------------------------------
# The G-action on the coset tree (lamplighter families)
# ---------------------------------------------------------------------------
#
# Vertices encode cosets of the stabilizer A = {support >= 0}: the coset
# of (h, m) sits at level n = -m and keeps h at positions below m,
# re-indexed by the reflection i = -pos - 1 so the configuration lives
# on [n, +oo).  The level function b'(v) = n then satisfies
# b'(g.v) = b'(v) - m(g), and alpha moves the basepoint to a child.


def _reflect(config):
    return tuple(sorted((-pos - 1, val) for pos, val in config))


def _require_lamplighter(family):
    if family.config().get("family") != "lamplighter":
        raise TreeError(f"tree action unsupported for {family.name}")


def vertex_level(v: TreeVertex) -> int:
    """The equivariant level b'(v)."""
    return v.n


def vertex_rep(family, v: TreeVertex) -> GroupPoint:
    """A group element whose coset is v (acts on the basepoint to give v)."""
    _require_lamplighter(family)
    return GroupPoint(family, _reflect(v.c), -v.n)


def tree_act(g: GroupPoint, v: TreeVertex) -> TreeVertex:
    """Left action on cosets; a graph automorphism commuting with the
    parent map and shifting levels by -m(g)."""
    family = g.family
    _require_lamplighter(family)
    p = g * vertex_rep(family, v)
    n = -p.m
    config = tuple((i, val) for i, val in _reflect(p.h) if i >= n)
    return TreeVertex(n, config)


def tree_transitivity_witness(family, v: TreeVertex, w: TreeVertex) -> GroupPoint:
    """A group element g with tree_act(g, v) = w."""
    g = vertex_rep(family, w) * vertex_rep(family, v).inverse()
    assert tree_act(g, v) == w
    return g


def tree_qi_probe(family, count=200, max_len=8, seed=0, unchecked=False):
    """Compare word length with orbit tree distance on sampled elements."""
    from .metric import qi_embedding_check
    from .words import sample_points, word_length

    samples = set()
    for g in sample_points(family, count, max_len=max_len, seed=seed):
        s = word_length(g, unchecked=unchecked)
        t = tree_distance(BASEPOINT, tree_act(g, BASEPOINT))
        samples.add((s, t))
    return qi_embedding_check(sorted(samples))


# ---------------------------------------------------------------------------
# Levelled graphs
# ---------------------------------------------------------------------------


@dataclass
class BusemannGraph:
    """Finite connected graph with an integer level on each vertex; every
    edge changes the level by exactly +-1.  `interior` marks vertices all
    of whose neighbours in the ambient infinite object are present."""

    vertices: list
    edges: list
    b: dict
    interior: set = field(default_factory=set)

    def __post_init__(self):
        self._adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            self._adj[u].append(v)
            self._adj[v].append(u)

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def validate(self):
        for u, v in self.edges:
            if abs(self.b[u] - self.b[v]) != 1:
                raise TreeError(f"edge ({u}, {v}) changes the level by {self.b[v] - self.b[u]}")
        if self.vertices:
            seen = {self.vertices[0]}
            queue = deque(seen)
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            if len(seen) != len(self.vertices):
                raise TreeError("graph is not connected")
        return self

    def distance_matrix(self) -> DistanceMatrix:
        n = len(self.vertices)
        index = {v: i for i, v in enumerate(self.vertices)}
        d = np.full((n, n), -1, dtype=np.int64)
        for src in self.vertices:
            i = index[src]
            d[i, i] = 0
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if d[i, index[w]] < 0:
                        d[i, index[w]] = d[i, index[u]] + 1
                        queue.append(w)
        if (d < 0).any():
            raise TreeError("graph is not connected")
        return DistanceMatrix(self.vertices, d)

    def to_dot(self):
        lines = ["graph levelled {"]
        for v in self.vertices:
            lines.append(f'  "{v}" [label="{v}\\nb={self.b[v]}"];')
        for u, v in self.edges:
            lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines)

    def to_adjacency_csv(self, stream=None):
        buf = stream or io.StringIO()
        close = False
        if isinstance(buf, (str, os.PathLike)):
            buf, close = open(buf, "w", newline=""), True
        try:
            writer = csv.writer(buf)
            writer.writerow(["u", "v", "b_u", "b_v"])
            for u, v in self.edges:
                writer.writerow([u, v, self.b[u], self.b[v]])
        finally:
            if close:
                buf.close()
        return None if stream is not None else buf.getvalue()


def regular_tree_ball(k, levels, orientation=-1):
    """Ball of the (k+1)-regular tree around the basepoint, with integer
    levels toward a distinguished end: each vertex has one neighbour one
    step toward the end and k away from it.

    With the default orientation the level is -n, so the k-fold branching
    happens in the +1 level direction.
    """
    if k < 1 or levels < 0:
        raise TreeError("need k >= 1 and levels >= 0")
    dist = {BASEPOINT: 0}
    order = [BASEPOINT]
    queue = deque([BASEPOINT])
    while queue:
        v = queue.popleft()
        if dist[v] == levels:
            continue
        for w in [v.parent()] + v.children(k):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    ids = {v: v.id() for v in order}
    vertices = [ids[v] for v in order]
    edges = []
    for v in order:
        p = v.parent()
        if p in dist:
            edges.append((ids[v], ids[p]))
    b = {ids[v]: orientation * v.n for v in order}
    interior = {ids[v] for v in order if dist[v] < levels}
    return BusemannGraph(vertices, edges, b, interior)


def lamplighter_tree_ball(family, levels):
    """Orbit ball of the coset tree, labelled with the equivariant level
    b' = n (so b'(g.v) = b'(v) - m(g))."""
    _require_lamplighter(family)
    return regular_tree_ball(family.q, levels, orientation=1)


# ---------------------------------------------------------------------------
# Fiber products
# ---------------------------------------------------------------------------


def millefeuille(X: BusemannGraph, T: BusemannGraph) -> BusemannGraph:
    """Fiber product over the level functions: vertices are pairs with
    b(x) = b'(y), edges pair edges of X and T moving in the same level
    direction, and the output level is b(x)."""
    pairs = []
    by_level = {}
    for y in T.vertices:
        by_level.setdefault(T.b[y], []).append(y)
    for x in X.vertices:
        for y in by_level.get(X.b[x], []):
            pairs.append((x, y))
    if not pairs:
        raise TreeError("empty fiber: the level ranges do not meet")

    ids = {p: f"{p[0]};{p[1]}" for p in pairs}
    edges = []
    t_adj = {y: T.neighbors(y) for y in T.vertices}
    for x, y in pairs:
        for x2 in X.neighbors(x):
            step = X.b[x2] - X.b[x]
            for y2 in t_adj[y]:
                if T.b[y2] - T.b[y] == step and ids[(x, y)] < ids[(x2, y2)]:
                    edges.append((ids[(x, y)], ids[(x2, y2)]))
    b = {ids[p]: X.b[p[0]] for p in pairs}
    interior = {ids[(x, y)] for x, y in pairs if x in X.interior and y in T.interior}
    graph = BusemannGraph([ids[p] for p in pairs], edges, b, interior)
    return graph


def line_fiber_isomorphic(product: BusemannGraph, T: BusemannGraph) -> bool:
    """Check the degenerate case: when X has one vertex per level, the
    fiber product projects isomorphically onto T."""
    mapping = {pid: pid.partition(";")[2] for pid in product.vertices}
    if sorted(mapping.values()) != sorted(T.vertices):
        return False
    prod_edges = {frozenset((mapping[u], mapping[v])) for u, v in product.edges}
    t_edges = {frozenset((u, v)) for u, v in T.edges}
    return prod_edges == t_edges
