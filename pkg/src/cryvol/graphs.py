"""Signed multigraphs with loops, their type C roots, and the complete graph
families behind the CRY, CRYD and CRYC polytopes.

Vertices are 1-based.  An edge is ``(i, j, sign)`` with ``i <= j``; a loop
``(i, i, +)`` is always positive.  Parallel copies of the same edge shape are
told apart by a ``tag`` (0, 1, 2, ...), so ``(i, v, +)`` and ``(i, v, +)^1``
can be addressed individually.

The canonical edge order is lexicographic in ``(i, j, sign, tag)`` with
``"+" < "-"``.  It fixes the column order of :func:`incidence_matrix` and the
coordinate order of every flow vector in the package.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

PLUS = "+"
MINUS = "-"

ALL_VERTICES = "all_vertices"
FIRST_N = "first_n"


@dataclass(frozen=True, order=True)
class SignedEdge:
    i: int
    j: int
    sign: str
    tag: int = 0

    def __post_init__(self):
        if self.sign not in (PLUS, MINUS):
            raise ValueError(f"edge sign must be '+' or '-', got {self.sign!r}")
        if self.i < 1 or self.j < self.i:
            raise ValueError(f"edge endpoints must satisfy 1 <= i <= j, got ({self.i}, {self.j})")
        if self.i == self.j and self.sign != PLUS:
            raise ValueError("loops are always positive")
        if self.tag < 0:
            raise ValueError("tag must be nonnegative")

    @property
    def shape(self) -> tuple[int, int, str]:
        return (self.i, self.j, self.sign)

    @property
    def is_loop(self) -> bool:
        return self.i == self.j

    @property
    def is_positive(self) -> bool:
        return self.sign == PLUS

    @property
    def is_negative(self) -> bool:
        return self.sign == MINUS

    @property
    def length(self) -> int:
        return self.j - self.i

    def root(self, size: int) -> tuple[int, ...]:
        """Type C root of the edge as a vector of length ``size``."""
        v = [0] * size
        if self.is_loop:
            v[self.i - 1] = 2
        else:
            v[self.i - 1] = 1
            v[self.j - 1] = -1 if self.is_negative else 1
        return tuple(v)

    def __str__(self) -> str:
        s = f"({self.i},{self.j},{self.sign})"
        return s if self.tag == 0 else f"{s}^{self.tag}"


def _retag(edges: Iterable[SignedEdge]) -> tuple[SignedEdge, ...]:
    # copies of one shape are interchangeable; renumber them 0..k-1 keeping
    # their relative order so that graph equality is multiset equality
    by_shape: dict[tuple, list[SignedEdge]] = {}
    for e in edges:
        by_shape.setdefault(e.shape, []).append(e)
    out = []
    for shape, group in by_shape.items():
        tags = [e.tag for e in group]
        if len(set(tags)) != len(tags):
            raise ValueError(f"duplicate tag among parallel copies of {shape}")
        for new_tag, e in enumerate(sorted(group, key=lambda e: e.tag)):
            out.append(SignedEdge(e.i, e.j, e.sign, new_tag))
    return tuple(sorted(out))


@dataclass(frozen=True)
class SignedGraph:
    """A signed multigraph on the vertex set ``[size]``.

    Edges are stored in canonical order with tags renumbered ``0..k-1`` inside
    each group of parallel copies, so two graphs compare equal exactly when
    their edge multisets agree.
    """

    size: int
    edges: tuple[SignedEdge, ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a graph needs at least one vertex")
        for e in self.edges:
            if e.j > self.size:
                raise ValueError(f"edge {e} leaves the vertex set [{self.size}]")
        object.__setattr__(self, "edges", _retag(self.edges))

    @classmethod
    def from_shapes(cls, size: int, shapes: Iterable[Sequence]) -> "SignedGraph":
        """Build a graph from ``(i, j, sign)`` triples; repeats become parallel copies."""
        counts: Counter = Counter()
        edges = []
        for i, j, sign in shapes:
            key = (int(i), int(j), sign)
            edges.append(SignedEdge(key[0], key[1], sign, counts[key]))
            counts[key] += 1
        return cls(size, tuple(edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def shapes(self) -> tuple[tuple[int, int, str], ...]:
        return tuple(e.shape for e in self.edges)

    def multiplicity(self, i: int, j: int, sign: str) -> int:
        return sum(1 for e in self.edges if e.shape == (i, j, sign))

    def loops(self) -> tuple[SignedEdge, ...]:
        return tuple(e for e in self.edges if e.is_loop)

    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def incoming(self, v: int) -> tuple[SignedEdge, ...]:
        """Negative edges ``(i, v, -)`` with ``i < v``."""
        return tuple(e for e in self.edges if e.is_negative and e.j == v)

    def outgoing(self, v: int) -> tuple[SignedEdge, ...]:
        """Edges ``(v, j, +/-)`` with ``j > v``, positive ``(i, v, +)`` and loops at ``v``."""
        return tuple(
            e for e in self.edges
            if (e.i == v and e.j > v) or (e.j == v and e.is_positive)
        )

    def without(self, edge: SignedEdge) -> "SignedGraph":
        edges = list(self.edges)
        edges.remove(edge)
        return SignedGraph(self.size, tuple(edges))

    def with_edge(self, i: int, j: int, sign: str) -> "SignedGraph":
        tag = self.multiplicity(i, j, sign)
        return SignedGraph(self.size, self.edges + (SignedEdge(i, j, sign, tag),))

    def without_loops(self) -> "SignedGraph":
        return SignedGraph(self.size, tuple(e for e in self.edges if not e.is_loop))

    def is_connected(self) -> bool:
        parent = list(range(self.size + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.i)] = find(e.j)
        return len({find(v) for v in range(1, self.size + 1)}) == 1

    def to_dict(self) -> dict:
        return {
            "vertices": self.size,
            "edges": [[e.i, e.j, e.sign, e.tag] for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SignedGraph":
        counts: Counter = Counter()
        edges = []
        for item in data["edges"]:
            i, j, sign = int(item[0]), int(item[1]), item[2]
            tag = int(item[3]) if len(item) > 3 else counts[(i, j, sign)]
            counts[(i, j, sign)] += 1
            edges.append(SignedEdge(i, j, sign, tag))
        return cls(int(data["vertices"]), tuple(edges))

    @classmethod
    def from_json(cls, text: str) -> "SignedGraph":
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        return f"([{self.size}], {{{', '.join(str(e) for e in self.edges)}}})"


def _check_size(size: int):
    if size < 2:
        raise ValueError(f"need at least 2 vertices, got {size}")


def make_complete_typeA(size: int) -> SignedGraph:
    """The complete graph ``K_{n+1}`` with negative edges ``(i, j, -)``."""
    _check_size(size)
    return SignedGraph.from_shapes(
        size, [(i, j, MINUS) for i in range(1, size + 1) for j in range(i + 1, size + 1)]
    )


def make_complete_D(size: int) -> SignedGraph:
    """``K^D_{n+1}``: both signs on every pair ``i < j``, no loops."""
    _check_size(size)
    return SignedGraph.from_shapes(
        size,
        [(i, j, s) for i in range(1, size + 1) for j in range(i + 1, size + 1) for s in (MINUS, PLUS)],
    )


def make_complete_C(size: int, loop_range: str = ALL_VERTICES) -> SignedGraph:
    """``K^C_{n+1}``: ``K^D_{n+1}`` plus loops.

    ``loop_range="all_vertices"`` puts a loop at every vertex of ``[n+1]``;
    ``"first_n"`` only at ``1..n``.  The two readings give polytopes of
    different dimension; see the acceptance suite for their volumes.
    """
    _check_size(size)
    if loop_range == ALL_VERTICES:
        last = size
    elif loop_range == FIRST_N:
        last = size - 1
    else:
        raise ValueError(f"unknown loop_range {loop_range!r}")
    shapes = list(make_complete_D(size).shapes())
    shapes += [(i, i, PLUS) for i in range(1, last + 1)]
    return SignedGraph.from_shapes(size, shapes)


def make_S_kv(k: int, v: int) -> tuple[SignedEdge, ...]:
    """The block of ``2v - 1`` edges entering vertex ``v`` whose double positive
    edges run up to ``k`` and whose single negative edges start at ``k``."""
    if not 1 <= k <= v - 1:
        raise ValueError(f"need 1 <= k <= v-1, got k={k}, v={v}")
    edges = []
    for i in range(1, k):
        edges += [SignedEdge(i, v, PLUS, 0), SignedEdge(i, v, PLUS, 1)]
    edges += [SignedEdge(k, v, PLUS, 0), SignedEdge(k, v, PLUS, 1), SignedEdge(k, v, MINUS, 0)]
    for i in range(k + 1, v):
        edges += [SignedEdge(i, v, PLUS, 0), SignedEdge(i, v, MINUS, 0)]
    return tuple(edges)


def family_index_ok(a: Sequence[int]) -> bool:
    return len(a) >= 2 and a[0] == 0 and all(0 <= a[v - 1] <= v - 2 for v in range(2, len(a) + 1))


def make_family_graph(a: Sequence[int]) -> SignedGraph:
    """The member of the decomposition family with ``indeg(v) - 1 == a_v``.

    ``a = (0, a_2, ..., a_{n+1})`` with ``0 <= a_v <= v - 2``; vertex ``v``
    receives the block ``S_k^{(v)}`` with ``k = v - a_v - 1``.
    """
    a = tuple(int(x) for x in a)
    if not family_index_ok(a):
        raise ValueError(f"need a_1 = 0 and 0 <= a_v <= v-2, got {a}")
    edges: list[SignedEdge] = []
    for v in range(2, len(a) + 1):
        edges.extend(make_S_kv(v - a[v - 1] - 1, v))
    return SignedGraph(len(a), tuple(edges))


def family_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """All ``(0, a_2, ..., a_{n+1})`` with ``0 <= a_v <= v - 2``."""
    ranges = [range(v - 1) for v in range(2, n + 2)]
    for tail in product(*ranges):
        yield (0,) + tail


def family_graphs(n: int) -> list[SignedGraph]:
    """The ``n!`` graphs of the decomposition family on ``[n+1]``."""
    return [make_family_graph(a) for a in family_vectors(n)]


def incidence_matrix(G: SignedGraph) -> np.ndarray:
    """``(n+1) x N`` integer matrix whose columns are the edge roots, in canonical edge order."""
    if not G.edges:
        return np.zeros((G.size, 0), dtype=np.int64)
    return np.array([e.root(G.size) for e in G.edges], dtype=np.int64).T


def indegree(G: SignedGraph, v: int) -> int:
    if not 1 <= v <= G.size:
        raise ValueError(f"vertex {v} outside [{G.size}]")
    return len(G.incoming(v))


def netflow_of(G: SignedGraph, flow: Sequence[int]) -> tuple[int, ...]:
    """``M_G b`` for a flow vector in canonical edge order."""
    a = [0] * G.size
    for e, b in zip(G.edges, flow):
        for k, r in enumerate(e.root(G.size)):
            a[k] += r * b
    return tuple(a)


def fig1_graph() -> SignedGraph:
    """Three-vertex graph whose five roots are e1-e2, e1+e2, e1-e3, e2-e3 and 2e2."""
    return SignedGraph.from_shapes(
        3, [(1, 2, MINUS), (1, 2, PLUS), (1, 3, MINUS), (2, 3, MINUS), (2, 2, PLUS)]
    )


def fig2_graph() -> SignedGraph:
    """Three-vertex graph with negative edges 12, 23, 13 and the positive edge 13."""
    return SignedGraph.from_shapes(3, [(1, 2, MINUS), (2, 3, MINUS), (1, 3, MINUS), (1, 3, PLUS)])


def volD_counterexample() -> SignedGraph:
    """Three parallel edges (1,2,-) and a loop at 2 on ``[3]``."""
    return SignedGraph.from_shapes(3, [(1, 2, MINUS)] * 3 + [(2, 2, PLUS)])


def zero_test_graph() -> SignedGraph:
    return make_complete_C(3)


def named_graph(name: str, n: int | None = None) -> SignedGraph:
    """Look up a built-in graph by name; families take ``n`` as in ``CRY_n`` etc."""
    fixed = {
        "fig1": fig1_graph,
        "fig2": fig2_graph,
        "counterexample-volD": volD_counterexample,
        "zero-test": zero_test_graph,
    }
    if name in fixed:
        return fixed[name]()
    if n is None:
        raise ValueError(f"graph family {name!r} needs n")
    if name == "cry":
        return make_complete_typeA(n + 1)
    if name == "cryd":
        return make_complete_D(n + 1)
    if name == "cryc":
        return make_complete_C(n + 1)
    if name == "cryc-first-n":
        return make_complete_C(n + 1, FIRST_N)
    raise ValueError(f"unknown graph {name!r}")
