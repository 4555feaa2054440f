"""Dynamic integer flows and the dynamic Kostant partition function.

A positive edge ``(i, j, +)`` is split into a left half at ``i`` and a right
half at ``j``.  Putting ``m`` units on the left half creates ``m`` extra right
half-edges at ``j`` (for a loop, at ``i`` itself), each of which takes its own
nonnegative flow.  At every vertex ``v``::

    a_v + (flow on negative edges into v)
        = (negative edges out of v) + (left halves at v)
          + (original right halves at v) + (extra right halves at v)

Extras are stored as an ordered tuple per positive edge, so the two right
halves of ``x_j`` in ``(1 - x_i - x_j)^-1`` are counted as distinct slots and
the counts agree with the product generating series.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb
from typing import Iterator, Mapping, Sequence

from .graphs import (
    MINUS,
    PLUS,
    SignedEdge,
    SignedGraph,
    family_index_ok,
    indegree,
    make_complete_C,
    make_family_graph,
)


@dataclass(frozen=True)
class HalfEdgeFlow:
    left: int
    right: int
    extras: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "extras", tuple(self.extras))
        if self.left < 0 or self.right < 0 or any(x < 0 for x in self.extras):
            raise ValueError("dynamic flows are nonnegative")
        if len(self.extras) != self.left:
            raise ValueError(f"{self.left} units on the left half need {self.left} extra right halves, "
                             f"got {len(self.extras)}")

    @property
    def right_total(self) -> int:
        return self.right + sum(self.extras)


ZERO_HALF = HalfEdgeFlow(0, 0, ())


@dataclass(frozen=True)
class DynamicFlow:
    """Flows on negative edges and on the halves of positive edges."""

    negative: tuple[tuple[SignedEdge, int], ...]
    positive: tuple[tuple[SignedEdge, HalfEdgeFlow], ...]

    @classmethod
    def from_maps(cls, negative: Mapping[SignedEdge, int], positive: Mapping[SignedEdge, HalfEdgeFlow]):
        return cls(tuple(sorted(negative.items())), tuple(sorted(positive.items())))

    @cached_property
    def _neg(self) -> dict:
        return dict(self.negative)

    @cached_property
    def _pos(self) -> dict:
        return dict(self.positive)

    def neg(self, e: SignedEdge) -> int:
        return self._neg[e]

    def pos(self, e: SignedEdge) -> HalfEdgeFlow:
        return self._pos[e]

    def netflow(self, size: int) -> tuple[int, ...]:
        a = [0] * size
        for e, b in self.negative:
            a[e.i - 1] += b
            a[e.j - 1] -= b
        for e, h in self.positive:
            a[e.i - 1] += h.left
            a[e.j - 1] += h.right_total
        return tuple(a)

    def to_dict(self) -> dict:
        return {
            "negative": {str(e): b for e, b in self.negative},
            "positive": [
                {"edge": [e.i, e.j, e.sign, e.tag], "bl": h.left, "br": h.right, "extras": list(h.extras)}
                for e, h in self.positive
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def is_dynamic_flow(G: SignedGraph, a: Sequence[int], f: DynamicFlow) -> bool:
    """``f`` covers exactly the edges of ``G`` and satisfies conservation for ``a``."""
    negs = {e for e in G.edges if e.is_negative}
    poss = {e for e in G.edges if e.is_positive}
    if set(f._neg) != negs or set(f._pos) != poss:
        return False
    if any(b < 0 for b in f._neg.values()):
        return False
    return f.netflow(G.size) == tuple(a)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class _Layout:
    def __init__(self, G: SignedGraph):
        self.size = G.size
        self.out_neg = [[] for _ in range(G.size + 1)]
        self.in_neg = [[] for _ in range(G.size + 1)]
        self.lefts = [[] for _ in range(G.size + 1)]     # non-loop positive edges by left endpoint
        self.rights = [[] for _ in range(G.size + 1)]    # non-loop positive edges by right endpoint
        self.loops = [[] for _ in range(G.size + 1)]
        for e in G.edges:
            if e.is_negative:
                self.out_neg[e.i].append(e)
                self.in_neg[e.j].append(e)
            elif e.is_loop:
                self.loops[e.i].append(e)
            else:
                self.lefts[e.i].append(e)
                self.rights[e.j].append(e)


def iter_dynamic_flows(G: SignedGraph, a: Sequence[int]) -> Iterator[DynamicFlow]:
    a = tuple(int(x) for x in a)
    if len(a) != G.size:
        raise ValueError("netflow length does not match the graph")
    lay = _Layout(G)
    neg: dict[SignedEdge, int] = {}
    left: dict[SignedEdge, int] = {}
    halves: dict[SignedEdge, HalfEdgeFlow] = {}

    def at_vertex(v: int):
        if v > G.size:
            yield DynamicFlow.from_maps(neg, halves)
            return
        budget = a[v - 1] + sum(neg[e] for e in lay.in_neg[v])
        if budget < 0:
            return
        fixed = lay.out_neg[v] + lay.lefts[v] + lay.loops[v]
        for split in compositions(budget, len(fixed) + 1):
            *amounts, rest = split
            for e, b in zip(fixed, amounts):
                if e.is_negative:
                    neg[e] = b
                else:
                    left[e] = b
            # right-half slots at v: (edge, 0) is the original half, (edge, k>0) the k-th extra
            slots = []
            for e in lay.rights[v] + lay.loops[v]:
                slots.append((e, 0))
                slots.extend((e, k) for k in range(1, left[e] + 1))
            for values in compositions(rest, len(slots)):
                got: dict[SignedEdge, list[int]] = {}
                for (e, k), x in zip(slots, values):
                    got.setdefault(e, []).append(x)
                for e, xs in got.items():
                    halves[e] = HalfEdgeFlow(left[e], xs[0], tuple(xs[1:]))
                yield from at_vertex(v + 1)
            for e in lay.rights[v] + lay.loops[v]:
                halves.pop(e, None)
        for e in fixed:
            neg.pop(e, None)
            left.pop(e, None)

    yield from at_vertex(1)


def enumerate_dynamic_flows(G: SignedGraph, a: Sequence[int]) -> list[DynamicFlow]:
    """Every integer dynamic ``a``-flow on ``G``, without duplicates."""
    return list(iter_dynamic_flows(G, a))


def kdyn(G: SignedGraph, a: Sequence[int]) -> int:
    """Dynamic Kostant partition function: the number of integer dynamic ``a``-flows.

    Counts the same objects as :func:`enumerate_dynamic_flows` vertex by vertex;
    only the number of right-half slots at each later vertex and the inflow
    it receives are carried forward, and the split of what reaches the right
    halves is counted by a binomial coefficient.
    """
    a = tuple(int(x) for x in a)
    if len(a) != G.size:
        raise ValueError("netflow length does not match the graph")
    lay = _Layout(G)
    size = G.size

    @lru_cache(maxsize=None)
    def count(v: int, inflow: tuple[int, ...], slots: tuple[int, ...]) -> int:
        # inflow[j], slots[j] for j = v..size (index j - v)
        if v > size:
            return 1
        budget = a[v - 1] + inflow[0]
        if budget < 0:
            return 0
        fixed = lay.out_neg[v] + lay.lefts[v] + lay.loops[v]
        base_slots = slots[0] + len(lay.loops[v])
        total = 0
        for split in compositions(budget, len(fixed) + 1):
            *amounts, rest = split
            new_in = list(inflow[1:])
            new_slots = list(slots[1:])
            here = base_slots
            for e, b in zip(fixed, amounts):
                if e.is_negative:
                    new_in[e.j - v - 1] += b
                elif e.is_loop:
                    here += b
                else:
                    new_slots[e.j - v - 1] += b
            if here == 0:
                ways = 1 if rest == 0 else 0
            else:
                ways = comb(rest + here - 1, here - 1)
            if ways:
                total += ways * count(v + 1, tuple(new_in), tuple(new_slots))
        return total

    start_slots = tuple(len(lay.rights[j]) for j in range(1, size + 1))
    return count(1, (0,) * size, start_slots)


def kdyn_via_series(G: SignedGraph, a: Sequence[int]) -> int:
    """Coefficient of ``x^a`` in the product generating series of ``K^dyn_G``."""
    from .ct import build_kdyn_coeff_expr, iterated_ct

    value = iterated_ct(build_kdyn_coeff_expr(G, a))
    if value.denominator != 1:
        raise ArithmeticError(f"series coefficient {value} is not an integer")
    return int(value)


def volD_vector(G: SignedGraph) -> tuple[int, ...]:
    """``(0, indeg(2) - 1, ..., indeg(n+1) - 1)``."""
    return (0,) + tuple(indegree(G, v) - 1 for v in range(2, G.size + 1))


def volume_via_thm_volD(G: SignedGraph) -> int:
    """Normalized volume of ``F_G(2, 0, ..., 0)`` as ``K^dyn_G(0, d_2, ..., d_{n+1})``.

    Only valid for loopless connected graphs in which every vertex after the
    first has an incoming edge.
    """
    if G.has_loops():
        raise ValueError("the dynamic volume formula does not hold for graphs with loops")
    if not G.is_connected():
        raise ValueError("graph must be connected")
    if any(indegree(G, v) < 1 for v in range(2, G.size + 1)):
        raise ValueError("every vertex v >= 2 needs an incoming edge")
    return kdyn(G, volD_vector(G))


def _loop(v: int) -> SignedEdge:
    return SignedEdge(v, v, PLUS, 0)


def bijection_forward(f: DynamicFlow, a: Sequence[int]) -> DynamicFlow:
    """Map a dynamic ``a``-flow on the family graph ``G_a`` to a dynamic flow on
    ``K^C_{n+1}`` with netflow ``(0, 0, 1, ..., n-1)``.

    Extras created by the second copies ``(i, v, +)^1`` are appended to the
    loop at ``v`` in increasing ``i``, each block keeping its own order.
    """
    a = tuple(int(x) for x in a)
    if not family_index_ok(a):
        raise ValueError(f"not a family index vector: {a}")
    G = make_family_graph(a)
    if not is_dynamic_flow(G, a, f):
        raise ValueError("input is not a dynamic flow on G_a with netflow a")
    size = len(a)
    neg: dict[SignedEdge, int] = {}
    pos: dict[SignedEdge, HalfEdgeFlow] = {_loop(1): ZERO_HALF}
    for v in range(2, size + 1):
        k = v - a[v - 1] - 1
        for i in range(1, v):
            pos[SignedEdge(i, v, PLUS, 0)] = f.pos(SignedEdge(i, v, PLUS, 0))
        second = [f.pos(SignedEdge(i, v, PLUS, 1)) for i in range(1, k + 1)]
        for i in range(1, k):
            neg[SignedEdge(i, v, MINUS)] = second[i - 1].left
        for i in range(k, v):
            neg[SignedEdge(i, v, MINUS)] = f.neg(SignedEdge(i, v, MINUS))
        neg[SignedEdge(k, v, MINUS)] += second[k - 1].left
        loop_left = k - 1 + sum(h.left for h in second)
        extras = [h.right for h in second[1:]]
        for h in second:
            extras.extend(h.extras)
        pos[_loop(v)] = HalfEdgeFlow(loop_left, second[0].right, tuple(extras))
    return DynamicFlow.from_maps(neg, pos)


class NotInImage(ValueError):
    pass


def recover_k(g: DynamicFlow, v: int) -> int:
    """The unique ``t`` in ``[1, v-1]`` with
    ``t-2 + sum_{i<t} g(i,v,-) < g(v,v,+)_l <= t-1 + sum_{i<=t} g(i,v,-)``."""
    L = g.pos(_loop(v)).left
    prefix = [0]
    for i in range(1, v):
        prefix.append(prefix[-1] + g.neg(SignedEdge(i, v, MINUS)))
    hits = [t for t in range(1, v) if t - 2 + prefix[t - 1] < L <= t - 1 + prefix[t]]
    if len(hits) != 1:
        raise NotInImage(f"no unique k at vertex {v}")
    return hits[0]


def bijection_inverse(g: DynamicFlow, n: int) -> tuple[tuple[int, ...], DynamicFlow]:
    """Recover ``(a, f)`` from a dynamic flow on ``K^C_{n+1}`` with netflow ``(0, 0, 1, ..., n-1)``."""
    size = n + 1
    KC = make_complete_C(size)
    target = (0, 0) + tuple(range(1, n))
    if not is_dynamic_flow(KC, target, g):
        raise ValueError("input is not a dynamic flow on K^C with netflow (0,0,1,...,n-1)")
    if g.pos(_loop(1)) != ZERO_HALF:
        raise NotInImage("loop at vertex 1 carries flow")
    a = [0]
    neg: dict[SignedEdge, int] = {}
    pos: dict[SignedEdge, HalfEdgeFlow] = {}
    for v in range(2, size + 1):
        k = recover_k(g, v)
        a.append(v - 1 - k)
        loop = g.pos(_loop(v))
        for i in range(1, v):
            pos[SignedEdge(i, v, PLUS, 0)] = g.pos(SignedEdge(i, v, PLUS, 0))
        lefts = [g.neg(SignedEdge(i, v, MINUS)) for i in range(1, k)]
        lefts.append(loop.left - (k - 1) - sum(lefts))
        for i in range(k, v):
            neg[SignedEdge(i, v, MINUS)] = g.neg(SignedEdge(i, v, MINUS))
        neg[SignedEdge(k, v, MINUS)] -= lefts[-1]
        if neg[SignedEdge(k, v, MINUS)] < 0 or lefts[-1] < 0:
            raise NotInImage(f"inconsistent flows at vertex {v}")
        rights = [loop.right] + list(loop.extras[: k - 1])
        rest = list(loop.extras[k - 1:])
        for i in range(1, k + 1):
            m = lefts[i - 1]
            block, rest = rest[:m], rest[m:]
            pos[SignedEdge(i, v, PLUS, 1)] = HalfEdgeFlow(m, rights[i - 1], tuple(block))
        if rest:
            raise NotInImage(f"unused extra right halves at vertex {v}")
    return tuple(a), DynamicFlow.from_maps(neg, pos)
