"""Reduction rules on signed graphs and volumes by subdivision.

Each rule takes two edges meeting at a vertex ``i`` and returns two graphs
whose flow polytopes at netflow ``(2, 0, ..., 0)`` subdivide the original one.
Volumes then follow from the dimension bookkeeping: children of full
dimension add up, and a child of lower dimension contributes nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import linalg
from .graphs import MINUS, PLUS, SignedEdge, SignedGraph, incidence_matrix, make_complete_C
from .kostant import EmptyPolytope, normalized_volume_ehrhart, polytope_dimension


class ReductionRule(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"


def _match(rule: ReductionRule, e1: SignedEdge, e2: SignedEdge):
    """Return ``(removed_by_G1, removed_by_G2, added)`` or ``None`` if the pair
    does not fit the rule's pattern."""
    if rule is ReductionRule.R1:
        # (a,i,-), (i,b,-) with a<i<b
        if e1.is_negative and e2.is_negative and e1.j == e2.i and e1.i < e1.j < e2.j:
            return e1, e2, (e1.i, e2.j, MINUS)
    elif rule is ReductionRule.R2:
        # (a,i,-), (i,b,+) with a<i<b
        if e1.is_negative and e2.is_positive and e1.j == e2.i and e1.i < e1.j < e2.j:
            return e1, e2, (e1.i, e2.j, PLUS)
    elif rule is ReductionRule.R3:
        # (a,i,-), (b,i,+) with a<b<i
        if e1.is_negative and e2.is_positive and e1.j == e2.j and e1.i < e2.i < e1.j:
            return e1, e2, (e1.i, e2.i, PLUS)
    elif rule is ReductionRule.R4:
        # (a,i,+), (b,i,-) with a<b<i
        if e1.is_positive and e2.is_negative and e1.j == e2.j and e1.i < e2.i < e1.j:
            return e1, e2, (e1.i, e2.i, PLUS)
    elif rule is ReductionRule.R5:
        # (a,i,-), (a,i,+) with a<i; G1 drops the positive copy
        if e1.is_negative and e2.is_positive and e1.i == e2.i and e1.j == e2.j and e1.i < e1.j:
            return e2, e1, (e1.i, e1.i, PLUS)
    elif rule is ReductionRule.R6:
        # (a,i,-), (i,i,+) with a<i
        if e1.is_negative and e2.is_loop and e2.i == e1.j and e1.i < e1.j:
            return e1, e2, (e1.i, e1.j, PLUS)
    return None


def apply_reduction(G: SignedGraph, rule, e1: SignedEdge, e2: SignedEdge) -> tuple[SignedGraph, SignedGraph]:
    rule = ReductionRule(rule)
    if e1 not in G.edges or e2 not in G.edges:
        raise ValueError(f"edges {e1} and {e2} must both be in the graph")
    m = _match(rule, e1, e2)
    if m is None:
        raise ValueError(f"{rule.value} does not apply to {e1}, {e2}")
    drop1, drop2, (i, j, sign) = m
    return G.without(drop1).with_edge(i, j, sign), G.without(drop2).with_edge(i, j, sign)


def strip_loops_at_1(G: SignedGraph) -> SignedGraph:
    """Remove the loops at vertex 1; loops elsewhere are an error."""
    if any(e.i != 1 for e in G.loops()):
        raise ValueError("graph has loops away from vertex 1")
    return G.without_loops()


def find_reduction(G: SignedGraph) -> tuple[ReductionRule, SignedEdge, SignedEdge] | None:
    """First applicable reduction at the smallest possible vertex.

    At vertex ``i`` the longest incoming negative edge is paired, in this
    order of preference, with the loop at ``i``, a parallel positive edge,
    an outgoing negative edge, an outgoing positive edge, or an incoming
    positive edge.
    """
    for i in range(2, G.size + 1):
        incoming = sorted(G.incoming(i), key=lambda e: (-e.length, e.tag))
        if not incoming:
            continue
        loops = [e for e in G.edges if e.is_loop and e.i == i]
        out = [e for e in G.edges if e.i == i and e.j > i]
        pos_in = [e for e in G.edges if e.is_positive and e.j == i and e.i < i]
        for e1 in incoming:
            if loops:
                return ReductionRule.R6, e1, loops[0]
            for e2 in pos_in:
                if e2.i == e1.i:
                    return ReductionRule.R5, e1, e2
            for e2 in out:
                return (ReductionRule.R1 if e2.is_negative else ReductionRule.R2), e1, e2
            for e2 in pos_in:
                if e1.i < e2.i:
                    return ReductionRule.R3, e1, e2
                if e2.i < e1.i:
                    return ReductionRule.R4, e2, e1
    return None


@dataclass
class SubdivisionNode:
    id: int
    graph: SignedGraph
    parent: int | None = None
    rule: tuple | None = None  # (rule id, e1, e2, child index) that produced this node
    children: list["SubdivisionNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["SubdivisionNode"]:
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "edges": [[e.i, e.j, e.sign, e.tag] for e in self.graph.edges],
            "rule": None,
            "children": [c.to_dict() for c in self.children],
        }
        if self.rule is not None:
            r, e1, e2, k = self.rule
            d["rule"] = {"id": r.value, "e1": str(e1), "e2": str(e2), "child": k}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _Ids:
    def __init__(self):
        self.next = 0

    def __call__(self) -> int:
        self.next += 1
        return self.next - 1


def _split(node: SubdivisionNode, rule, e1, e2, ids: _Ids) -> tuple[SubdivisionNode, SubdivisionNode]:
    G1, G2 = apply_reduction(node.graph, rule, e1, e2)
    kids = (
        SubdivisionNode(ids(), G1, node.id, (ReductionRule(rule), e1, e2, 1)),
        SubdivisionNode(ids(), G2, node.id, (ReductionRule(rule), e1, e2, 2)),
    )
    node.children.extend(kids)
    return kids


def reduction_tree_O(n: int) -> SubdivisionNode:
    """Subdivision tree of ``K^C_{n+1}`` under the order that removes the loop
    at each vertex ``2, ..., n+1`` in turn, pairing it with incoming negative
    edges from the longest to the shortest."""
    if n < 1:
        raise ValueError("n must be positive")
    ids = _Ids()
    root = SubdivisionNode(ids(), make_complete_C(n + 1))
    frontier = [root]
    for v in range(2, n + 2):
        done = []
        for node in frontier:
            current = node
            while True:
                loops = [e for e in current.graph.edges if e.is_loop and e.i == v]
                incoming = sorted(current.graph.incoming(v), key=lambda e: (-e.length, e.tag))
                if not loops or not incoming:
                    done.append(current)
                    break
                keep_loop, lose_loop = _split(current, ReductionRule.R6, incoming[0], loops[0], ids)
                done.append(lose_loop)
                current = keep_loop
        frontier = done
    return root


def reduce_order_O(n: int) -> list[SubdivisionNode]:
    """Leaves of :func:`reduction_tree_O`, in left-to-right order."""
    return reduction_tree_O(n).leaves()


def cryc_netflow(size: int) -> tuple[int, ...]:
    return (2,) + (0,) * (size - 1)


def _dim(G: SignedGraph, a) -> int:
    try:
        return polytope_dimension(G, a)
    except EmptyPolytope:
        return -1


def full_dimensional_leaves(leaves, reference_dim: int) -> list:
    """Leaves whose polytope at ``(2, 0, ..., 0)`` has dimension ``reference_dim``."""
    return [leaf for leaf in leaves if _dim(leaf.graph, cryc_netflow(leaf.graph.size)) == reference_dim]


def forced_equal(G: SignedGraph, a, e1: SignedEdge, e2: SignedEdge) -> bool:
    """True when every real ``a``-flow puts the same flow on ``e1`` and ``e2``.

    A reduction cuts ``F_G(a)`` along ``b(e1) = b(e2)``.  If the polytope lies
    inside that hyperplane, both children are copies of it rather than halves.
    """
    M = incidence_matrix(G).tolist()
    c = [0] * G.n_edges
    c[G.edges.index(e1)] += 1
    c[G.edges.index(e2)] -= 1
    hi, _ = linalg.maximize(c, M, a)
    lo, _ = linalg.maximize([-x for x in c], M, a)
    return hi == 0 and lo == 0


class NodeBudgetExceeded(RuntimeError):
    pass


class DimensionCaseError(ArithmeticError):
    """Neither child has the parent's dimension."""


@dataclass
class ReductionStats:
    nodes: int = 0
    base_cases: int = 0
    additive: int = 0
    single: int = 0
    degenerate: int = 0


def volume_via_reduction(G: SignedGraph, a=None, node_budget: int = 20000,
                         base: Callable | None = None, stats: ReductionStats | None = None,
                         tree: bool = False):
    """Normalized volume of ``F_G(2, 0, ..., 0)`` by recursive subdivision.

    Graphs with no applicable reduction are evaluated by ``base`` (the
    Ehrhart volume by default).  When the cut does not pass through the
    interior because the two edges always carry equal flow, the first child
    is a copy of the parent and is used alone.  Results are memoised on the edge multiset.
    With ``tree=True`` returns ``(volume, root SubdivisionNode)``.
    """
    size = G.size
    target = cryc_netflow(size)
    if a is not None and tuple(a) != target:
        raise ValueError("subdivision volumes are only computed at netflow (2, 0, ..., 0)")
    base = base or (lambda H: normalized_volume_ehrhart(H, target))
    stats = stats if stats is not None else ReductionStats()
    memo: dict[tuple, int] = {}
    dims: dict[tuple, int] = {}
    ids = _Ids()

    def dim_of(H: SignedGraph) -> int:
        key = H.shapes()
        if key not in dims:
            dims[key] = _dim(H, target)
        return dims[key]

    def vol(node: SubdivisionNode) -> int:
        H = node.graph
        key = H.shapes()
        if key in memo and not tree:
            return memo[key]
        stats.nodes += 1
        if stats.nodes > node_budget:
            raise NodeBudgetExceeded(f"more than {node_budget} subdivision nodes")
        move = find_reduction(H)
        if move is None:
            stats.base_cases += 1
            value = base(H)
        else:
            d = dim_of(H)
            c1, c2 = _split(node, *move, ids)
            d1, d2 = dim_of(c1.graph), dim_of(c2.graph)
            if forced_equal(H, target, move[1], move[2]):
                stats.degenerate += 1
                value = vol(c1)
            elif d1 == d and d2 == d:
                stats.additive += 1
                value = vol(c1) + vol(c2)
            elif d1 == d and d2 < d:
                stats.single += 1
                value = vol(c1)
            elif d2 == d and d1 < d:
                stats.single += 1
                value = vol(c2)
            else:
                raise DimensionCaseError(f"children of {H} have dimensions {d1}, {d2}; parent {d}")
        memo[key] = value
        return value

    if _dim(G, target) < 0:
        raise EmptyPolytope("F_G(2,0,...,0) is empty")
    root = SubdivisionNode(ids(), G)
    value = vol(root)
    return (value, root) if tree else value
