import json
import random
from math import factorial

import pytest

from cryvol.graphs import SignedEdge, SignedGraph, family_graphs, make_complete_C, make_complete_D
from cryvol.kostant import EmptyPolytope, normalized_volume_ehrhart, polytope_dimension
from cryvol.reduce import (
    NodeBudgetExceeded,
    ReductionRule,
    ReductionStats,
    apply_reduction,
    cryc_netflow,
    find_reduction,
    forced_equal,
    full_dimensional_leaves,
    reduce_order_O,
    reduction_tree_O,
    strip_loops_at_1,
    volume_via_reduction,
)

E = SignedEdge


@pytest.mark.parametrize("rule,e1,e2,added", [
    ("R1", E(1, 2, "-"), E(2, 3, "-"), (1, 3, "-")),
    ("R2", E(1, 2, "-"), E(2, 3, "+"), (1, 3, "+")),
    ("R3", E(1, 3, "-"), E(2, 3, "+"), (1, 2, "+")),
    ("R4", E(1, 3, "+"), E(2, 3, "-"), (1, 2, "+")),
    ("R5", E(1, 3, "-"), E(1, 3, "+"), (1, 1, "+")),
    ("R6", E(1, 3, "-"), E(3, 3, "+"), (1, 3, "+")),
])
def test_each_rule_adds_the_right_edge(rule, e1, e2, added):
    G = SignedGraph(3, (e1, e2))
    G1, G2 = apply_reduction(G, rule, e1, e2)
    assert G1.n_edges == G2.n_edges == 2
    assert added in G1.shapes() and added in G2.shapes()
    assert {G1.shapes(), G2.shapes()} != {G.shapes()}


def test_rule_pattern_mismatch():
    G = SignedGraph(3, (E(1, 2, "-"), E(2, 3, "-")))
    with pytest.raises(ValueError):
        apply_reduction(G, ReductionRule.R2, E(1, 2, "-"), E(2, 3, "-"))
    with pytest.raises(ValueError):
        apply_reduction(G, "R1", E(1, 2, "-"), E(1, 3, "-"))
    with pytest.raises(ValueError):
        apply_reduction(G, "R9", E(1, 2, "-"), E(2, 3, "-"))


def _dim(G):
    try:
        return polytope_dimension(G, cryc_netflow(G.size))
    except EmptyPolytope:
        return -1


def _vol(G):
    return normalized_volume_ehrhart(G, cryc_netflow(G.size))


def _random_graphs(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        size = rng.randint(2, 4)
        shapes = []
        for _ in range(rng.randint(size, 7)):
            i = rng.randint(1, size)
            j = rng.randint(i, size)
            shapes.append((i, j, "+" if i == j else rng.choice("+-")))
        G = SignedGraph.from_shapes(size, shapes)
        if _dim(G) >= 0 and find_reduction(G) is not None:
            out.append(G)
    return out


@pytest.mark.parametrize("G", _random_graphs(40, seed=3), ids=str)
def test_single_reduction_step_preserves_volume(G):
    rule, e1, e2 = find_reduction(G)
    G1, G2 = apply_reduction(G, rule, e1, e2)
    d, d1, d2 = _dim(G), _dim(G1), _dim(G2)
    if forced_equal(G, cryc_netflow(G.size), e1, e2):
        assert _vol(G) == _vol(G1) == _vol(G2)
    elif d1 == d2 == d:
        assert _vol(G) == _vol(G1) + _vol(G2)
    else:
        assert max(d1, d2) == d
        assert _vol(G) == _vol(G1 if d1 == d else G2)


def test_degenerate_cut():
    G = SignedGraph.from_shapes(3, [(1, 1, "+")] * 3 + [(1, 3, "+"), (1, 3, "-"), (2, 3, "-")])
    e1, e2 = E(1, 3, "-"), E(1, 3, "+")
    assert forced_equal(G, (2, 0, 0), e1, e2)
    G1, G2 = apply_reduction(G, "R5", e1, e2)
    assert _vol(G) == _vol(G1) == _vol(G2) == 1
    stats = ReductionStats()
    assert volume_via_reduction(G, stats=stats) == 1


@pytest.mark.parametrize("n,value", [(1, 1), (2, 4), (3, 128)])
def test_volume_of_type_C(n, value):
    assert volume_via_reduction(make_complete_C(n + 1)) == value


@pytest.mark.parametrize("n,value", [(2, 2), (3, 32)])
def test_volume_of_type_D(n, value):
    assert volume_via_reduction(make_complete_D(n + 1)) == value


def test_family_volumes_by_reduction():
    vols = sorted(volume_via_reduction(G) for G in family_graphs(3))
    assert vols == sorted(_vol(G) for G in family_graphs(3))
    assert sum(vols) == 128


def test_wrong_netflow_rejected():
    with pytest.raises(ValueError):
        volume_via_reduction(make_complete_C(3), (1, 0, 0))


def test_empty_polytope_rejected():
    with pytest.raises(EmptyPolytope):
        volume_via_reduction(SignedGraph.from_shapes(2, [(1, 2, "-")]))


def test_node_budget():
    with pytest.raises(NodeBudgetExceeded):
        volume_via_reduction(make_complete_C(4), node_budget=3)


def test_tree_output():
    value, root = volume_via_reduction(make_complete_C(3), tree=True)
    assert value == 4
    data = json.loads(root.to_json())
    assert data["id"] == 0 and data["rule"] is None
    assert data["children"][0]["rule"]["child"] == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_O_leaves_are_the_family(n):
    leaves = reduce_order_O(n)
    assert len(leaves) == factorial(n + 1)
    d = _dim(make_complete_C(n + 1))
    full = full_dimensional_leaves(leaves, d)
    got = sorted(strip_loops_at_1(leaf.graph).shapes() for leaf in full)
    assert got == sorted(G.shapes() for G in family_graphs(n))


def test_order_O_rules_are_loop_moves():
    root = reduction_tree_O(2)
    for leaf in root.leaves():
        assert leaf.rule is None or leaf.rule[0] is ReductionRule.R6


def test_strip_loops_elsewhere_is_an_error():
    with pytest.raises(ValueError):
        strip_loops_at_1(make_complete_C(3))
