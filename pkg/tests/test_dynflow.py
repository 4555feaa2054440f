import json

import pytest
from hypothesis import given, settings, strategies as st

from cryvol.dynflow import (
    DynamicFlow,
    HalfEdgeFlow,
    bijection_forward,
    bijection_inverse,
    enumerate_dynamic_flows,
    is_dynamic_flow,
    kdyn,
    kdyn_via_series,
    volD_vector,
    volume_via_thm_volD,
)
from cryvol.graphs import (
    SignedEdge,
    SignedGraph,
    family_vectors,
    fig2_graph,
    make_complete_C,
    make_complete_D,
    make_family_graph,
    volD_counterexample,
    zero_test_graph,
)
from cryvol.kostant import kpf


def test_half_edge_needs_one_extra_per_left_unit():
    with pytest.raises(ValueError):
        HalfEdgeFlow(2, 0, (1,))
    assert HalfEdgeFlow(2, 1, (0, 3)).right_total == 4


def test_fig2_by_all_routes():
    G = fig2_graph()
    flows = enumerate_dynamic_flows(G, (2, 1, 1))
    assert len(flows) == kdyn(G, (2, 1, 1)) == kdyn_via_series(G, (2, 1, 1)) == 17
    assert len(set(flows)) == 17
    e = SignedEdge(1, 3, "+")
    assert {f.pos(e).left for f in flows} == {0, 1, 2}


def test_single_positive_edge_extras_are_ordered():
    G = SignedGraph.from_shapes(2, [(1, 2, "+")])
    flows = enumerate_dynamic_flows(G, (1, 1))
    assert len(flows) == kdyn(G, (1, 1)) == kdyn_via_series(G, (1, 1)) == 2
    assert {(f.pos(G.edges[0]).right, f.pos(G.edges[0]).extras) for f in flows} == {(1, (0,)), (0, (1,))}


def test_zero_netflow():
    assert kdyn(zero_test_graph(), (0, 0, 0)) == 1
    assert kdyn_via_series(zero_test_graph(), (0, 0, 0)) == 1


def test_loops_of_complete_graph():
    assert kdyn(make_complete_C(3), (0, 0, 1)) == 4


def test_without_positive_edges_dynamic_equals_static():
    G = SignedGraph.from_shapes(4, [(1, 2, "-"), (1, 3, "-"), (2, 3, "-"), (2, 4, "-"), (3, 4, "-")])
    for a in [(2, 0, 0, -2), (1, 1, -1, -1), (3, 0, -1, -2)]:
        assert kdyn(G, a) == kpf(G, a)


def test_every_enumerated_flow_is_valid():
    G = make_complete_D(3)
    for f in enumerate_dynamic_flows(G, (1, 1, 1)):
        assert is_dynamic_flow(G, (1, 1, 1), f)
        json.loads(f.to_json())


def test_netflow_length_checked():
    with pytest.raises(ValueError):
        kdyn(fig2_graph(), (1, 1))


def _graphs():
    def fix(t):
        i, step, sign = t
        j = min(3, i + step)
        return (i, j, "+" if i == j else sign)

    shape = st.tuples(st.integers(1, 3), st.integers(0, 2), st.sampled_from("+-")).map(fix)
    return st.lists(shape, min_size=1, max_size=5).map(lambda s: SignedGraph.from_shapes(3, s))


@settings(max_examples=40, deadline=None)
@given(_graphs(), st.tuples(st.integers(0, 2), st.integers(-1, 2), st.integers(-1, 2)))
def test_three_counts_agree(G, a):
    n = kdyn(G, a)
    assert n == len(enumerate_dynamic_flows(G, a))
    assert n == kdyn_via_series(G, a)


def test_volD_vector():
    assert volD_vector(make_complete_D(4)) == (0, 0, 1, 2)


@pytest.mark.parametrize("size,value", [(2, 1), (3, 2), (4, 32)])
def test_volume_of_type_D_graphs(size, value):
    assert volume_via_thm_volD(make_complete_D(size)) == value


def test_volume_preconditions():
    with pytest.raises(ValueError):
        volume_via_thm_volD(volD_counterexample())
    with pytest.raises(ValueError):
        volume_via_thm_volD(SignedGraph.from_shapes(3, [(1, 2, "-"), (1, 3, "+")]))
    with pytest.raises(ValueError):
        volume_via_thm_volD(SignedGraph.from_shapes(3, [(1, 2, "-")]))


@pytest.mark.parametrize("n,total", [(2, 4), (3, 128)])
def test_family_sum(n, total):
    target = (0, 0) + tuple(range(1, n))
    assert sum(kdyn(make_family_graph(a), a) for a in family_vectors(n)) == total
    assert kdyn(make_complete_C(n + 1), target) == total


@pytest.mark.parametrize("n", [2, 3])
def test_bijection_roundtrip(n):
    target = (0, 0) + tuple(range(1, n))
    KC = make_complete_C(n + 1)
    images = set()
    for a in family_vectors(n):
        for f in enumerate_dynamic_flows(make_family_graph(a), a):
            g = bijection_forward(f, a)
            assert is_dynamic_flow(KC, target, g)
            assert bijection_inverse(g, n) == (a, f)
            images.add(g)
    assert images == set(enumerate_dynamic_flows(KC, target))


def test_bijection_rejects_foreign_input():
    a = (0, 0, 1)
    f = enumerate_dynamic_flows(make_family_graph(a), a)[0]
    with pytest.raises(ValueError):
        bijection_forward(f, (0, 0, 0))
    g = bijection_forward(f, a)
    with pytest.raises(ValueError):
        bijection_inverse(g, 3)
