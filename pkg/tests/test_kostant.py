from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cryvol.graphs import (
    SignedGraph,
    fig1_graph,
    make_complete_C,
    make_complete_D,
    make_complete_typeA,
    netflow_of,
)
from cryvol.kostant import (
    EhrhartTable,
    EmptyPolytope,
    UnivariatePolynomial,
    check_flow,
    ehrhart_polynomial,
    ehrhart_values,
    enumerate_flows,
    kpf,
    normalized_volume_ehrhart,
    polytope_dimension,
    positive_flow_total,
    volume_in_dimension,
)
from oracles import affine_dimension, brute_force_flows


def test_fig1_count_and_flows():
    G = fig1_graph()
    flows = enumerate_flows(G, (1, 3, -2))
    assert kpf(G, (1, 3, -2)) == 3 == len(flows)
    assert all(check_flow(G, (1, 3, -2), f) for f in flows)


def test_zero_netflow_has_one_flow():
    assert kpf(make_complete_C(3), (0, 0, 0)) == 1


def test_netflow_length_checked():
    with pytest.raises(ValueError):
        kpf(fig1_graph(), (1, 2))


def test_no_edges():
    G = SignedGraph.from_shapes(2, [])
    assert kpf(G, (0, 0)) == 1
    assert kpf(G, (1, -1)) == 0


def _graphs():
    def build(shapes):
        return SignedGraph.from_shapes(3, shapes)

    def fix(t):
        i, step, sign = t
        j = min(3, i + step)
        return (i, j, "+" if i == j else sign)

    shape = st.tuples(st.integers(1, 3), st.integers(0, 2), st.sampled_from("+-")).map(fix)
    return st.lists(shape, min_size=1, max_size=5).map(build)


@settings(max_examples=60, deadline=None)
@given(_graphs(), st.tuples(st.integers(0, 3), st.integers(-2, 2), st.integers(-2, 2)))
def test_kpf_matches_brute_force(G, a):
    flows = sorted(enumerate_flows(G, a))
    assert flows == sorted(brute_force_flows(G, a))
    assert kpf(G, a) == len(flows)


@settings(max_examples=40, deadline=None)
@given(_graphs())
def test_dimension_matches_lattice_points(G):
    a = (2, 0, 0)
    points = brute_force_flows(G, tuple(2 * x for x in a))
    if not points:
        with pytest.raises(EmptyPolytope):
            polytope_dimension(G, a)
        return
    assert polytope_dimension(G, a) == affine_dimension(points)


def test_dimension_of_complete_graphs():
    # N - (n+1) for the complete graphs at their standard netflows
    assert polytope_dimension(make_complete_typeA(4), (1, 0, 0, -1)) == 3
    assert polytope_dimension(make_complete_D(4), (2, 0, 0, 0)) == 8
    assert polytope_dimension(make_complete_C(4), (2, 0, 0, 0)) == 12


def test_positive_total_is_constant_on_polytope():
    G = make_complete_C(3)
    totals = {positive_flow_total(G, f) for f in enumerate_flows(G, (2, 0, 0))}
    assert totals == {Fraction(1)}


def test_flow_netflows():
    G = make_complete_D(3)
    for f in enumerate_flows(G, (2, 1, 1)):
        assert netflow_of(G, f) == (2, 1, 1)


def test_interpolation():
    p = UnivariatePolynomial.interpolate([0, 1, 2], [1, 3, 7])
    assert p.coeffs == (1, 1, 1)
    assert p(3) == 13
    with pytest.raises(ValueError):
        UnivariatePolynomial.interpolate([0, 0], [1, 2])


def test_ehrhart_table_roundtrip():
    table = ehrhart_values(make_complete_typeA(4), (1, 0, 0, -1), 4)
    # a unimodular 3-simplex: C(t + 3, 3)
    assert table.counts() == [1, 4, 10, 20, 35]
    assert EhrhartTable.from_tsv(table.to_tsv()) == table


def test_ehrhart_polynomial_reproduces_counts():
    G, a = make_complete_D(3), (2, 0, 0)
    poly, d = ehrhart_polynomial(G, a)
    for t in range(d + 4):
        assert poly(t) == kpf(G, [t * x for x in a])


def test_wrong_dimension_is_caught():
    with pytest.raises(ArithmeticError):
        normalized_volume_ehrhart(make_complete_typeA(4), (1, 0, 0, -1), dim=1)


@pytest.mark.parametrize("size,value", [(3, 1), (4, 1), (5, 2), (6, 10)])
def test_cry_volumes(size, value):
    a = (1,) + (0,) * (size - 2) + (-1,)
    assert normalized_volume_ehrhart(make_complete_typeA(size), a) == value


def test_empty_polytope():
    G = SignedGraph.from_shapes(2, [(1, 2, "-")])
    with pytest.raises(EmptyPolytope):
        normalized_volume_ehrhart(G, (2, 0))
    assert volume_in_dimension(G, (2, 0), 0) == 0


def test_volume_in_dimension():
    # polytope is a point but the edge count asks for dimension 1
    G = SignedGraph.from_shapes(3, [(1, 2, "-"), (1, 3, "-"), (2, 3, "-"), (1, 2, "+")])
    assert polytope_dimension(G, (2, 0, 0)) == 0
    assert volume_in_dimension(G, (2, 0, 0), 1) == 0
    assert volume_in_dimension(G, (2, 0, 0), 0) == 1
    with pytest.raises(ValueError):
        volume_in_dimension(make_complete_D(3), (2, 0, 0), 0)
