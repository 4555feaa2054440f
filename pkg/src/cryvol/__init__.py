"""Exact volumes of flow polytopes of signed graphs.

Integer and dynamic flows, Ehrhart interpolation, subdivision by reduction
rules and iterated constant terms, all in exact rational arithmetic.
"""

from .ct import CTExpression, iterated_ct, parse_expression
from .dynflow import (
    DynamicFlow,
    HalfEdgeFlow,
    bijection_forward,
    bijection_inverse,
    enumerate_dynamic_flows,
    kdyn,
    kdyn_via_series,
    volume_via_thm_volD,
)
from .exact import catalan, cry_volume_formula, cryc_volume_formula, cryd_volume_formula
from .graphs import SignedEdge, SignedGraph, make_complete_C, make_complete_D, make_complete_typeA
from .kostant import enumerate_flows, kpf, normalized_volume_ehrhart, polytope_dimension
from .reduce import apply_reduction, reduce_order_O, volume_via_reduction

__version__ = "0.1.0"
