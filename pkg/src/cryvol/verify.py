"""Verification suites comparing independent computations of the same number.

Each claim computes a left and a right side; a claim passes when they are
equal (or, for the few claims that document a known inequality, when they
differ).  Suites are lists of claims so they can be farmed out to a process
pool and reported in a fixed order.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import ct, exact
from .dynflow import (
    bijection_forward,
    bijection_inverse,
    enumerate_dynamic_flows,
    kdyn,
    volD_vector,
    volume_via_thm_volD,
)
from .graphs import (
    ALL_VERTICES,
    FIRST_N,
    SignedGraph,
    family_graphs,
    family_vectors,
    indegree,
    make_complete_C,
    make_complete_D,
    make_complete_typeA,
    make_family_graph,
    volD_counterexample,
)
from .kostant import normalized_volume_ehrhart, polytope_dimension, volume_in_dimension
from .reduce import (
    cryc_netflow,
    full_dimensional_leaves,
    reduce_order_O,
    strip_loops_at_1,
    volume_via_reduction,
)

SUITES = ("thm-cry", "conj-cryd", "conj-cryc", "thm-volD", "thm-decomp", "thm-bijection", "morris", "thmC")
# run on request only; not part of "all"
EXTRA_SUITES = ("loop-range",)

DEFAULT_MAX_N = {
    "thm-cry": 6,
    "conj-cryd": 3,
    "conj-cryc": 3,
    "thm-decomp": 3,
    "thm-bijection": 3,
    "morris": 3,
    "thmC": 2,
    "loop-range": 3,
}

REPORT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["claim", "params", "lhs", "rhs", "status", "elapsed"],
        "properties": {
            "claim": {"type": "string"},
            "params": {"type": "object"},
            "lhs": {"type": "string"},
            "rhs": {"type": "string"},
            "expect_equal": {"type": "boolean"},
            "status": {"enum": ["pass", "fail"]},
            "elapsed": {"type": "number", "minimum": 0},
            "note": {"type": "string"},
        },
        "additionalProperties": False,
    },
}


def _show(x) -> str:
    if isinstance(x, (int, Fraction)):
        return exact.format_number(x)
    return str(x)


@dataclass
class VerificationReport:
    claim: str
    params: dict
    lhs: Any
    rhs: Any
    elapsed: float
    expect_equal: bool = True
    note: str = ""

    @property
    def status(self) -> str:
        return "pass" if (self.lhs == self.rhs) == self.expect_equal else "fail"

    def to_dict(self) -> dict:
        d = {
            "claim": self.claim,
            "params": self.params,
            "lhs": _show(self.lhs),
            "rhs": _show(self.rhs),
            "expect_equal": self.expect_equal,
            "status": self.status,
            "elapsed": round(self.elapsed, 4),
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Claim:
    claim: str
    fn: Callable
    params: dict = field(default_factory=dict)
    expect_equal: bool = True
    note: str = ""


def run_claim(c: Claim) -> VerificationReport:
    t = time.perf_counter()
    lhs, rhs = c.fn(**c.params)
    return VerificationReport(c.claim, _jsonable(c.params), lhs, rhs, time.perf_counter() - t,
                              c.expect_equal, c.note)


def _jsonable(params: dict) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in params.items()}


# --------------------------------------------------------------- claim bodies

def _cry_ehrhart(n):
    G = make_complete_typeA(n + 1)
    a = (1,) + (0,) * (n - 1) + (-1,)
    return normalized_volume_ehrhart(G, a), exact.cry_volume_formula(n)


def _cry_ct(n):
    return ct.iterated_ct(ct.build_cry_lhs(n - 2)), exact.cry_volume_formula(n)


def _cryd_ehrhart(n):
    return normalized_volume_ehrhart(make_complete_D(n + 1), cryc_netflow(n + 1)), exact.cryd_volume_formula(n)


def _cryd_ct(n):
    return ct.iterated_ct(ct.build_cryd_lhs(n)), exact.cryd_volume_formula(n)


def _gamma_side(n, b):
    # the closed form over n - 1 variables; no variables means the empty product
    return Fraction(1) if n == 1 else exact.thmC_rhs(n=n - 1, a=2, b=b, c=Fraction(1, 2))


def _cryd_thmC(n):
    return _gamma_side(n, 0), exact.cryd_volume_formula(n)


def _cryd_dynamic(n):
    return volume_via_thm_volD(make_complete_D(n + 1)), exact.cryd_volume_formula(n)


def _cryc_ehrhart(n, loop_range=ALL_VERTICES):
    G = make_complete_C(n + 1, loop_range)
    return normalized_volume_ehrhart(G, cryc_netflow(n + 1)), exact.cryc_volume_formula(n)


def _cryc_ct(n):
    return ct.iterated_ct(ct.build_cryc_lhs(n)), exact.cryc_volume_formula(n)


def _cryc_thmC(n):
    return _gamma_side(n, 1), exact.cryc_volume_formula(n)


def _cryc_pipeline(n):
    total = sum(volume_via_thm_volD(G) for G in family_graphs(n))
    return total, kdyn(make_complete_C(n + 1), (0, 0) + tuple(range(1, n)))


def _cryc_pipeline_formula(n):
    return kdyn(make_complete_C(n + 1), (0, 0) + tuple(range(1, n))), exact.cryc_volume_formula(n)


def loop_range_volumes(n):
    """Volumes of ``CRYC_{n+1}`` with loops at every vertex and at ``1..n`` only,
    and the variants that match the closed form."""
    formula = exact.cryc_volume_formula(n)
    vols = {lr: _cryc_ehrhart(n, lr)[0] for lr in (ALL_VERTICES, FIRST_N)}
    return vols, [lr for lr, v in vols.items() if v == formula]


def _loop_range(n):
    vols, _ = loop_range_volumes(n)
    return vols[FIRST_N], vols[ALL_VERTICES]


def _volD_graph(edges, size):
    G = SignedGraph.from_shapes(size, [tuple(e) for e in edges])
    k = G.n_edges - G.size
    return volume_in_dimension(G, cryc_netflow(G.size), k), volume_via_thm_volD(G)


def _volD_counterexample():
    G = volD_counterexample()
    return normalized_volume_ehrhart(G, cryc_netflow(G.size)), kdyn(G, volD_vector(G))


def _decomp_volume(n):
    lhs = normalized_volume_ehrhart(make_complete_C(n + 1), cryc_netflow(n + 1))
    rhs = sum(normalized_volume_ehrhart(G, cryc_netflow(n + 1)) for G in family_graphs(n))
    return lhs, rhs


def _decomp_leaves(n):
    KC = make_complete_C(n + 1)
    d = polytope_dimension(KC, cryc_netflow(n + 1))
    leaves = full_dimensional_leaves(reduce_order_O(n), d)
    got = sorted(str(strip_loops_at_1(leaf.graph)) for leaf in leaves)
    want = sorted(str(G) for G in family_graphs(n))
    return "; ".join(got), "; ".join(want)


def _decomp_reduction(n):
    return volume_via_reduction(make_complete_C(n + 1)), exact.cryc_volume_formula(n)


def _bij_roundtrip_g(n):
    target = (0, 0) + tuple(range(1, n))
    domain = enumerate_dynamic_flows(make_complete_C(n + 1), target)
    ok = 0
    for g in domain:
        a, f = bijection_inverse(g, n)
        ok += bijection_forward(f, a) == g
    return ok, len(domain)


def _bij_roundtrip_f(n):
    ok = total = 0
    for a in family_vectors(n):
        for f in enumerate_dynamic_flows(make_family_graph(a), a):
            total += 1
            ok += bijection_inverse(bijection_forward(f, a), n) == (a, f)
    return ok, total


def _bij_sum(n):
    lhs = sum(kdyn(make_family_graph(a), a) for a in family_vectors(n))
    return lhs, kdyn(make_complete_C(n + 1), (0, 0) + tuple(range(1, n)))


def _morris(n, a, b, c):
    r = ct.verify_identity("morris", n=n, a=a, b=b, c=c)
    return r.lhs, r.rhs


def _thmC(n, a, b, c):
    r = ct.verify_identity("thmC", n=n, a=a, b=b, c=c)
    return r.lhs, r.rhs


# ------------------------------------------------------------------- suites

def random_loopless_graphs(count: int, seed: int = 0, max_size: int = 5, max_edges: int = 9
                           ) -> list[SignedGraph]:
    """Connected loopless graphs in which every vertex after 1 has an incoming
    negative edge and ``F_G(2, 0, ..., 0)`` is nonempty."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        size = rng.randint(2, max_size)
        m = rng.randint(size - 1, max_edges)
        shapes = []
        for _ in range(m):
            i = rng.randint(1, size - 1)
            shapes.append((i, rng.randint(i + 1, size), rng.choice("+-")))
        G = SignedGraph.from_shapes(size, shapes)
        if not G.is_connected() or any(indegree(G, v) < 1 for v in range(2, size + 1)):
            continue
        if not _nonempty(G):
            continue
        out.append(G)
    return out


def _nonempty(G: SignedGraph) -> bool:
    from .kostant import EmptyPolytope
    try:
        polytope_dimension(G, cryc_netflow(G.size))
        return True
    except EmptyPolytope:
        return False


def claims_for(suite: str, max_n: int | None = None, count: int = 24, seed: int = 0) -> list[Claim]:
    if suite not in SUITES + EXTRA_SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    n_hi = max_n if max_n is not None else DEFAULT_MAX_N.get(suite)
    out: list[Claim] = []
    if suite == "thm-cry":
        for n in range(2, n_hi + 1):
            out.append(Claim(f"thm-cry/ehrhart/n={n}", _cry_ehrhart, {"n": n}))
            out.append(Claim(f"thm-cry/ct/n={n}", _cry_ct, {"n": n}))
    elif suite == "conj-cryd":
        for n in range(1, n_hi + 1):
            for tag, fn in (("ehrhart", _cryd_ehrhart), ("ct", _cryd_ct), ("gamma", _cryd_thmC),
                            ("dynamic", _cryd_dynamic)):
                out.append(Claim(f"conj-cryd/{tag}/n={n}", fn, {"n": n}))
    elif suite == "conj-cryc":
        for n in range(1, n_hi + 1):
            for tag, fn in (("ehrhart", _cryc_ehrhart), ("ct", _cryc_ct), ("gamma", _cryc_thmC),
                            ("pipeline", _cryc_pipeline), ("pipeline-formula", _cryc_pipeline_formula)):
                out.append(Claim(f"conj-cryc/{tag}/n={n}", fn, {"n": n}))
    elif suite == "thm-volD":
        for k, G in enumerate(random_loopless_graphs(count, seed)):
            edges = [list(s) for s in G.shapes()]
            out.append(Claim(f"thm-volD/random/{k:03d}", _volD_graph, {"edges": edges, "size": G.size}))
        out.append(Claim("thm-volD/loop-counterexample", _volD_counterexample, {}, expect_equal=False,
                         note="graph with a loop: the two sides are expected to differ"))
    elif suite == "thm-decomp":
        for n in range(1, n_hi + 1):
            out.append(Claim(f"thm-decomp/volume/n={n}", _decomp_volume, {"n": n}))
            out.append(Claim(f"thm-decomp/leaves/n={n}", _decomp_leaves, {"n": n}))
            out.append(Claim(f"thm-decomp/reduction/n={n}", _decomp_reduction, {"n": n}))
    elif suite == "thm-bijection":
        for n in range(2, n_hi + 1):
            out.append(Claim(f"thm-bijection/forward-inverse/n={n}", _bij_roundtrip_g, {"n": n}))
            out.append(Claim(f"thm-bijection/inverse-forward/n={n}", _bij_roundtrip_f, {"n": n}))
            out.append(Claim(f"thm-bijection/sum/n={n}", _bij_sum, {"n": n}))
    elif suite == "loop-range":
        for n in range(1, n_hi + 1):
            _, matching = loop_range_volumes(n)
            out.append(Claim(f"loop-range/n={n}", _loop_range, {"n": n},
                             note="lhs: loops at 1..n, rhs: loops at every vertex; matching the formula: "
                                  + (", ".join(matching) or "neither")))
    elif suite in ("morris", "thmC"):
        fn = _morris if suite == "morris" else _thmC
        a_values = (1, 2, 3) if suite == "morris" else (1, 2)
        for n in range(1, n_hi + 1):
            for a in a_values:
                for b in (0, 1, 2):
                    for c in (Fraction(1, 2), Fraction(1)):
                        out.append(Claim(f"{suite}/n={n}/a={a}/b={b}/c={exact.format_number(c)}", fn,
                                         {"n": n, "a": a, "b": b, "c": c}))
    return out


def run_suite(suite: str, max_n: int | None = None, jobs: int = 1, count: int = 24, seed: int = 0
              ) -> list[VerificationReport]:
    suites = SUITES if suite == "all" else (suite,)
    claims = [c for s in suites for c in claims_for(s, max_n if suite != "all" else None, count, seed)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_claim, claims))
    else:
        reports = [run_claim(c) for c in claims]
    return reports


def reports_to_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_to_tsv(reports: list[VerificationReport]) -> str:
    lines = ["claim\tlhs\trhs\tstatus\telapsed"]
    for r in reports:
        d = r.to_dict()
        lines.append(f"{d['claim']}\t{d['lhs']}\t{d['rhs']}\t{d['status']}\t{d['elapsed']}")
    return "\n".join(lines) + "\n"
