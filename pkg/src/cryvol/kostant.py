"""Kostant partition functions, integer flows, flow polytope dimension and
normalized volume from the Ehrhart polynomial.

A flow is a tuple of nonnegative integers in the canonical edge order of its
graph (see :mod:`cryvol.graphs`).  The lattice points of the ``t``-th dilate of
``F_G(a)`` are the integer ``t*a``-flows, so ``i(F_G(a), t) = K_G(t*a)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from . import linalg
from .graphs import SignedGraph, incidence_matrix

IntegerFlow = tuple


class EmptyPolytope(ValueError):
    pass


def _check(G: SignedGraph, a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if len(a) != G.size:
        raise ValueError(f"netflow has length {len(a)}, graph has {G.size} vertices")
    return a


class _Plan:
    """Per-graph data for vertex-ordered flow search.

    Edges are processed grouped by their smaller endpoint.  Once every edge
    touching a later vertex ``j`` from below has been assigned, the residual at
    ``j`` is what ``j``'s own edges must carry away; ``settled_after[v]`` lists
    the vertices whose residual is final when vertex ``v`` closes.
    """

    def __init__(self, G: SignedGraph):
        self.size = G.size
        self.groups = [[] for _ in range(G.size + 1)]
        for idx, e in enumerate(G.edges):
            self.groups[e.i].append((idx, e))
        last_touch = {}
        for e in G.edges:
            if not e.is_loop:
                last_touch[e.j] = max(last_touch.get(e.j, 0), e.i)
        self.settled_after = defaultdict(list)
        for j in range(2, G.size + 1):
            self.settled_after[last_touch.get(j, 1)].append(j)
        self.has_own = [bool(self.groups[v]) for v in range(G.size + 1)]

    def feasible(self, r: Sequence[int], v: int) -> bool:
        # r is indexed from 0; vertex v just closed
        for j in self.settled_after.get(v, ()):
            if j <= v:
                continue
            rj = r[j - 1]
            if rj < 0 or (rj != 0 and not self.has_own[j]):
                return False
        return True


def _step(r: list[int], e, b: int):
    if e.is_loop:
        r[e.i - 1] -= 2 * b
    else:
        r[e.i - 1] -= b
        r[e.j - 1] += b if e.is_negative else -b


def kpf(G: SignedGraph, a: Sequence[int]) -> int:
    """Number of integer ``a``-flows on ``G`` (the Kostant partition function).

    Dynamic programme over the edges in canonical order; the state is the
    residual netflow still to be routed.
    """
    a = _check(G, a)
    plan = _Plan(G)
    states: dict[tuple[int, ...], int] = {a: 1}
    for v in range(1, G.size + 1):
        states = {r: c for r, c in states.items() if r[v - 1] >= 0}
        for _, e in plan.groups[v]:
            w = 2 if e.is_loop else 1
            new: dict[tuple[int, ...], int] = defaultdict(int)
            for r, count in states.items():
                rl = list(r)
                for b in range(r[v - 1] // w + 1):
                    if b:
                        _step(rl, e, 1)
                    new[tuple(rl)] += count
            states = new
        states = {r: c for r, c in states.items() if r[v - 1] == 0 and plan.feasible(r, v)}
        if not states:
            return 0
    return sum(states.values())


def enumerate_flows(G: SignedGraph, a: Sequence[int]) -> list[IntegerFlow]:
    """All integer ``a``-flows, each a tuple in canonical edge order."""
    return list(iter_flows(G, a))


def iter_flows(G: SignedGraph, a: Sequence[int]) -> Iterator[IntegerFlow]:
    a = _check(G, a)
    plan = _Plan(G)
    order = [item for v in range(1, G.size + 1) for item in plan.groups[v]]
    closes_at = {}
    for pos, (_, e) in enumerate(order):
        closes_at[e.i] = pos
    flow = [0] * G.n_edges
    r = list(a)

    def closes_ok(pos: int, v: int) -> bool:
        if closes_at[v] != pos:
            return True
        return r[v - 1] == 0 and plan.feasible(r, v)

    def rec(pos: int):
        if pos == len(order):
            if all(x == 0 for x in r):
                yield tuple(flow)
            return
        idx, e = order[pos]
        w = 2 if e.is_loop else 1
        if r[e.i - 1] < 0:
            return
        for b in range(r[e.i - 1] // w + 1):
            flow[idx] = b
            _step(r, e, b)
            if closes_ok(pos, e.i):
                yield from rec(pos + 1)
            _step(r, e, -b)
        flow[idx] = 0

    yield from rec(0)


def check_flow(G: SignedGraph, a: Sequence[int], flow: Sequence[int]) -> bool:
    """Conservation at every vertex: ``M_G b == a`` with ``b >= 0``."""
    if any(b < 0 for b in flow) or len(flow) != G.n_edges:
        return False
    M = incidence_matrix(G)
    return [int(x) for x in M @ list(flow)] == list(a) if G.n_edges else not any(a)


def positive_flow_total(G: SignedGraph, flow: Sequence) -> Fraction:
    """Total flow on positive edges, loops counted once."""
    return sum((Fraction(b) for e, b in zip(G.edges, flow) if e.is_positive), Fraction(0))


def polytope_dimension(G: SignedGraph, a: Sequence[int]) -> int:
    """Dimension of the affine hull of ``F_G(a)``.

    Edges that are zero on every real ``a``-flow are found by exact linear
    programming; the dimension is the number of remaining edges minus the rank
    of their roots.
    """
    a = _check(G, a)
    M = incidence_matrix(G).tolist()
    try:
        used = linalg.support(M, a)
    except linalg.Infeasible:
        raise EmptyPolytope(f"F_G({a}) is empty") from None
    cols = sorted(used)
    sub = [[row[c] for c in cols] for row in M]
    return len(cols) - linalg.rank(sub)


@dataclass(frozen=True)
class EhrhartTable:
    """Pairs ``(t, K_G(t*a))``."""

    rows: tuple[tuple[int, int], ...]

    def counts(self) -> list[int]:
        return [c for _, c in self.rows]

    def to_tsv(self) -> str:
        return "t\tcount\n" + "".join(f"{t}\t{c}\n" for t, c in self.rows)

    @classmethod
    def from_tsv(cls, text: str) -> "EhrhartTable":
        rows = []
        for line in text.strip().splitlines()[1:]:
            t, c = line.split("\t")
            rows.append((int(t), int(c)))
        return cls(tuple(rows))


def ehrhart_values(G: SignedGraph, a: Sequence[int], t_max: int) -> EhrhartTable:
    a = _check(G, a)
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    return EhrhartTable(tuple((t, kpf(G, [t * x for x in a])) for t in range(t_max + 1)))


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Exact polynomial, coefficients in ascending degree."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    @classmethod
    def interpolate(cls, xs: Sequence, ys: Sequence) -> "UnivariatePolynomial":
        """Lagrange interpolation through ``(xs[k], ys[k])``."""
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation nodes must be distinct")
        total = [Fraction(0)] * len(xs)
        for k, (xk, yk) in enumerate(zip(xs, ys)):
            basis = [Fraction(1)]
            denom = Fraction(1)
            for m, xm in enumerate(xs):
                if m == k:
                    continue
                basis = [Fraction(0)] + basis
                for d in range(len(basis) - 1):
                    basis[d] -= xm * basis[d + 1]
                denom *= xk - xm
            scale = Fraction(yk) / denom
            for d, coef in enumerate(basis):
                total[d] += scale * coef
        return cls(tuple(total))


def ehrhart_polynomial(G: SignedGraph, a: Sequence[int], dim: int | None = None
                       ) -> tuple[UnivariatePolynomial, int]:
    """Ehrhart polynomial of ``F_G(a)`` through ``t = 0..d``, checked at ``t = d+1``."""
    a = _check(G, a)
    d = polytope_dimension(G, a) if dim is None else dim
    table = ehrhart_values(G, a, d + 1)
    counts = table.counts()
    poly = UnivariatePolynomial.interpolate(list(range(d + 1)), counts[: d + 1])
    if poly(d + 1) != counts[d + 1]:
        raise ArithmeticError(
            f"Ehrhart interpolant of degree {d} predicts {poly(d + 1)} at t={d + 1}, "
            f"lattice count is {counts[d + 1]}"
        )
    return poly, d


def normalized_volume_ehrhart(G: SignedGraph, a: Sequence[int], dim: int | None = None) -> int:
    """``d!`` times the leading coefficient of the Ehrhart polynomial of ``F_G(a)``."""
    poly, d = ehrhart_polynomial(G, a, dim)
    if poly.degree != d:
        raise ArithmeticError(f"Ehrhart polynomial has degree {poly.degree}, polytope dimension {d}")
    vol = poly.leading * factorial(d)
    if vol.denominator != 1:
        raise ArithmeticError(f"normalized volume {vol} is not an integer")
    return int(vol)


def volume_in_dimension(G: SignedGraph, a: Sequence[int], k: int) -> int:
    """Normalized ``k``-dimensional volume of ``F_G(a)``: the Ehrhart volume if
    the polytope has dimension ``k``, and 0 if it is flatter (or empty)."""
    a = _check(G, a)
    try:
        d = polytope_dimension(G, a)
    except EmptyPolytope:
        return 0
    if d > k:
        raise ValueError(f"polytope has dimension {d} > {k}")
    return normalized_volume_ehrhart(G, a, d) if d == k else 0
