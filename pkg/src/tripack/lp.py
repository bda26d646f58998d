"""Exact fractional triangle packing LP with optimality certificates.

Primal:  maximize 3 * sum_T w_T   subject to  sum_{T containing e} w_T <= 1,  w >= 0.
Dual:    minimize 3 * sum_e y_e   subject to  sum_{e in T} y_e >= 1,          y >= 0.

Both sides are rational.  Optimality is certified by a feasible primal and a
feasible dual with equal objective values, checked from scratch by
:func:`verify_certificate`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import graph6
from .graph import Edge, Graph, Triangle, triangles

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
MODEL_ERROR = "infeasible-model-error"

_ZERO = Fraction(0)
_ONE = Fraction(1)
_THREE = Fraction(3)


class CertificateError(RuntimeError):
    """An LP certificate failed exact verification."""


@dataclass(frozen=True)
class Packing:
    host: Graph
    weights: Mapping[Triangle, Fraction] = field(default_factory=dict)

    @property
    def size(self) -> Fraction:
        return 3 * sum(self.weights.values(), _ZERO)

    def edge_loads(self) -> dict[Edge, Fraction]:
        loads: dict[Edge, Fraction] = {}
        for (a, b, c), w in self.weights.items():
            for e in ((a, b), (a, c), (b, c)):
                loads[e] = loads.get(e, _ZERO) + w
        return loads


@dataclass(frozen=True)
class LPResult:
    nu_star: Fraction
    primal: Packing
    dual: Mapping[Edge, Fraction]
    status: str = OPTIMAL


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


class _Model:
    """Row/column structure of the packing LP for one graph."""

    def __init__(self, g: Graph):
        self.g = g
        self.edges = g.edges()
        self.row = {e: i for i, e in enumerate(self.edges)}
        self.tris = triangles(g)
        self.cols = [
            (self.row[(a, b)], self.row[(a, c)], self.row[(b, c)]) for a, b, c in self.tris
        ]

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def t(self) -> int:
        return len(self.tris)

    def result(self, w: Sequence[Fraction], y: Sequence[Fraction]) -> LPResult:
        primal = {T: x for T, x in zip(self.tris, w) if x}
        dual = {e: v for e, v in zip(self.edges, y) if v}
        return LPResult(3 * sum(primal.values(), _ZERO), Packing(self.g, primal), dual)


class ExactSimplex:
    """Revised primal simplex over rationals with Bland's rule.

    Variables ``0..t-1`` are triangle weights, ``t..t+m-1`` are edge slacks.
    The inverse basis is kept as sparse rows.  Single-use: build, call
    :meth:`solve`, read the solution.
    """

    def __init__(self, model: _Model, basis: Optional[Sequence[int]] = None):
        self.model = model
        m, t = model.m, model.t
        self.pivots = 0
        if basis is None:
            self.basis = [t + i for i in range(m)]
            self.binv = [{i: _ONE} for i in range(m)]
            self.xb = [_ONE] * m
        else:
            self._load_basis(list(basis))

    def _column(self, j: int) -> tuple[int, ...]:
        t = self.model.t
        return self.model.cols[j] if j < t else (j - t,)

    def _load_basis(self, basis: list[int]) -> None:
        m = self.model.m
        if len(basis) != m or len(set(basis)) != m:
            raise ValueError("basis must name m distinct columns")
        # Gauss-Jordan on [B | I]; row r of B is edge r, column k is basis[k].
        rows: list[dict[int, Fraction]] = [dict() for _ in range(m)]
        for k, j in enumerate(basis):
            for r in self._column(j):
                rows[r][k] = _ONE
        aug: list[dict[int, Fraction]] = [{r: _ONE} for r in range(m)]
        for k in range(m):
            piv = None
            for r in range(k, m):
                if rows[r].get(k):
                    if piv is None or len(rows[r]) < len(rows[piv]):
                        piv = r
            if piv is None:
                raise ValueError("basis matrix is singular")
            rows[k], rows[piv] = rows[piv], rows[k]
            aug[k], aug[piv] = aug[piv], aug[k]
            p = rows[k][k]
            if p != 1:
                inv = 1 / p
                rows[k] = {c: v * inv for c, v in rows[k].items()}
                aug[k] = {c: v * inv for c, v in aug[k].items()}
            prow, paug = rows[k], aug[k]
            for r in range(m):
                if r == k:
                    continue
                f = rows[r].get(k)
                if not f:
                    continue
                _axpy(rows[r], -f, prow)
                _axpy(aug[r], -f, paug)
        self.basis = basis
        self.binv = aug
        self.xb = [sum(row.values(), _ZERO) for row in aug]

    def duals(self) -> list[Fraction]:
        """Simplex multipliers c_B^T B^{-1}, one per edge (objective scale 3)."""
        t = self.model.t
        y = [_ZERO] * self.model.m
        for r, j in enumerate(self.basis):
            if j < t:
                for c, v in self.binv[r].items():
                    y[c] += 3 * v
        return y

    def primal_feasible(self) -> bool:
        return all(x >= 0 for x in self.xb)

    def _entering(self, y: list[Fraction]) -> Optional[int]:
        basic = set(self.basis)
        t = self.model.t
        for j, (e1, e2, e3) in enumerate(self.model.cols):
            if j not in basic and y[e1] + y[e2] + y[e3] < _THREE:
                return j
        for i in range(self.model.m):
            if t + i not in basic and y[i] < 0:
                return t + i
        return None

    def solve(self, max_pivots: int = 1_000_000) -> None:
        if not self.primal_feasible():
            raise ValueError("starting basis is not primal feasible")
        while True:
            y = self.duals()
            j = self._entering(y)
            if j is None:
                return
            col = self._column(j)
            d = [sum((row.get(c, _ZERO) for c in col), _ZERO) for row in self.binv]
            leave = None
            best = None
            for r, dr in enumerate(d):
                if dr > 0:
                    ratio = self.xb[r] / dr
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[r] < self.basis[leave])):
                        best, leave = ratio, r
            if leave is None:
                raise CertificateError("packing LP reported unbounded")
            self._pivot(leave, j, d)
            self.pivots += 1
            if self.pivots > max_pivots:
                raise RuntimeError("pivot limit exceeded")

    def _pivot(self, r: int, j: int, d: list[Fraction]) -> None:
        p = d[r]
        prow = {c: v / p for c, v in self.binv[r].items()}
        px = self.xb[r] / p
        self.binv[r] = prow
        self.xb[r] = px
        for i, di in enumerate(d):
            if i != r and di:
                _axpy(self.binv[i], -di, prow)
                self.xb[i] -= di * px
        self.basis[r] = j

    def solution(self) -> tuple[list[Fraction], list[Fraction]]:
        t = self.model.t
        w = [_ZERO] * t
        for r, j in enumerate(self.basis):
            if j < t:
                w[j] = self.xb[r]
        y = [v / 3 for v in self.duals()]
        return w, y


def _axpy(target: dict[int, Fraction], a: Fraction, src: dict[int, Fraction]) -> None:
    for c, v in src.items():
        nv = target.get(c, _ZERO) + a * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)


def _float_solve(model: _Model):
    import highspy
    import numpy as np

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("solver", "simplex")
    lp = highspy.HighsLp()
    lp.num_col_ = model.t
    lp.num_row_ = model.m
    lp.col_cost_ = np.full(model.t, 3.0)
    lp.col_lower_ = np.zeros(model.t)
    lp.col_upper_ = np.full(model.t, highspy.kHighsInf)
    lp.row_lower_ = np.full(model.m, -highspy.kHighsInf)
    lp.row_upper_ = np.ones(model.m)
    lp.sense_ = highspy.ObjSense.kMaximize
    lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    lp.a_matrix_.start_ = np.arange(0, 3 * model.t + 1, 3, dtype=np.int32)
    lp.a_matrix_.index_ = np.array([r for col in model.cols for r in col], dtype=np.int32)
    lp.a_matrix_.value_ = np.ones(3 * model.t)
    h.passModel(lp)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    sol = h.getSolution()
    b = h.getBasis()
    basic = highspy.HighsBasisStatus.kBasic
    basis = [j for j, s in enumerate(b.col_status) if s == basic]
    basis += [model.t + i for i, s in enumerate(b.row_status) if s == basic]
    return list(sol.col_value), list(sol.row_dual), basis


def _snap(x: float, limit: int = 10**6) -> Fraction:
    if abs(x) < 1e-9:
        return _ZERO
    return Fraction(x).limit_denominator(limit)


def _sparse_solve(rows: list[dict[int, Fraction]], rhs: list[Fraction]) -> Optional[dict[int, Fraction]]:
    """Solve the square system sum_c rows[r][c] * x[c] = rhs[r] exactly.

    Gaussian elimination that always pivots on the column with the fewest
    remaining entries, which keeps fill-in low on 0/1 incidence matrices.
    Returns None for a singular system.
    """
    m = len(rows)
    rows = [dict(r) for r in rows]
    rhs = list(rhs)
    col_rows: dict[int, set[int]] = {}
    for r, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    if len(col_rows) != m:
        return None
    order = []
    for _ in range(m):
        c = min((c for c, rs in col_rows.items() if rs), key=lambda c: (len(col_rows[c]), c), default=None)
        if c is None:
            return None
        r = min(col_rows[c], key=lambda r: (len(rows[r]), r))
        prow = rows[r]
        p = prow[c]
        for r2 in sorted(col_rows[c]):
            if r2 == r:
                continue
            row2 = rows[r2]
            f = row2[c] / p
            for cc, v in prow.items():
                nv = row2.get(cc, _ZERO) - f * v
                if nv:
                    if cc not in row2:
                        col_rows[cc].add(r2)
                    row2[cc] = nv
                elif cc in row2:
                    del row2[cc]
                    col_rows[cc].discard(r2)
            rhs[r2] -= f * rhs[r]
        for cc in prow:
            col_rows[cc].discard(r)
        order.append((r, c))
    x: dict[int, Fraction] = {}
    for r, c in reversed(order):
        acc = rhs[r]
        for cc, v in rows[r].items():
            if cc != c:
                acc -= v * x[cc]
        x[c] = acc / rows[r][c]
    return x


def _basis_solution(model: _Model, basis: list[int]) -> Optional[tuple[list[Fraction], list[Fraction]]]:
    """Exact primal and dual values of a basis, without forming its inverse."""
    t, m = model.t, model.m
    if len(basis) != m:
        return None
    cols = [model.cols[j] if j < t else (j - t,) for j in basis]
    by_row: list[dict[int, Fraction]] = [dict() for _ in range(m)]
    for k, col in enumerate(cols):
        for r in col:
            by_row[r][k] = _ONE
    xb = _sparse_solve(by_row, [_ONE] * m)
    if xb is None:
        return None
    by_col = [{r: _ONE for r in col} for col in cols]
    z = _sparse_solve(by_col, [_THREE if j < t else _ZERO for j in basis])
    if z is None:
        return None
    w = [_ZERO] * t
    for k, j in enumerate(basis):
        if j < t:
            w[j] = xb[k]
    return w, [z[r] / 3 for r in range(m)]


def _exact_from_float(model: _Model) -> Optional[LPResult]:
    got = _float_solve(model)
    if got is None:
        return None
    colv, rowd, basis = got
    # Cheapest first: snap the float vertex to nearby rationals.
    w = [max(_snap(x), _ZERO) for x in colv]
    y = [_snap(abs(v)) / 3 for v in rowd]
    res = model.result(w, y)
    if _verdict(model.g, res):
        return res
    # Then the float basis, solved exactly.
    exact = _basis_solution(model, basis)
    if exact is not None:
        res = model.result(*exact)
        if _verdict(model.g, res):
            return res
        if all(x >= 0 for x in exact[0]):
            simplex = ExactSimplex(model, basis)
            simplex.solve()
            log.debug("repaired float basis with %d exact pivots", simplex.pivots)
            return model.result(*simplex.solution())
    return None


def solve_packing_lp(g: Graph, presolve: bool = True) -> LPResult:
    """Exact optimum of the fractional triangle packing LP with both certificates.

    With ``presolve`` the LP is first solved in floating point and the
    answer is confirmed or repaired exactly; the exact simplex from the
    all-slack basis is the fallback and the only route without presolve.
    """
    model = _Model(g)
    if model.t == 0:
        return LPResult(_ZERO, Packing(g, {}), {})
    if presolve:
        res = _exact_from_float(model)
        if res is not None:
            return res
        log.debug("float presolve inconclusive on %s", graph6.encode(g))
    simplex = ExactSimplex(model)
    simplex.solve()
    return model.result(*simplex.solution())


def check_packing(g: Graph, weights: Mapping[Triangle, Fraction]) -> Verdict:
    """Exact primal feasibility: triangles of ``g``, weights in [0, 1], loads <= 1."""
    loads: dict[Edge, Fraction] = {}
    for T, w in weights.items():
        a, b, c = T
        if not (a < b < c and g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
            return Verdict(False, f"{T} is not a triangle of the graph")
        if not 0 <= w <= 1:
            return Verdict(False, f"weight {w} on {T} outside [0, 1]")
        for e in ((a, b), (a, c), (b, c)):
            loads[e] = loads.get(e, _ZERO) + w
    for e, load in loads.items():
        if load > 1:
            return Verdict(False, f"edge {e} overloaded: {load} > 1")
    return Verdict(True)


def check_cover(g: Graph, dual: Mapping[Edge, Fraction]) -> Verdict:
    """Exact dual feasibility: y >= 0 on edges of ``g`` and every triangle covered."""
    for e, v in dual.items():
        if not g.has_edge(*e) or e[0] >= e[1]:
            return Verdict(False, f"{e} is not an edge of the graph")
        if v < 0:
            return Verdict(False, f"negative cover weight {v} on {e}")
    for a, b, c in triangles(g):
        s = dual.get((a, b), _ZERO) + dual.get((a, c), _ZERO) + dual.get((b, c), _ZERO)
        if s < 1:
            return Verdict(False, f"triangle {(a, b, c)} cover deficit: {s} < 1")
    return Verdict(True)


def verify_certificate(g: Graph, r: LPResult) -> Verdict:
    """Exact check of both certificates and of strong duality."""
    return _verdict(g, r)


def _verdict(g: Graph, r: LPResult) -> Verdict:
    # also used to screen candidate solutions inside the solver
    if r.status != OPTIMAL:
        return Verdict(False, f"status {r.status}")
    if r.primal.host != g:
        return Verdict(False, "primal packing belongs to a different graph")
    v = check_packing(g, r.primal.weights)
    if not v:
        return Verdict(False, "primal: " + v.reason)
    v = check_cover(g, r.dual)
    if not v:
        return Verdict(False, "dual: " + v.reason)
    primal = 3 * sum(r.primal.weights.values(), _ZERO)
    dual = 3 * sum(r.dual.values(), _ZERO)
    if primal != r.nu_star:
        return Verdict(False, f"primal size {primal} differs from claimed optimum {r.nu_star}")
    if dual != r.nu_star:
        return Verdict(False, f"dual value {dual} differs from claimed optimum {r.nu_star}")
    return Verdict(True)


def nu_star(g: Graph, presolve: bool = True) -> Fraction:
    res = solve_packing_lp(g, presolve=presolve)
    verdict = verify_certificate(g, res)
    if not verdict:
        raise CertificateError(f"{graph6.encode(g).decode()}: {verdict.reason}")
    return res.nu_star


def certified(g: Graph, presolve: bool = True) -> LPResult:
    """Solve and verify; raise :class:`CertificateError` on any failure."""
    res = solve_packing_lp(g, presolve=presolve)
    verdict = verify_certificate(g, res)
    if not verdict:
        raise CertificateError(f"{graph6.encode(g).decode()}: {verdict.reason}")
    return res


def has_fractional_decomposition(g: Graph, presolve: bool = True) -> bool:
    return nu_star(g, presolve=presolve) == g.num_edges


# -- certificate text format ------------------------------------------------

def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_certificate(r: LPResult) -> str:
    """n, graph6, nu_star, then 'a b c p/q' per primal weight and 'a b p/q' per dual weight."""
    g = r.primal.host
    lines = [str(g.n), graph6.encode(g).decode(), _fmt(r.nu_star)]
    for (a, b, c), w in sorted(r.primal.weights.items()):
        if w > 0:
            lines.append(f"{a} {b} {c} {_fmt(w)}")
    for (a, b), y in sorted(r.dual.items()):
        if y > 0:
            lines.append(f"{a} {b} {_fmt(y)}")
    return "\n".join(lines) + "\n"


def format_packing(p: Packing) -> str:
    g = p.host
    lines = [str(g.n), graph6.encode(g).decode(), _fmt(p.size)]
    for (a, b, c), w in sorted(p.weights.items()):
        if w > 0:
            lines.append(f"{a} {b} {c} {_fmt(w)}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> LPResult:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("certificate needs n, graph6 and nu_star lines")
    n = int(lines[0])
    g = graph6.decode(lines[1])
    if g.n != n:
        raise ValueError(f"header says n={n} but graph6 encodes n={g.n}")
    value = Fraction(lines[2])
    primal: dict[Triangle, Fraction] = {}
    dual: dict[Edge, Fraction] = {}
    for ln in lines[3:]:
        parts = ln.split()
        if len(parts) == 4:
            a, b, c = sorted(int(x) for x in parts[:3])
            primal[(a, b, c)] = Fraction(parts[3])
        elif len(parts) == 3:
            a, b = sorted(int(x) for x in parts[:2])
            dual[(a, b)] = Fraction(parts[2])
        else:
            raise ValueError(f"unrecognized certificate line {ln!r}")
    return LPResult(value, Packing(g, primal), dual)
