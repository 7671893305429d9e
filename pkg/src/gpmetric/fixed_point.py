"""Fixed-point hypotheses, solvers and the brute-force fixed-point oracle.

Four settings are covered: the weak phi-contraction on G-metrics and its
six-term partial-metric form, the point-potential Caristi condition on
partial and GP-metrics, and the pair-potential Caristi condition on
GP-metrics together with its constructive descent solver.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .convergence import PremiseError, gp_converges_to
from .core import (
    Carrier, ContractionGauge, GMetricCarrier, GPMetricCarrier, PairPotential,
    PartialMetricCarrier, PointPotential, SelfMap, SequenceTrace,
)
from .transforms import partial_to_g

FOUND = "fixed point found"
VIOLATED = "hypothesis violated"
EXHAUSTED = "iteration budget exhausted"


class InternalConsistencyError(RuntimeError):
    """A state the theory rules out once the checked hypotheses hold."""


@dataclass
class HypothesisReport:
    condition: str
    passed: bool
    checked: int
    witness: Optional[tuple] = None
    lhs: Any = None
    rhs: Any = None
    rows: list = field(default_factory=list)  # (point or pair, lhs, rhs)


def _scan(condition: str, cases, policy, keep_rows: bool) -> HypothesisReport:
    rows, first = [], None
    n = 0
    for key, lhs, rhs in cases:
        n += 1
        if keep_rows:
            rows.append((key, lhs, rhs))
        if first is None and not policy.le(lhs, rhs):
            first = (key, lhs, rhs)
            if not keep_rows:
                break
    if first is None:
        return HypothesisReport(condition, True, n, rows=rows)
    key, lhs, rhs = first
    return HypothesisReport(condition, False, n, key, lhs, rhs, rows)


# ---------------------------------------------------------------------------
# weak phi-contractions
# ---------------------------------------------------------------------------

def check_weak_g_contraction(g: GMetricCarrier, T: SelfMap, gauge: ContractionGauge,
                             keep_rows: bool = False) -> HypothesisReport:
    """G(Tx, T^2x, Ty) <= G(x, Tx, y) - gauge(G(x, Tx, y)) for all x, y."""
    U = g.universe

    def cases():
        for x in U:
            tx = T(x)
            ttx = T(tx)
            for y in U:
                right = g(x, tx, y)
                yield (x, y), g(tx, ttx, T(y)), right - gauge(right)

    return _scan("weak G-contraction", cases(), g.policy, keep_rows)


def check_partial_weak_contraction(p: PartialMetricCarrier, T: SelfMap, gauge: ContractionGauge,
                                   keep_rows: bool = False) -> HypothesisReport:
    """The weak contraction for the G-metric G_p built from ``p``."""
    rep = check_weak_g_contraction(partial_to_g(p), T, gauge, keep_rows)
    rep.condition = "weak partial contraction"
    return rep


def partial_weak_contraction_terms(p: PartialMetricCarrier, T: SelfMap, gauge: ContractionGauge,
                                   x, y) -> tuple:
    """Both sides of the six-term inequality written directly in p.

    Compared with the G_p form, both sides carry an extra +p(Tx,Tx), so the
    verdict is the same; the gauge argument is exactly G_p(x, Tx, y).
    """
    tx, ttx, ty = T(x), T(T(x)), T(y)
    lhs = p(tx, ttx) + p(tx, ty) + p(ttx, ty) - p(ttx, ttx) - p(ty, ty)
    base = p(x, tx) + p(x, y) + p(tx, y) - p(x, x) - p(y, y)
    rhs = base - gauge(base - p(tx, tx))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Caristi conditions
# ---------------------------------------------------------------------------

def check_partial_caristi(p: PartialMetricCarrier, T: SelfMap, phi: PointPotential,
                          keep_rows: bool = True) -> HypothesisReport:
    """p(x, Tx) <= phi(x) - phi(Tx) for all x."""
    cases = ((x, p(x, T(x)), phi(x) - phi(T(x))) for x in p.universe)
    return _scan("partial Caristi", cases, p.policy, keep_rows)


def check_gp_caristi(gp: GPMetricCarrier, T: SelfMap, phi: PointPotential,
                     keep_rows: bool = True) -> HypothesisReport:
    """GP(x, Tx, Tx) <= phi(x) - phi(Tx) for all x."""
    cases = ((x, gp(x, T(x), T(x)), phi(x) - phi(T(x))) for x in gp.universe)
    return _scan("GP Caristi", cases, gp.policy, keep_rows)


def check_caristi_pair(gp: GPMetricCarrier, T: SelfMap, phi: PairPotential,
                       keep_rows: bool = True) -> HypothesisReport:
    """GP(x, Tx, T^2x) <= phi(x, Tx) - phi(Tx, T^2x) for all x."""
    def cases():
        for x in gp.universe:
            tx = T(x)
            ttx = T(tx)
            yield x, gp(x, tx, ttx), phi(x, tx) - phi(tx, ttx)

    return _scan("pair Caristi", cases(), gp.policy, keep_rows)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------

@dataclass
class FixedPointReport:
    verdict: str
    point: Any = None
    iterations: int = 0
    residual: Any = None
    exact: Optional[bool] = None  # T(point) == point, when found
    hypothesis: Optional[HypothesisReport] = None
    trace: list = field(default_factory=list)
    states: list = field(default_factory=list)
    limit_value: Any = None

    @property
    def found(self) -> bool:
        return self.verdict == FOUND


def brute_force_fixed_points(T: SelfMap) -> list:
    return [x for x in T.universe if T(x) == x]


def fixed_point_residual(carrier: Carrier, x, tx):
    """A structure distance between x and Tx that vanishes exactly when they agree.

    p^s(x, Tx) for partial metrics, G(x, Tx, Tx) for G-metrics and
    2 GP(x, Tx, Tx) - GP(x, x, x) - GP(Tx, Tx, Tx) for GP-metrics.
    """
    if carrier.kind == "partial":
        return 2 * carrier(x, tx) - carrier(x, x) - carrier(tx, tx)
    if carrier.kind == "g":
        return carrier(x, tx, tx)
    return 2 * carrier(x, tx, tx) - carrier(x, x, x) - carrier(tx, tx, tx)


def _picard_hypothesis(carrier, T, gauge, phi) -> HypothesisReport:
    if gauge is not None:
        if carrier.kind == "g":
            return check_weak_g_contraction(carrier, T, gauge)
        if carrier.kind == "partial":
            return check_partial_weak_contraction(carrier, T, gauge)
    if phi is not None:
        if carrier.kind == "partial":
            return check_partial_caristi(carrier, T, phi, keep_rows=False)
        if carrier.kind == "gp":
            return check_gp_caristi(carrier, T, phi, keep_rows=False)
    raise ValueError(
        f"no hypothesis to enforce for a {carrier.kind} carrier; pass a gauge "
        "(G or partial), a point potential (partial or GP), or check=False")


def picard_solve(carrier: Carrier, T: SelfMap, x0, budget: int = 1000, *,
                 gauge: Optional[ContractionGauge] = None,
                 phi: Optional[PointPotential] = None, check: bool = True) -> FixedPointReport:
    """Iterate x <- Tx until the structure residual between x and Tx vanishes."""
    carrier.universe.index(x0)
    hyp = None
    if check:
        hyp = _picard_hypothesis(carrier, T, gauge, phi)
        if not hyp.passed:
            return FixedPointReport(VIOLATED, hypothesis=hyp)
    pol = carrier.policy
    x = x0
    orbit = [x]
    for it in range(budget + 1):
        tx = T(x)
        r = fixed_point_residual(carrier, x, tx)
        if pol.is_zero(r):
            return FixedPointReport(FOUND, x, it, r, tx == x, hyp, orbit)
        if it == budget:
            return FixedPointReport(EXHAUSTED, x, it, r, hypothesis=hyp, trace=orbit)
        x = tx
        orbit.append(x)


@dataclass
class CaristiState:
    point: Any
    phi_value: Any
    admissible: list
    infimum: Any
    slack: Fraction


def admissible_set(gp: GPMetricCarrier, T: SelfMap, phi: PairPotential, x) -> list:
    """A(x) = {z : GP(x, z, Tz) <= phi(x, Tx) - phi(z, Tz)}."""
    top = phi(x, T(x))
    pol = gp.policy
    return [z for z in gp.universe if pol.le(gp(x, z, T(z)), top - phi(z, T(z)))]


def caristi_descent_solve(gp: GPMetricCarrier, T: SelfMap, phi: PairPotential, x0,
                          budget: int = 1000, check: bool = True,
                          verify: bool = True) -> FixedPointReport:
    """Descend through admissible sets until GP(z, Tz, T^2z) vanishes.

    From x_n the next point is the element of A(x_n) minimising phi(z, Tz),
    ties broken by universe order. This realises a(x_n) exactly, so the
    selection bound phi(x_{n+1}, Tx_{n+1}) <= a(x_n) + 1/n always holds.
    With ``verify`` the descent invariants are asserted on the finished trace.
    """
    gp.universe.index(x0)
    hyp = None
    if check:
        hyp = check_caristi_pair(gp, T, phi, keep_rows=False)
        if not hyp.passed:
            return FixedPointReport(VIOLATED, hypothesis=hyp)
    pol = gp.policy
    order = gp.universe.index
    x = x0
    trace, states = [x], []
    for n in range(1, budget + 2):
        tx = T(x)
        fx = phi(x, tx)
        r = gp(x, tx, T(tx))
        if pol.is_zero(r):
            report = FixedPointReport(FOUND, x, n - 1, r, tx == x, hyp, trace, states, fx)
            if report.exact is False and pol.exact:
                raise InternalConsistencyError(
                    f"GP(z,Tz,T^2z) = 0 at {x!r} but T moves it to {tx!r}")
            break
        if n > budget:
            report = FixedPointReport(EXHAUSTED, x, n - 1, r, hypothesis=hyp, trace=trace,
                                      states=states, limit_value=fx)
            break
        A = admissible_set(gp, T, phi, x)
        if not A:
            if check:
                raise InternalConsistencyError(
                    f"A({x!r}) is empty although T{x!r} should lie in it")
            # unchecked run: the hypothesis fails at x in practice
            states.append(CaristiState(x, fx, A, None, Fraction(1, n)))
            report = FixedPointReport(VIOLATED, x, n - 1, r, hypothesis=hyp, trace=trace,
                                      states=states, limit_value=fx)
            break
        values = {z: phi(z, T(z)) for z in A}
        a = min(values.values())
        nxt = min((z for z in A if values[z] == a), key=order)
        states.append(CaristiState(x, fx, A, a, Fraction(1, n)))
        if nxt == x:
            report = FixedPointReport(VIOLATED, x, n - 1, r, hypothesis=hyp, trace=trace,
                                      states=states, limit_value=fx)
            break
        x = nxt
        trace.append(x)
    if verify:
        problems = descent_violations(gp, T, phi, report)
        if problems:
            raise InternalConsistencyError("; ".join(problems[:5]))
    return report


def descent_violations(gp: GPMetricCarrier, T: SelfMap, phi: PairPotential,
                       report: FixedPointReport) -> list[str]:
    """Check a descent trace against the inequalities the construction guarantees.

    * phi(x_n, Tx_n) is non-increasing;
    * each chosen point meets phi(x_{n+1}, Tx_{n+1}) <= a(x_n) + 1/n;
    * GP(x_n, x_m, Tx_m) <= phi(x_n, Tx_n) - phi(x_m, Tx_m) for m > n;
    * G_GP(x_n, x_m, x_m) <= 2 GP(x_n, x_m, Tx_m) for m > n.
    """
    pol = gp.policy
    xs = report.trace
    f = [phi(x, T(x)) for x in xs]
    out = []
    for n in range(len(xs) - 1):
        if not pol.le(f[n + 1], f[n]):
            out.append(f"phi increases at step {n + 1}")
    for n, state in enumerate(report.states):
        if state.infimum is None:
            continue
        if n + 1 < len(xs) and not pol.le(f[n + 1], state.infimum + state.slack):
            out.append(f"selection above a(x_n) + 1/n at step {n + 1}")
    for n in range(len(xs)):
        xn = xs[n]
        for m in range(n + 1, len(xs)):
            xm = xs[m]
            tele = gp(xn, xm, T(xm))
            if not pol.le(tele, f[n] - f[m]):
                out.append(f"telescoping bound fails for (n, m) = ({n + 1}, {m + 1})")
            g_nmm = 2 * gp(xn, xm, xm) - gp(xn, xn, xn) - gp(xm, xm, xm)
            if not pol.le(g_nmm, 2 * tele):
                out.append(f"G_GP domination fails for (n, m) = ({n + 1}, {m + 1})")
    return out


# ---------------------------------------------------------------------------
# T-lower semicontinuity probe
# ---------------------------------------------------------------------------

@dataclass
class LscProbeReport:
    """Outcome of checking the T-l.s.c. inequality on supplied traces only."""

    label: str
    passed: bool
    rows: list  # (limit, phi(x, Tx), tail infimum, ok)


def t_lsc_probe(phi: PairPotential, T: SelfMap, gp: GPMetricCarrier,
                witnesses: Sequence[tuple[SequenceTrace, Any]], tolerance=0) -> LscProbeReport:
    """For each (trace, limit): phi(x, Tx) <= inf over the tail of phi(x_m, Tx_m) + tolerance.

    Premise per trace: the trace GP-converges to its limit and
    |GP(x_n, x_m, Tx_m) - GP(x, x, x)| stays within the trace epsilon on the
    tail. The finite-window liminf is taken as the tail infimum.
    """
    rows = []
    for trace, x in witnesses:
        cert = gp_converges_to(trace, x, gp)
        if not cert.certified:
            raise PremiseError(f"trace does not GP-converge to {x!r}: {cert.residuals}")
        c = gp(x, x, x)
        tail = trace.tail
        dev = max(abs(gp(a, b, T(b)) - c) for a in tail for b in tail)
        if dev > trace.epsilon:
            raise PremiseError(
                f"GP(x_n, x_m, Tx_m) stays {dev} away from GP(x, x, x) on the tail")
        lim = min(phi(b, T(b)) for b in tail)
        at_limit = phi(x, T(x))
        rows.append((x, at_limit, lim, at_limit <= lim + tolerance))
    return LscProbeReport("probe", all(r[3] for r in rows), rows)

