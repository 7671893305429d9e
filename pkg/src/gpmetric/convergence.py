"""Finite-prefix Cauchy and convergence certificates.

A certificate only speaks about the window ``[window_start, N]`` of a
supplied trace. Verdicts:

* ``certified``: every tail value lies within ``epsilon`` of the limit
  estimate (or of the fixed limit 0 for G-metrics);
* ``refuted``: the tail oscillates by more than ``2 * epsilon`` (for a fixed
  limit: some tail value is more than ``2 * epsilon`` away from it);
* ``inconclusive``: neither.

Indices in witnesses are 1-based positions in the trace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (
    Carrier, GMetricCarrier, GPMetricCarrier, PartialMetricCarrier, PointUniverse,
    SequenceTrace,
)
from .transforms import gp_to_g, gp_to_partial, partial_to_g

CERTIFIED, REFUTED, INCONCLUSIVE = "certified", "refuted", "inconclusive"


class PremiseError(ValueError):
    """A probe was given traces that do not satisfy its premise."""


@dataclass
class CauchyCertificate:
    kind: str
    limit_estimate: object
    epsilon: object
    window: tuple
    verdict: str
    max_deviation: object
    oscillation: object
    witness: Optional[tuple] = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED


@dataclass
class ConvergenceCertificate:
    kind: str
    limit: object
    epsilon: object
    window: tuple
    verdict: str
    residuals: dict = field(default_factory=dict)
    witness: Optional[tuple] = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED


def _mean(values):
    total = sum(values)
    n = len(values)
    return total / n if isinstance(total, float) else Fraction(total) / n


def _window(trace: SequenceTrace) -> tuple:
    return trace.window_start, len(trace)


def _indexed_tail(trace: SequenceTrace):
    return list(enumerate(trace.tail, start=trace.window_start))


def _ordered_pairs(trace: SequenceTrace):
    tail = _indexed_tail(trace)
    return [(a, b) for a in tail for b in tail]


def _free_limit_certificate(kind: str, trace: SequenceTrace, samples) -> CauchyCertificate:
    """samples: list of ((n, m), value)."""
    values = [v for _, v in samples]
    L = _mean(values)
    eps = trace.epsilon
    hi = max(samples, key=lambda s: s[1])
    lo = min(samples, key=lambda s: s[1])
    osc = hi[1] - lo[1]
    dev = max(abs(v - L) for v in values)
    if dev <= eps:
        verdict, witness = CERTIFIED, None
    elif osc > 2 * eps:
        verdict, witness = REFUTED, (hi[0], lo[0])
    else:
        verdict, witness = INCONCLUSIVE, None
    return CauchyCertificate(kind, L, eps, _window(trace), verdict, dev, osc, witness)


def _zero_limit_certificate(kind: str, trace: SequenceTrace, samples) -> CauchyCertificate:
    eps = trace.epsilon
    hi = max(samples, key=lambda s: s[1])
    lo = min(samples, key=lambda s: s[1])
    if hi[1] <= eps:
        verdict, witness = CERTIFIED, None
    elif hi[1] > 2 * eps:
        verdict, witness = REFUTED, (hi[0],)
    else:
        verdict, witness = INCONCLUSIVE, None
    return CauchyCertificate(kind, 0, eps, _window(trace), verdict, hi[1], hi[1] - lo[1], witness)


def p_cauchy(trace: SequenceTrace, p: PartialMetricCarrier) -> CauchyCertificate:
    """Tail values p(x_n, x_m) over ordered pairs n, m >= window start, clustered within epsilon."""
    trace.check_in(p.universe)
    return _free_limit_certificate("partial", trace, _p_samples(trace, p))


def g_cauchy(trace: SequenceTrace, g: GMetricCarrier) -> CauchyCertificate:
    """Tail values G(x_n, x_m, x_m) at most epsilon."""
    trace.check_in(g.universe)
    return _zero_limit_certificate("g", trace, _g_samples(trace, g))


def gp_cauchy(trace: SequenceTrace, gp: GPMetricCarrier) -> CauchyCertificate:
    trace.check_in(gp.universe)
    return _free_limit_certificate("gp", trace, _g_samples(trace, gp))


def _p_samples(trace: SequenceTrace, p) -> list:
    # Ordered pairs, so the mean weights every pair as the GP certificate does.
    return [((n, m), p(x, y)) for (n, x), (m, y) in _ordered_pairs(trace)]


def _g_samples(trace: SequenceTrace, g) -> list:
    # G(x_n, x_m, x_m); also the GP-Cauchy quantity.
    return [((n, m), g(x, y, y)) for (n, x), (m, y) in _ordered_pairs(trace)]


CAUCHY = {"partial": p_cauchy, "g": g_cauchy, "gp": gp_cauchy}


def cauchy(trace: SequenceTrace, carrier: Carrier) -> CauchyCertificate:
    return CAUCHY[carrier.kind](trace, carrier)


def _residual_certificate(kind, x, trace, families: dict) -> ConvergenceCertificate:
    """families: name -> list of (index, residual)."""
    eps = trace.epsilon
    residuals = {name: max(r for _, r in rows) for name, rows in families.items()}
    worst_name = max(residuals, key=residuals.get)
    worst = residuals[worst_name]
    if worst <= eps:
        verdict, witness = CERTIFIED, None
    elif worst > 2 * eps:
        idx = max(families[worst_name], key=lambda r: r[1])[0]
        verdict, witness = REFUTED, (worst_name, idx)
    else:
        verdict, witness = INCONCLUSIVE, None
    return ConvergenceCertificate(kind, x, eps, _window(trace), verdict, residuals, witness)


def p_converges_to(trace: SequenceTrace, x, p: PartialMetricCarrier) -> ConvergenceCertificate:
    """Tail residual |p(x_n, x) - p(x, x)|."""
    p.universe.index(x)
    trace.check_in(p.universe)
    c = p(x, x)
    rows = [(n, abs(p(xn, x) - c)) for n, xn in _indexed_tail(trace)]
    return _residual_certificate("partial", x, trace, {"p(x_n,x)": rows})


def g_converges_to(trace: SequenceTrace, x, g: GMetricCarrier) -> ConvergenceCertificate:
    """Tail values G(x, x_n, x_m) at most epsilon."""
    g.universe.index(x)
    trace.check_in(g.universe)
    return _residual_certificate("g", x, trace, _g_limit_families(trace, x, g))


def _g_limit_families(trace: SequenceTrace, x, g) -> dict:
    return {"G(x,x_n,x_m)": [((n, m), g(x, a, b)) for (n, a), (m, b) in _ordered_pairs(trace)]}


def gp_converges_to(trace: SequenceTrace, x, gp: GPMetricCarrier) -> ConvergenceCertificate:
    """Both GP(x_n,x_n,x_n) and GP(x,x,x_n) tend to GP(x,x,x) on the tail."""
    gp.universe.index(x)
    trace.check_in(gp.universe)
    c = gp(x, x, x)
    tail = _indexed_tail(trace)
    return _residual_certificate("gp", x, trace, {
        "GP(x_n,x_n,x_n)": [(n, abs(gp(a, a, a) - c)) for n, a in tail],
        "GP(x,x,x_n)": [(n, abs(gp(x, x, a) - c)) for n, a in tail],
    })


# ---------------------------------------------------------------------------
# cross-structure harnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToleranceLink:
    """Tolerance factors relating two certificate families on the same trace.

    ``up``: a certified at eps implies b certified at up*eps; ``down``: b
    certified at eps implies a certified at down*eps; ``refute_ab`` /
    ``refute_ba``: a (resp. b) refuted at eps implies the other refuted at
    factor*eps.
    """

    up: Fraction
    down: Fraction
    refute_ab: Fraction
    refute_ba: Fraction


# Cauchy certificates on a partial metric p versus G_p. With all tail p-values
# within eps of L, G_p(x_n,x_m,x_m) = 2p(x_n,x_m) - p(x_n,x_n) - p(x_m,x_m) is
# at most 4 eps. Conversely G_p <= eps bounds the diagonal spread by eps and
# the off-diagonal excess by eps/2, so the p-values spread at most 3eps/2.
CAUCHY_LINK = ToleranceLink(Fraction(4), Fraction(2), Fraction(1, 2), Fraction(1, 2))
# GP versus p_GP: identical tail values.
IDENTICAL_LINK = ToleranceLink(Fraction(1), Fraction(1), Fraction(1), Fraction(1))
# Four-limit chain versus G(x, x_n, x_m) -> 0. The chain at eps gives G <= 5 eps;
# G <= eps splits into three nonnegative terms and gives the chain at 2 eps.
LIMIT_LINK = ToleranceLink(Fraction(5), Fraction(2), Fraction(1, 2), Fraction(1, 5))


@dataclass
class Disagreement:
    link: str
    premise: str
    conclusion: str


@dataclass
class HarnessReport:
    certificates: dict
    disagreements: list

    @property
    def agree(self) -> bool:
        return not self.disagreements

    @property
    def verdicts(self) -> dict:
        return {k: c.verdict for k, c in self.certificates.items()}


def _check_link(name_a: str, run_a: Callable, name_b: str, run_b: Callable,
                eps, link: ToleranceLink) -> list:
    out = []
    label = f"{name_a} <-> {name_b}"

    def implies(premise_name, premise, pred_p, concl_name, concl, pred_c, factor, what):
        if pred_p(premise(eps)) and not pred_c(concl(factor * eps)):
            out.append(Disagreement(
                label, f"{premise_name} {what} at eps={eps}",
                f"{concl_name} not {what} at {factor}*eps"))

    cert = lambda c: c.certified  # noqa: E731
    ref = lambda c: c.refuted  # noqa: E731
    implies(name_a, run_a, cert, name_b, run_b, cert, link.up, CERTIFIED)
    implies(name_b, run_b, cert, name_a, run_a, cert, link.down, CERTIFIED)
    implies(name_a, run_a, ref, name_b, run_b, ref, link.refute_ab, REFUTED)
    implies(name_b, run_b, ref, name_a, run_a, ref, link.refute_ba, REFUTED)
    return out


def _at(build, sampler, trace: SequenceTrace, carrier):
    """Certificate as a function of epsilon; the tail samples are computed once."""
    trace.check_in(carrier.universe)
    samples = sampler(trace, carrier)
    kind = carrier.kind
    return lambda eps: build(kind, trace.with_epsilon(eps), samples)


@lru_cache(maxsize=32)
def _derived(carrier: Carrier, target: str) -> Carrier:
    # Carriers are immutable, so derived structures can be shared between traces.
    if target == "p_GP":
        out = gp_to_partial(carrier)
    elif target == "G_GP":
        out = gp_to_g(carrier)
    else:
        out = partial_to_g(carrier)
    return out.materialize() if len(carrier.universe) <= 64 else out


def equivalence_harness(trace: SequenceTrace, carrier: Carrier) -> HarnessReport:
    """Run the Cauchy certificate on a carrier and its transformed counterparts.

    Partial source: p and G_p. GP source: GP, p_GP and G_GP. Every pair is
    checked in both directions at the factors of its :class:`ToleranceLink`;
    a violated implication is a disagreement.
    """
    eps = trace.epsilon
    if carrier.kind == "partial":
        runs = {"p": _at(_free_limit_certificate, _p_samples, trace, carrier),
                "G_p": _at(_zero_limit_certificate, _g_samples, trace,
                           _derived(carrier, "G_p"))}
        links = [("p", "G_p", CAUCHY_LINK)]
    elif carrier.kind == "gp":
        runs = {"GP": _at(_free_limit_certificate, _g_samples, trace, carrier),
                "p_GP": _at(_free_limit_certificate, _p_samples, trace,
                            _derived(carrier, "p_GP")),
                "G_GP": _at(_zero_limit_certificate, _g_samples, trace,
                            _derived(carrier, "G_GP"))}
        links = [("GP", "p_GP", IDENTICAL_LINK), ("GP", "G_GP", CAUCHY_LINK),
                 ("p_GP", "G_GP", CAUCHY_LINK)]
    else:
        raise ValueError("the harness takes a partial or GP carrier")
    disagreements = []
    for a, b, link in links:
        disagreements += _check_link(a, runs[a], b, runs[b], eps, link)
    return HarnessReport({k: run(eps) for k, run in runs.items()}, disagreements)


def limit_chain(trace: SequenceTrace, x, carrier: Carrier) -> ConvergenceCertificate:
    """p(x,x) = lim p(x,x_n) = lim p(x_n,x_m) = lim p(x_n,x_n), or the GP analogue."""
    carrier.universe.index(x)
    trace.check_in(carrier.universe)
    return _residual_certificate(carrier.kind, x, trace, _chain_families(trace, x, carrier))


def _chain_families(trace: SequenceTrace, x, carrier: Carrier) -> dict:
    if carrier.kind == "gp":
        d = lambda a, b: carrier(a, b, b)  # noqa: E731
    elif carrier.kind == "partial":
        d = carrier
    else:
        raise ValueError("the limit chain is stated for partial and GP carriers")
    c = d(x, x)
    tail = _indexed_tail(trace)
    return {
        "to-limit": [(n, abs(d(x, a) - c)) for n, a in tail],
        "pairs": [((n, m), abs(d(a, b) - c)) for n, a in tail for m, b in tail],
        "diagonal": [(n, abs(d(a, a) - c)) for n, a in tail],
    }


@dataclass
class LimitEquivalenceReport:
    chain: ConvergenceCertificate
    g_limit: ConvergenceCertificate
    disagreements: list

    @property
    def agree(self) -> bool:
        return not self.disagreements


def limit_equivalence_check(trace: SequenceTrace, x, carrier: Carrier) -> LimitEquivalenceReport:
    """Four-limit chain on the carrier versus G(x, x_n, x_m) -> 0 on its G-metric."""
    chain = limit_chain(trace, x, carrier)  # checks the premises
    g = _derived(carrier, "G_GP" if carrier.kind == "gp" else "G_p")
    chain_rows = _chain_families(trace, x, carrier)
    g_rows = _g_limit_families(trace, x, g)
    run_chain = lambda eps: _residual_certificate(  # noqa: E731
        chain.kind, x, trace.with_epsilon(eps), chain_rows)
    run_g = lambda eps: _residual_certificate("g", x, trace.with_epsilon(eps), g_rows)  # noqa: E731
    eps = trace.epsilon
    dis = _check_link("chain", run_chain, "G-limit", run_g, eps, LIMIT_LINK)
    return LimitEquivalenceReport(run_chain(eps), run_g(eps), dis)


# ---------------------------------------------------------------------------
# balls and continuity
# ---------------------------------------------------------------------------

def _ball_value(carrier: Carrier, x0, y):
    """(distance to the centre, self-value of the centre) for the carrier's ball."""
    if carrier.kind == "partial":
        return carrier(x0, y), carrier(x0, x0)
    if carrier.kind == "gp":
        return carrier(x0, y, y), carrier(x0, x0, x0)
    return carrier(x0, y, y), 0


def ball_membership(x0, eps, y, carrier: Carrier) -> bool:
    if not eps > 0:
        raise ValueError("ball radius must be positive")
    d, self_value = _ball_value(carrier, x0, y)
    return d < self_value + eps


def ball(x0, eps, carrier: Carrier) -> list:
    return [y for y in carrier.universe if ball_membership(x0, eps, y, carrier)]


@dataclass
class ContinuityReport:
    continuous: bool
    checked: int
    deltas: dict
    failures: list  # (x0, eps, y) with y in the smallest ball but f(y) outside


def gp_continuity_check(f: Callable, gp_src: GPMetricCarrier, gp_dst: GPMetricCarrier,
                        eps_grid: Sequence) -> ContinuityReport:
    """Search, for each centre and radius, the finitely many distinct balls for a delta."""
    if not isinstance(gp_src.universe, PointUniverse):
        raise ValueError("continuity checking needs a finite universe")
    deltas, failures, checked = {}, [], 0
    for x0 in gp_src.universe:
        base = gp_src(x0, x0, x0)
        gaps = {y: gp_src(x0, y, y) - base for y in gp_src.universe}
        positive = sorted({g for g in gaps.values() if g > 0})
        candidates = positive + [(positive[-1] if positive else 0) + 1]
        fx0 = f(x0)
        for eps in eps_grid:
            checked += 1
            found = None
            for delta in candidates:
                members = [y for y, g in gaps.items() if g < delta]
                if all(ball_membership(fx0, eps, f(y), gp_dst) for y in members):
                    found = delta
                    break
            if found is None:
                smallest = [y for y, g in gaps.items() if g < candidates[0]]
                bad = next(y for y in smallest if not ball_membership(fx0, eps, f(y), gp_dst))
                failures.append((x0, eps, bad))
            else:
                deltas[(x0, eps)] = found
    return ContinuityReport(not failures, checked, deltas, failures)


@dataclass
class JointContinuityReport:
    limit_value: object
    max_residual: object
    final_residual: object
    epsilon: object
    certified: bool


def joint_continuity_probe(gp: GPMetricCarrier, traces: Sequence[SequenceTrace],
                           limits: Sequence, epsilon=None) -> JointContinuityReport:
    """Tail residual |GP(x_n, y_n, z_n) - GP(x, y, z)| for three convergent traces."""
    if len(traces) != 3 or len(limits) != 3:
        raise ValueError("need exactly three traces and three limits")
    n = len(traces[0])
    if any(len(t) != n for t in traces):
        raise ValueError("traces must have equal length")
    for t, x in zip(traces, limits):
        cert = gp_converges_to(t, x, gp)
        if not cert.certified:
            raise PremiseError(f"trace does not GP-converge to {x!r}: {cert.residuals}")
    eps = traces[0].epsilon if epsilon is None else epsilon
    start = max(t.window_start for t in traces)
    target = gp(*limits)
    residuals = [abs(gp(traces[0].points[i], traces[1].points[i], traces[2].points[i]) - target)
                 for i in range(start - 1, n)]
    worst = max(residuals)
    return JointContinuityReport(target, worst, residuals[-1], eps, worst <= eps)
