"""Constructions between partial metrics, G-metrics and GP-metrics.

Table-backed inputs give table-backed outputs; rule-backed inputs give rules
that evaluate the formula on demand. With ``validate`` on (the default under
``__debug__`` for universes up to ``REVALIDATE_LIMIT`` points) the input is
checked against its axioms first and the output is checked afterwards, so a
broken construction surfaces as :class:`TransformError` instead of a silently
invalid carrier.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .axioms import validate_g, validate_g_symmetry, validate_gp, validate_partial
from .core import (
    Carrier, GMetricCarrier, GPMetricCarrier, PartialMetricCarrier, TransformRecord,
)

REVALIDATE = __debug__
REVALIDATE_LIMIT = 16


class TransformError(ValueError):
    pass


def _should_validate(carrier: Carrier, validate: Optional[bool]) -> bool:
    if validate is not None:
        return validate
    return REVALIDATE and len(carrier.universe) <= REVALIDATE_LIMIT


def _require(report, what: str):
    if not report.passed:
        bad = report.failures[0]
        raise TransformError(f"{what}: {bad.axiom} fails at {bad.witness}")


def _build(cls, source: Carrier, formula, record: TransformRecord) -> Carrier:
    if source.is_table:
        table = {key: formula(*key) for key in source.universe.multisets(cls.arity)}
        return cls(source.universe, table=table, policy=source.policy, provenance=record)
    return cls(source.universe, rule=formula, policy=source.policy, provenance=record)


def partial_to_g(p: PartialMetricCarrier, validate: Optional[bool] = None) -> GMetricCarrier:
    """G_p(x,y,z) = p(x,y) + p(y,z) + p(x,z) - p(x,x) - p(y,y) - p(z,z)."""
    check = _should_validate(p, validate)
    if check:
        _require(validate_partial(p), "input is not a partial metric")

    def g(x, y, z):
        return p(x, y) + p(y, z) + p(x, z) - p(x, x) - p(y, y) - p(z, z)

    out = _build(GMetricCarrier, p, g, TransformRecord("partial", "g", "G_p", p))
    if check:
        _require(validate_g(out), "G_p is not a G-metric")
        _require(validate_g_symmetry(out), "G_p is not symmetric")
    return out


def induced_metric_ps(p: PartialMetricCarrier, validate: Optional[bool] = None) -> PartialMetricCarrier:
    """p^s(x,y) = 2 p(x,y) - p(x,x) - p(y,y), an ordinary metric."""
    check = _should_validate(p, validate)
    if check:
        _require(validate_partial(p), "input is not a partial metric")

    def ps(x, y):
        return 2 * p(x, y) - p(x, x) - p(y, y)

    out = _build(PartialMetricCarrier, p, ps, TransformRecord("partial", "metric", "p^s", p))
    if check:
        _check_metric(out)
    return out


def g_to_metric(g: GMetricCarrier, validate: Optional[bool] = None) -> PartialMetricCarrier:
    """d_G(x,y) = G(x,y,y); only defined for symmetric G."""
    sym = validate_g_symmetry(g)
    if not sym.passed:
        raise TransformError(
            f"d_G needs a symmetric G-metric; G(x,y,y) != G(y,x,x) at {sym.failures[0].witness}")
    check = _should_validate(g, validate)
    if check:
        _require(validate_g(g), "input is not a G-metric")

    def d(x, y):
        return g(x, y, y)

    out = _build(PartialMetricCarrier, g, d, TransformRecord("g", "metric", "d_G", g))
    if check:
        _check_metric(out)
    return out


def gp_to_partial(gp: GPMetricCarrier, validate: Optional[bool] = None) -> PartialMetricCarrier:
    """p_GP(x,y) = GP(x,y,y)."""
    check = _should_validate(gp, validate)
    if check:
        _require(validate_gp(gp), "input is not a GP-metric")

    def p(x, y):
        return gp(x, y, y)

    # A rule is only ever called on canonical keys, which would hide an
    # asymmetric GP(x,y,y) vs GP(y,x,x); the GP validation above rules that out.
    out = _build(PartialMetricCarrier, gp, p, TransformRecord("gp", "partial", "p_GP", gp))
    if check:
        _require(validate_partial(out), "p_GP is not a partial metric")
    return out


def gp_to_g(gp: GPMetricCarrier, validate: Optional[bool] = None) -> GMetricCarrier:
    """G_GP(x,y,z) = GP(x,y,y) + GP(x,z,z) + GP(y,z,z) - GP(x,x,x) - GP(y,y,y) - GP(z,z,z)."""
    check = _should_validate(gp, validate)
    if check:
        _require(validate_gp(gp), "input is not a GP-metric")

    def g(x, y, z):
        return (gp(x, y, y) + gp(x, z, z) + gp(y, z, z)
                - gp(x, x, x) - gp(y, y, y) - gp(z, z, z))

    out = _build(GMetricCarrier, gp, g, TransformRecord("gp", "g", "G_GP", gp))
    if check:
        _require(validate_g(out), "G_GP is not a G-metric")
        _require(validate_g_symmetry(out), "G_GP is not symmetric")
    return out


def _check_metric(d: PartialMetricCarrier):
    _require(validate_partial(d), "output is not a partial metric")
    for x in d.universe:
        if not d.policy.is_zero(d(x, x)):
            raise TransformError(f"output has nonzero self-distance at {x!r}")


@dataclass
class IdentityCheck:
    name: str
    max_discrepancy: object
    worst_key: Optional[tuple]

    @property
    def holds(self) -> bool:
        return self.max_discrepancy == 0

    def within(self, tol) -> bool:
        return self.max_discrepancy <= tol


def _compare(name, keys, lhs, rhs) -> IdentityCheck:
    worst, worst_key = 0, None
    for key in keys:
        diff = abs(lhs(*key) - rhs(*key))
        if diff > worst:
            worst, worst_key = diff, key
    return IdentityCheck(name, worst, worst_key)


def check_identities(carrier: Carrier) -> list[IdentityCheck]:
    """Evaluate the exact consistency identities between the constructions.

    Partial input: d_{G_p} = p^s on all pairs. GP input: G_GP equals G of p_GP
    on all triples, and G_GP(x,y,y) = (p_GP)^s(x,y) on all pairs.
    """
    U = carrier.universe
    pairs = [(x, y) for x in U for y in U]
    if carrier.kind == "partial":
        return [_compare("d_{G_p} = p^s", pairs,
                         g_to_metric(partial_to_g(carrier)), induced_metric_ps(carrier))]
    if carrier.kind == "gp":
        G = gp_to_g(carrier)
        p = gp_to_partial(carrier)
        triples = list(U.multisets(3))
        return [
            _compare("G_GP = G_(p_GP)", triples, G, partial_to_g(p)),
            _compare("G_GP(x,y,y) = (p_GP)^s(x,y)", pairs,
                     lambda x, y: G(x, y, y), induced_metric_ps(p)),
        ]
    raise TransformError(f"no identities are stated for {carrier.kind!r} carriers")
