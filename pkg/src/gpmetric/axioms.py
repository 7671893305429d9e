"""Axiom validators for partial metrics, G-metrics and GP-metrics.

Finite universes are scanned exhaustively in lexicographic order of point
positions and the first violating tuple is reported. Passing ``samples``
switches to seeded random tuples instead, and the report records that only
"no counterexample in N samples" was established.

Symmetry axioms (pair symmetry, (G4), (GP2)) hold by canonical storage and are
reported as such rather than scanned.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Optional

from .core import Carrier, GMetricCarrier, GPMetricCarrier, PartialMetricCarrier


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    relation: str = ""
    witness: Optional[tuple] = None
    lhs: Any = None
    rhs: Any = None
    by_construction: bool = False


@dataclass
class ValidationReport:
    structure: str
    results: dict = field(default_factory=dict)
    exhaustive: bool = True
    sample_count: Optional[int] = None
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    @property
    def failures(self) -> list:
        return [r for r in self.results.values() if not r.passed]

    def status(self, axiom: str) -> bool:
        return self.results[axiom].passed

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "fail"
        return "valid" if self.exhaustive else "no-counterexample"

    def summary(self) -> str:
        lines = [f"{self.structure}: {self.verdict}"
                 + ("" if self.exhaustive else f" ({self.sample_count} samples, seed {self.seed})")]
        for r in self.results.values():
            if r.by_construction:
                lines.append(f"  {r.axiom}: pass (by construction)")
            elif r.passed:
                lines.append(f"  {r.axiom}: pass")
            else:
                lines.append(f"  {r.axiom}: FAIL at {r.witness}: {r.relation} "
                             f"has lhs={r.lhs} rhs={r.rhs}")
        return "\n".join(lines)


# An axiom check takes an index tuple and returns None when it holds, or the
# (lhs, rhs) pair of the violated relation.
Check = Callable[[tuple], Optional[tuple]]


class _Scanner:
    def __init__(self, carrier: Carrier, samples: Optional[int], seed: int):
        self.points = carrier.universe.points
        self.n = len(self.points)
        self.samples = samples
        self.seed = seed
        self._carrier = carrier
        self._cache = {}

    def value(self, *idx):
        key = tuple(sorted(idx))
        try:
            return self._cache[key]
        except KeyError:
            v = self._cache[key] = self._carrier(*(self.points[i] for i in key))
            return v

    def tuples(self, arity: int, salt: str):
        if self.samples is None:
            return product(range(self.n), repeat=arity)
        rng = random.Random(f"{self.seed}:{salt}")
        return (tuple(rng.randrange(self.n) for _ in range(arity)) for _ in range(self.samples))

    def run(self, name: str, relation: str, arity: int, check: Check) -> AxiomResult:
        for idx in self.tuples(arity, name):
            bad = check(idx)
            if bad is not None:
                lhs, rhs = bad
                return AxiomResult(name, False, relation,
                                   tuple(self.points[i] for i in idx), lhs, rhs)
        return AxiomResult(name, True, relation)

    def report(self, structure: str) -> ValidationReport:
        return ValidationReport(structure, {}, exhaustive=self.samples is None,
                                sample_count=self.samples,
                                seed=None if self.samples is None else self.seed)


def _by_construction(name: str, relation: str) -> AxiomResult:
    return AxiomResult(name, True, relation, by_construction=True)


def validate_partial(carrier: PartialMetricCarrier, samples: Optional[int] = None,
                     seed: int = 0) -> ValidationReport:
    pol = carrier.policy
    s = _Scanner(carrier, samples, seed)
    p = s.value

    def p1(t):
        x, y = t
        if x != y and pol.eq(p(x, x), p(x, y)) and pol.eq(p(x, y), p(y, y)):
            return p(x, y), (p(x, x), p(y, y))

    def p2(t):
        x, y = t
        if not pol.le(p(x, x), p(x, y)):
            return p(x, x), p(x, y)

    def p4(t):
        x, y, z = t
        rhs = p(x, y) + p(y, z) - p(y, y)
        if not pol.le(p(x, z), rhs):
            return p(x, z), rhs

    rep = s.report("partial")
    rep.results["P1"] = s.run("P1", "x=y if p(x,x)=p(x,y)=p(y,y)", 2, p1)
    rep.results["P2"] = s.run("P2", "p(x,x) <= p(x,y)", 2, p2)
    rep.results["P3"] = _by_construction("P3", "p(x,y) = p(y,x)")
    rep.results["P4"] = s.run("P4", "p(x,z) <= p(x,y) + p(y,z) - p(y,y)", 3, p4)
    return rep


def validate_g(carrier: GMetricCarrier, samples: Optional[int] = None,
               seed: int = 0) -> ValidationReport:
    pol = carrier.policy
    s = _Scanner(carrier, samples, seed)
    G = s.value

    def g1(t):
        (x,) = t
        if not pol.is_zero(G(x, x, x)):
            return G(x, x, x), 0

    def g2(t):
        x, y = t
        if x != y and not pol.lt(0, G(x, x, y)):
            return G(x, x, y), 0

    def g3(t):
        x, y, z = t
        if z != y and not pol.le(G(x, x, y), G(x, y, z)):
            return G(x, x, y), G(x, y, z)

    def g5(t):
        x, y, z, a = t
        rhs = G(x, a, a) + G(a, y, z)
        if not pol.le(G(x, y, z), rhs):
            return G(x, y, z), rhs

    rep = s.report("g")
    rep.results["G1"] = s.run("G1", "G(x,x,x) = 0", 1, g1)
    rep.results["G2"] = s.run("G2", "G(x,x,y) > 0 for x != y", 2, g2)
    rep.results["G3"] = s.run("G3", "G(x,x,y) <= G(x,y,z) for z != y", 3, g3)
    rep.results["G4"] = _by_construction("G4", "G symmetric in all three variables")
    rep.results["G5"] = s.run("G5", "G(x,y,z) <= G(x,a,a) + G(a,y,z)", 4, g5)
    return rep


def validate_g_symmetry(carrier: GMetricCarrier, samples: Optional[int] = None,
                        seed: int = 0) -> ValidationReport:
    pol = carrier.policy
    s = _Scanner(carrier, samples, seed)
    G = s.value

    def sym(t):
        x, y = t
        if not pol.eq(G(x, y, y), G(y, x, x)):
            return G(x, y, y), G(y, x, x)

    rep = s.report("g-symmetry")
    rep.results["symmetric"] = s.run("symmetric", "G(x,y,y) = G(y,x,x)", 2, sym)
    return rep


def validate_gp(carrier: GPMetricCarrier, samples: Optional[int] = None,
                seed: int = 0) -> ValidationReport:
    pol = carrier.policy
    s = _Scanner(carrier, samples, seed)
    GP = s.value

    def gp1(t):
        x, y, z = t
        xxx, xxy, xyz = GP(x, x, x), GP(x, x, y), GP(x, y, z)
        if not pol.le(0, xxx):
            return 0, xxx
        if not pol.le(xxx, xxy):
            return xxx, xxy
        if not pol.le(xxy, xyz):
            return xxy, xyz

    def gp3(t):
        x, y, z, a = t
        rhs = GP(x, a, a) + GP(a, y, z) - GP(a, a, a)
        if not pol.le(GP(x, y, z), rhs):
            return GP(x, y, z), rhs

    def gp4(t):
        x, y, z = t
        if x == y == z:
            return None
        v = GP(x, y, z)
        if pol.eq(v, GP(x, x, x)) and pol.eq(v, GP(y, y, y)) and pol.eq(v, GP(z, z, z)):
            return v, (GP(x, x, x), GP(y, y, y), GP(z, z, z))

    def positivity(t):
        x, y = t
        if x != y and not pol.lt(0, GP(x, x, y)):
            return GP(x, x, y), 0

    rep = s.report("gp")
    rep.results["GP1"] = s.run("GP1", "0 <= GP(x,x,x) <= GP(x,x,y) <= GP(x,y,z)", 3, gp1)
    rep.results["GP2"] = _by_construction("GP2", "GP symmetric in all three variables")
    rep.results["GP3"] = s.run(
        "GP3", "GP(x,y,z) <= GP(x,a,a) + GP(a,y,z) - GP(a,a,a)", 4, gp3)
    rep.results["GP4"] = s.run(
        "GP4", "x=y=z if GP(x,y,z)=GP(x,x,x)=GP(y,y,y)=GP(z,z,z)", 3, gp4)
    rep.results["positivity"] = s.run("positivity", "GP(x,x,y) > 0 for x != y", 2, positivity)
    return rep


VALIDATORS = {"partial": validate_partial, "g": validate_g, "gp": validate_gp}


def validate(carrier: Carrier, samples: Optional[int] = None, seed: int = 0) -> ValidationReport:
    return VALIDATORS[carrier.kind](carrier, samples=samples, seed=seed)
