"""Point universes, the three distance carriers, and the shared value types.

Carriers store values under a canonical key (points sorted by their position
in the universe), so pair symmetry and full triple permutation symmetry hold
by construction. Every other axiom is left to :mod:`gpmetric.axioms`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Rational
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

Point = Hashable
Value = Any  # Fraction in exact mode, float in floating mode


class UnknownPointError(LookupError):
    """A point identifier that is not part of the universe."""


class CarrierError(ValueError):
    """A carrier (or map/potential) whose stored data breaks its contract."""


# ---------------------------------------------------------------------------
# numeric policy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericPolicy:
    """Comparison rules for carrier values.

    In ``exact`` mode values are :class:`~fractions.Fraction` and comparisons
    are exact. In ``floating`` mode values are floats; non-strict inequalities
    get ``tolerance`` of slack and strict ones must hold beyond it.
    """

    mode: str = "exact"
    tolerance: float = 0.0

    def __post_init__(self):
        if self.mode not in ("exact", "floating"):
            raise ValueError(f"unknown numeric mode {self.mode!r}")
        if self.mode == "floating" and not self.tolerance > 0:
            raise ValueError("floating mode needs a positive tolerance")
        if self.mode == "exact" and self.tolerance != 0:
            raise ValueError("exact mode takes no tolerance")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def coerce(self, value) -> Value:
        if isinstance(value, bool):
            raise TypeError("booleans are not distances")
        if self.exact:
            if isinstance(value, Rational):
                return Fraction(value)
            raise CarrierError(f"rational value required in exact mode, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise CarrierError(f"non-finite value {value!r}")
        return value

    def le(self, a, b) -> bool:
        return a <= b if self.exact else a <= b + self.tolerance

    def lt(self, a, b) -> bool:
        return a < b if self.exact else a < b - self.tolerance

    def eq(self, a, b) -> bool:
        return a == b if self.exact else abs(a - b) <= self.tolerance

    def is_zero(self, a) -> bool:
        return self.eq(a, 0)


EXACT = NumericPolicy()


def floating(tolerance: float = 1e-9) -> NumericPolicy:
    return NumericPolicy("floating", tolerance)


# ---------------------------------------------------------------------------
# universes
# ---------------------------------------------------------------------------

class PointUniverse:
    """A finite ordered set of point identifiers.

    ``kind`` is ``"finite-table"`` for abstract point sets or
    ``"sampled-continuum"`` for an explicit sample grid of an interval; in the
    latter case ``interval`` records the (lo, hi) ends (``hi`` may be ``None``
    for an unbounded interval).
    """

    KINDS = ("finite-table", "sampled-continuum")

    def __init__(self, points: Iterable[Point], kind: str = "finite-table",
                 interval: Optional[tuple] = None):
        pts = tuple(points)
        if not pts:
            raise CarrierError("a universe needs at least one point")
        index = {}
        for i, p in enumerate(pts):
            if p in index:
                raise CarrierError(f"duplicate point identifier {p!r}")
            index[p] = i
        if kind not in self.KINDS:
            raise CarrierError(f"unknown universe kind {kind!r}")
        self.points = pts
        self.kind = kind
        self.interval = interval
        self._index = index

    @classmethod
    def grid(cls, values: Iterable, interval: Optional[tuple] = None) -> "PointUniverse":
        """A sampled-continuum universe on ``values`` (sorted ascending)."""
        return cls(sorted(values), kind="sampled-continuum", interval=interval)

    def index(self, p: Point) -> int:
        try:
            return self._index[p]
        except (KeyError, TypeError):
            raise UnknownPointError(f"unknown point {p!r}") from None

    def __contains__(self, p) -> bool:
        try:
            return p in self._index
        except TypeError:
            return False

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointUniverse) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointUniverse({len(self.points)} points, {self.kind})"

    def canonical(self, pts: Sequence[Point]) -> tuple:
        return tuple(sorted(pts, key=self.index))

    def multisets(self, size: int) -> Iterator[tuple]:
        """All canonical keys of ``size`` points, in lexicographic index order."""
        return combinations_with_replacement(self.points, size)


# ---------------------------------------------------------------------------
# carriers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformRecord:
    source_kind: str
    target_kind: str
    formula: str
    source: Any = field(repr=False, compare=False, default=None)


class Carrier:
    """A symmetric distance over a finite universe, table- or rule-backed.

    Subclasses fix ``arity`` (2 for pairs, 3 for triples) and ``kind``. A rule
    is always called with its arguments in canonical order, so it only has to
    be correct on sorted keys.
    """

    arity = 0
    kind = ""

    def __init__(self, universe: PointUniverse, table: Optional[Mapping] = None,
                 rule: Optional[Callable] = None, policy: NumericPolicy = EXACT,
                 provenance: Optional[TransformRecord] = None):
        if (table is None) == (rule is None):
            raise CarrierError("give exactly one of table or rule")
        self.universe = universe
        self.policy = policy
        self.provenance = provenance
        self._rule = rule
        self._table = None
        if table is not None:
            self._table = self._canonical_table(table)

    def _canonical_table(self, table: Mapping) -> dict:
        out = {}
        for key, value in table.items():
            key = tuple(key) if isinstance(key, (tuple, list)) else (key,)
            if len(key) != self.arity:
                raise CarrierError(f"key {key!r} does not have {self.arity} points")
            ckey = self.universe.canonical(key)
            value = self._checked(value)
            if ckey in out and out[ckey] != value:
                raise CarrierError(
                    f"conflicting symmetric entries for {ckey!r}: {out[ckey]} vs {value}")
            out[ckey] = value
        for ckey in self.universe.multisets(self.arity):
            if ckey not in out:
                raise CarrierError(f"missing entry for {ckey!r}")
        return out

    def _checked(self, value) -> Value:
        value = self.policy.coerce(value)
        if value < 0:
            raise CarrierError(f"negative value {value}")
        return value

    @property
    def is_table(self) -> bool:
        return self._table is not None

    def __call__(self, *pts: Point) -> Value:
        if len(pts) != self.arity:
            raise TypeError(f"{self.kind} carrier takes {self.arity} points, got {len(pts)}")
        key = self.universe.canonical(pts)
        if self._table is not None:
            return self._table[key]
        return self._checked(self._rule(*key))

    def items(self) -> Iterator[tuple[tuple, Value]]:
        """Canonical (key, value) pairs in lexicographic order."""
        for key in self.universe.multisets(self.arity):
            yield key, self(*key)

    def materialize(self) -> "Carrier":
        if self.is_table:
            return self
        return type(self)(self.universe, table=dict(self.items()), policy=self.policy,
                          provenance=self.provenance)

    def with_entry(self, key: Sequence[Point], value) -> "Carrier":
        """A table-backed copy with the entry at ``key`` replaced."""
        table = dict(self.materialize()._table)
        table[self.universe.canonical(key)] = self._checked(value)
        return type(self)(self.universe, table=table, policy=self.policy)

    def __repr__(self):
        backing = "table" if self.is_table else "rule"
        return f"{type(self).__name__}({len(self.universe)} points, {backing}, {self.policy.mode})"


class PartialMetricCarrier(Carrier):
    """p(x, y) with explicitly stored self-distances p(x, x)."""

    arity = 2
    kind = "partial"


class GMetricCarrier(Carrier):
    arity = 3
    kind = "g"


class GPMetricCarrier(Carrier):
    """GP(x, y, z); self-values GP(x, x, x) need not vanish."""

    arity = 3
    kind = "gp"


CARRIER_KINDS = {cls.kind: cls for cls in (PartialMetricCarrier, GMetricCarrier, GPMetricCarrier)}


def lookup_pair(carrier: PartialMetricCarrier, x: Point, y: Point) -> Value:
    return carrier(x, y)


def lookup_triple(carrier: Carrier, x: Point, y: Point, z: Point) -> Value:
    return carrier(x, y, z)


# ---------------------------------------------------------------------------
# maps, potentials, gauges, traces
# ---------------------------------------------------------------------------

class SelfMap:
    """A total map T: X -> X given as a table or a rule."""

    def __init__(self, universe: PointUniverse, mapping: Mapping | Callable):
        self.universe = universe
        if callable(mapping) and not isinstance(mapping, Mapping):
            self._rule = mapping
            self._table = None
        else:
            table = dict(mapping)
            for x in universe:
                if x not in table:
                    raise CarrierError(f"map is not total: no image for {x!r}")
            for x, y in table.items():
                universe.index(x)
                if y not in universe:
                    raise CarrierError(f"image {y!r} of {x!r} lies outside the universe")
            self._rule = None
            self._table = table

    @property
    def is_table(self) -> bool:
        return self._table is not None

    def __call__(self, x: Point) -> Point:
        self.universe.index(x)
        if self._table is not None:
            return self._table[x]
        y = self._rule(x)
        if y not in self.universe:
            raise CarrierError(f"image {y!r} of {x!r} lies outside the universe")
        return y

    def as_table(self) -> dict:
        return {x: self(x) for x in self.universe}

    def orbit(self, x: Point, steps: int) -> list:
        out = [x]
        for _ in range(steps):
            x = self(x)
            out.append(x)
        return out

    @classmethod
    def identity(cls, universe: PointUniverse) -> "SelfMap":
        return cls(universe, {x: x for x in universe})


class _Potential:
    arity = 0

    def __init__(self, values: Mapping | Callable, policy: NumericPolicy = EXACT):
        self.policy = policy
        if callable(values) and not isinstance(values, Mapping):
            self._rule, self._table = values, None
        else:
            self._rule = None
            self._table = {}
            for key, v in dict(values).items():
                self._table[key] = self._checked(v)

    def _checked(self, v):
        v = self.policy.coerce(v)
        if v < 0:
            raise CarrierError(f"potential takes negative value {v}")
        return v

    @property
    def is_table(self) -> bool:
        return self._table is not None

    def _lookup(self, key):
        if self._table is not None:
            try:
                return self._table[key]
            except KeyError:
                raise UnknownPointError(f"potential undefined at {key!r}") from None
        return self._checked(self._rule(*key) if isinstance(key, tuple) else self._rule(key))


class PointPotential(_Potential):
    """phi: X -> [0, inf)."""

    arity = 1

    def __call__(self, x: Point):
        return self._lookup(x)


class PairPotential(_Potential):
    """phi: X x X -> [0, inf); not assumed symmetric."""

    arity = 2

    def __call__(self, x: Point, y: Point):
        return self._lookup((x, y))


class ContractionGauge:
    """A continuous gauge with gauge(t) = 0 exactly when t = 0."""

    def __init__(self, fn: Callable, name: str = "gauge"):
        if fn(0) != 0:
            raise CarrierError("gauge(0) must be 0")
        self.fn = fn
        self.name = name

    def __call__(self, t):
        return self.fn(t)

    def check_positive(self, samples: Iterable) -> bool:
        return all(self.fn(t) > 0 for t in samples if t > 0)

    @classmethod
    def linear(cls, factor) -> "ContractionGauge":
        factor = Fraction(factor) if isinstance(factor, (Rational, str)) else factor
        if not factor > 0:
            raise CarrierError("linear gauge needs a positive factor")
        return cls(lambda t: factor * t, name=f"t*{factor}")


@dataclass(frozen=True)
class SequenceTrace:
    """A finite prefix x_1..x_N with a 1-based tail window start and tolerance."""

    points: tuple
    window_start: int = 1
    epsilon: Any = 0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not 1 <= self.window_start <= len(self.points):
            raise ValueError(
                f"window start {self.window_start} outside 1..{len(self.points)}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    def __len__(self):
        return len(self.points)

    @property
    def tail(self) -> tuple:
        return self.points[self.window_start - 1:]

    def check_in(self, universe: PointUniverse) -> None:
        for p in self.points:
            universe.index(p)

    def with_epsilon(self, epsilon) -> "SequenceTrace":
        return SequenceTrace(self.points, self.window_start, epsilon)
