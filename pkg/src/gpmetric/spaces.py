"""Built-in carriers for the worked examples and seeded random generators.

Generators build tables by constructions whose validity is provable:

* ``p(x,y) = max(w(x), w(y)) + d(x,y)`` is a partial metric for any weights
  w >= 0 and any metric d. (P2) is immediate, (P4) splits into the weight
  part ``max(wx,wz) <= max(wx,wy) + max(wy,wz) - wy`` and the triangle
  inequality of d, and (P1) follows from d(x,y) = 0 only for x = y. With
  d = 0 the weights must be distinct instead.
* ``GP(x,y,z) = max(w(x), w(y), w(z)) + (d(x,y) + d(y,z) + d(x,z)) / 2`` is a
  GP-metric under the same conditions: the half-perimeter dominates each
  side by the triangle inequality, which gives (GP1), and (GP3) again
  splits into a weight part and two triangle inequalities.

Each generated table is still revalidated, with a bounded retry as a guard.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .axioms import validate_gp, validate_partial
from .core import (
    EXACT, CarrierError, GMetricCarrier, GPMetricCarrier, NumericPolicy, PairPotential,
    PartialMetricCarrier, PointPotential, PointUniverse, SelfMap,
)


# ---------------------------------------------------------------------------
# universes
# ---------------------------------------------------------------------------

def dyadic_grid(depth: int) -> PointUniverse:
    """{0} together with 2**-k for k = 0..depth, as exact fractions."""
    pts = [Fraction(0)] + [Fraction(1, 2 ** k) for k in range(depth + 1)]
    return PointUniverse.grid(pts, interval=(Fraction(0), None))


def rational_grid(values: Iterable) -> PointUniverse:
    return PointUniverse.grid((Fraction(v) for v in values), interval=(Fraction(0), None))


class WordUniverse(PointUniverse):
    """Words of a fixed length over a finite alphabet (finite stand-in for S^omega)."""

    def __init__(self, alphabet: Sequence[str], length: int,
                 words: Optional[Iterable[str]] = None):
        alphabet = tuple(alphabet)
        if not alphabet:
            raise CarrierError("alphabet must be non-empty")
        if length < 1:
            raise CarrierError("word length must be positive")
        if words is None:
            words = ("".join(w) for w in product(alphabet, repeat=length))
        words = list(words)
        for w in words:
            if len(w) != length or any(c not in alphabet for c in w):
                raise CarrierError(f"{w!r} is not a length-{length} word over {alphabet}")
        super().__init__(words)
        self.alphabet = alphabet
        self.length = length


def _check_grid(universe: PointUniverse):
    for x in universe:
        if x < 0:
            raise CarrierError(f"negative grid point {x}")


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------

def common_prefix_length(u: str, v: str) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def baire_distance(u: str, v: str) -> Fraction:
    # Equal words sit at distance 0; this is the only reading compatible with G(x,x,x) = 0.
    if u == v:
        return Fraction(0)
    return Fraction(1, 2 ** common_prefix_length(u, v))


def baire_g(universe: WordUniverse, policy: NumericPolicy = EXACT) -> GMetricCarrier:
    def g(x, y, z):
        return max(baire_distance(x, y), baire_distance(y, z), baire_distance(x, z))

    return GMetricCarrier(universe, rule=g, policy=policy)


def max_combination_g(universe: PointUniverse, policy: NumericPolicy = EXACT) -> GMetricCarrier:
    _check_grid(universe)

    def g(x, y, z):
        return max(x, y) + max(x, z) + max(y, z) - x - y - z

    return GMetricCarrier(universe, rule=g, policy=policy)


def max_partial(universe: PointUniverse, policy: NumericPolicy = EXACT) -> PartialMetricCarrier:
    _check_grid(universe)
    return PartialMetricCarrier(universe, rule=lambda x, y: max(x, y), policy=policy)


def max_gp(universe: PointUniverse, policy: NumericPolicy = EXACT) -> GPMetricCarrier:
    _check_grid(universe)
    return GPMetricCarrier(universe, rule=lambda x, y, z: max(x, y, z), policy=policy)


def scaled_map(universe: PointUniverse, factor) -> SelfMap:
    """x -> factor * x, rounded down onto the grid.

    On a dyadic grid with factor 1/2 or 1/4 every image is a grid point except
    below the smallest positive point, where the map clamps to the grid bottom.
    """
    pts = sorted(universe.points)
    factor = Fraction(factor)

    def image(x):
        y = factor * x
        if y in universe:
            return y
        below = [p for p in pts if p <= y]
        return below[-1] if below else pts[0]

    return SelfMap(universe, {x: image(x) for x in universe})


def linear_pair_potential(coef=2, policy: NumericPolicy = EXACT) -> PairPotential:
    """phi(t, s) = coef * (t + s)."""
    coef = Fraction(coef)
    return PairPotential(lambda t, s: coef * (t + s), policy)


def linear_point_potential(coef=2, policy: NumericPolicy = EXACT) -> PointPotential:
    coef = Fraction(coef)
    return PointPotential(lambda t: coef * t, policy)


# ---------------------------------------------------------------------------
# constructions and generators
# ---------------------------------------------------------------------------

def weighted_partial(universe: PointUniverse, weights: Mapping, metric: Callable,
                     policy: NumericPolicy = EXACT) -> PartialMetricCarrier:
    table = {(x, y): max(weights[x], weights[y]) + metric(x, y)
             for x, y in universe.multisets(2)}
    return PartialMetricCarrier(universe, table=table, policy=policy)


def weighted_gp(universe: PointUniverse, weights: Mapping, metric: Callable,
                policy: NumericPolicy = EXACT) -> GPMetricCarrier:
    table = {(x, y, z): max(weights[x], weights[y], weights[z])
             + Fraction(metric(x, y) + metric(y, z) + metric(x, z), 2)
             for x, y, z in universe.multisets(3)}
    return GPMetricCarrier(universe, table=table, policy=policy)


def point_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def random_weights(rng: random.Random, names: Sequence[str], weight_max: int,
                   distinct: bool = False) -> dict:
    """Half-integer weights in [0, weight_max]."""
    choices = [Fraction(k, 2) for k in range(2 * weight_max + 1)]
    if distinct:
        if len(choices) < len(names):
            raise ValueError("weight range too small for distinct weights")
        vals = rng.sample(choices, len(names))
    else:
        vals = [rng.choice(choices) for _ in names]
    return dict(zip(names, vals))


def random_metric(rng: random.Random, names: Sequence[str], metric_max: int,
                  dim: int = 2) -> Callable:
    """L1 distance between distinct random lattice points in [0, metric_max]^dim.

    ``metric_max == 0`` yields the zero pseudometric.
    """
    if metric_max == 0:
        return lambda x, y: Fraction(0)
    if (metric_max + 1) ** dim < len(names):
        raise ValueError("lattice too small for distinct points")
    coords: dict = {}
    used = set()
    for name in names:
        while True:
            c = tuple(rng.randint(0, metric_max) for _ in range(dim))
            if c not in used:
                break
        used.add(c)
        coords[name] = c
    return lambda x, y: Fraction(sum(abs(a - b) for a, b in zip(coords[x], coords[y])))


def random_partial(seed, n: int, weight_max: int = 5, metric_max: int = 4,
                   dim: int = 2, max_tries: int = 20) -> PartialMetricCarrier:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    names = point_names(n)
    universe = PointUniverse(names)
    for _ in range(max_tries):
        w = random_weights(rng, names, weight_max, distinct=metric_max == 0)
        d = random_metric(rng, names, metric_max, dim)
        p = weighted_partial(universe, w, d)
        if validate_partial(p).passed:
            return p
    raise RuntimeError(f"no valid partial metric after {max_tries} tries (seed {seed})")


def random_gp(seed, n: int, weight_max: int = 5, metric_max: int = 4,
              dim: int = 2, max_tries: int = 20) -> GPMetricCarrier:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    names = point_names(n)
    universe = PointUniverse(names)
    for _ in range(max_tries):
        w = random_weights(rng, names, weight_max, distinct=metric_max == 0)
        d = random_metric(rng, names, metric_max, dim)
        gp = weighted_gp(universe, w, d)
        if validate_gp(gp).passed:
            return gp
    raise RuntimeError(f"no valid GP-metric after {max_tries} tries (seed {seed})")


_RAW_KINDS = {"partial": PartialMetricCarrier, "g": GMetricCarrier, "gp": GPMetricCarrier}


def random_raw_table(seed, kind: str, n: int, value_max: int = 6):
    """An unconstrained symmetric table of small nonnegative rationals.

    Mostly invalid; useful as negative input for validators.
    """
    rng = random.Random(seed)
    cls = _RAW_KINDS[kind]
    universe = PointUniverse(point_names(n))
    table = {key: Fraction(rng.randint(0, 2 * value_max), 2)
             for key in universe.multisets(cls.arity)}
    return cls(universe, table=table)


def mutate_entry(carrier, rng: random.Random, value_max: int = 10):
    """Replace one canonical entry with a different random value."""
    keys = list(carrier.universe.multisets(carrier.arity))
    key = rng.choice(keys)
    old = carrier(*key)
    new = old
    while new == old:
        new = Fraction(rng.randint(0, 2 * value_max), 2)
    return carrier.with_entry(key, new), key
