"""Seeded instance generators shared by the unit and acceptance suites."""
from __future__ import annotations

import random
from fractions import Fraction

from gpmetric import (
    ContractionGauge, PairPotential, PointUniverse, SelfMap, SequenceTrace,
    check_weak_g_contraction,
)
from gpmetric.spaces import (
    WordUniverse, baire_g, dyadic_grid, max_combination_g, max_gp, mutate_entry,
    linear_pair_potential, point_names, random_gp, random_metric, random_partial,
    random_raw_table, random_weights, rational_grid, scaled_map, weighted_gp,
)
from gpmetric.transforms import gp_to_g, partial_to_g

CORPUS_SIZE = 200


def partial_corpus(count: int = CORPUS_SIZE, base: int = 0):
    """Valid partial tables, n in 1..8, cycling through parameter shapes."""
    out = []
    for i in range(count):
        seed = base + i
        n = 1 + seed % 8
        shape = seed % 4
        if shape == 0:
            out.append(random_partial(seed, n))
        elif shape == 1:
            out.append(random_partial(seed, n, weight_max=0))  # plain metric
        elif shape == 2:
            out.append(random_partial(seed, n, weight_max=8, metric_max=0))  # weights only
        else:
            out.append(random_partial(seed, n, weight_max=3, metric_max=6, dim=3))
    return out


def gp_corpus(count: int = CORPUS_SIZE, base: int = 0):
    out = []
    for i in range(count):
        seed = base + i
        n = 1 + seed % 8
        shape = seed % 4
        if shape == 0:
            out.append(random_gp(seed, n))
        elif shape == 1:
            out.append(random_gp(seed, n, weight_max=0))
        elif shape == 2:
            out.append(random_gp(seed, n, weight_max=8, metric_max=0))
        else:
            out.append(random_gp(seed, n, weight_max=3, metric_max=6, dim=3))
    return out


def valid_table(kind: str, seed: int, n: int):
    """A table-backed valid carrier of the given kind."""
    if kind == "partial":
        return random_partial(seed, n)
    if kind == "gp":
        return random_gp(seed, n)
    rng = random.Random(seed)
    route = rng.randrange(3)
    if route == 0:
        return partial_to_g(random_partial(seed, n), validate=False).materialize()
    if route == 1:
        return gp_to_g(random_gp(seed, n), validate=False).materialize()
    values = rng.sample(range(0, 12), n)
    return max_combination_g(rational_grid(values)).materialize()


def mixed_tables(kind: str, count: int, seed: int = 0):
    """Valid tables, single-entry mutations of valid tables, and raw tables."""
    rng = random.Random(f"mixed:{kind}:{seed}")
    out = []
    for i in range(count):
        n = rng.randint(1, 5)
        roll = i % 3
        if roll == 0:
            out.append(valid_table(kind, rng.randrange(10 ** 6), n))
        elif roll == 1:
            base = valid_table(kind, rng.randrange(10 ** 6), n)
            out.append(mutate_entry(base, rng)[0])
        else:
            out.append(random_raw_table(rng.randrange(10 ** 6), kind, n))
    return out


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

TRACE_KINDS = ("constant", "reciprocal", "alternating", "random-walk")
EPSILONS = (Fraction(1, 1000), Fraction(1, 100), Fraction(1, 10), Fraction(1, 2), Fraction(2))


def _grid_trace(kind: str, pts: list, rng: random.Random, length: int):
    """pts sorted ascending; pts[0] is the bottom of the grid."""
    if kind == "constant":
        return [rng.choice(pts)] * length
    if kind == "reciprocal":
        # Decreasing to the bottom, with repetition so the tail settles at varying depth.
        r = rng.randint(1, 3)
        ladder = list(reversed(pts))
        return [ladder[min(k // r, len(ladder) - 1)] for k in range(length)]
    if kind == "alternating":
        a, b = rng.sample(pts, 2) if len(pts) > 1 else (pts[0], pts[0])
        return [a if k % 2 == 0 else b for k in range(length)]
    target = rng.choice(pts)
    out = []
    for k in range(length):
        radius = Fraction(4, 2 ** k) if k < 60 else Fraction(0)
        near = [p for p in pts if abs(p - target) <= radius]
        out.append(rng.choice(near))
    return out


def _table_trace(kind: str, pts: list, rng: random.Random, length: int):
    if kind == "constant":
        return [rng.choice(pts)] * length
    if kind == "reciprocal":
        # Wanders through a shrinking prefix and then sits at its limit.
        limit = rng.choice(pts)
        settle = rng.randint(0, length)
        return [rng.choice(pts) if k < settle else limit for k in range(length)]
    if kind == "alternating":
        a, b = rng.sample(pts, 2) if len(pts) > 1 else (pts[0], pts[0])
        return [a if k % 2 == 0 else b for k in range(length)]
    target = rng.choice(pts)
    return [rng.choice(pts) if rng.random() < 2.0 ** -(k / 3) else target for k in range(length)]


def trace_corpus(universe: PointUniverse, count: int, seed: int = 0):
    """(trace, candidate limit) pairs, cycling through the four trace kinds."""
    rng = random.Random(f"traces:{seed}")
    numeric = all(isinstance(p, Fraction) for p in universe)
    pts = sorted(universe) if numeric else list(universe)
    out = []
    for i in range(count):
        kind = TRACE_KINDS[i % len(TRACE_KINDS)]
        length = rng.randint(8, 40)
        make = _grid_trace if numeric else _table_trace
        points = make(kind, pts, rng, length)
        window = rng.randint(1, length)
        eps = rng.choice(EPSILONS)
        out.append((kind, SequenceTrace(points, window, eps), points[-1]))
    return out


# ---------------------------------------------------------------------------
# fixed-point instances
# ---------------------------------------------------------------------------

def baire_shift_instance(seed: int):
    """Baire G on words with T(w) = c + sigma(w)[:-1]; the gauge factor is at most 1/2.

    Shifting right and prepending a constant symbol halves every pairwise
    Baire term (or sends it to 0), so G(Tx, T^2x, Ty) <= G(x, Tx, y) / 2.
    """
    rng = random.Random(f"baire:{seed}")
    alphabet = "abc"[: rng.randint(2, 3)]
    length = rng.randint(2, 3)
    U = WordUniverse(alphabet, length)
    head = rng.choice(alphabet)
    perms = [dict(zip(alphabet, rng.sample(alphabet, len(alphabet)))) for _ in range(length)]

    def T(w):
        return head + "".join(perms[i][c] for i, c in enumerate(w[:-1]))

    gauge = ContractionGauge.linear(rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]))
    return baire_g(U), SelfMap(U, T), gauge


def grid_contraction_instance(seed: int):
    """Max-combination G on a random rational grid with 0 and T(x) = grid floor of x/k."""
    rng = random.Random(f"grid:{seed}")
    k = rng.choice([3, 4, 5])
    top = rng.randint(2, 6)
    pts = {Fraction(0)} | {Fraction(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(top)}
    pts |= {p / k for p in list(pts)} | {p / k ** 2 for p in list(pts)}
    U = rational_grid(sorted(pts))
    ordered = sorted(U)

    def T(x):
        y = x / k
        return max(p for p in ordered if p <= y)

    return max_combination_g(U).materialize(), SelfMap(U, T), ContractionGauge.linear(Fraction(1, 4))


def contraction_corpus(count: int = 50):
    """The first ``count`` seeded instances whose weak-contraction check passes."""
    out, seed = [], 0
    while len(out) < count:
        make = baire_shift_instance if seed % 2 == 0 else grid_contraction_instance
        g, T, gauge = make(seed)
        if check_weak_g_contraction(g, T, gauge).passed:
            out.append((seed, g, T, gauge))
        seed += 1
        if seed > 50 * count:
            raise RuntimeError("contraction generator yield too low")
    return out


def caristi_instance(seed: int):
    """A random GP table, a rooted self-map and a pair potential built to satisfy
    GP(x, Tx, T^2x) <= phi(x, Tx) - phi(Tx, T^2x).

    Roots carry weight 0 so GP(z, z, z) = 0 at every fixed point. Along the
    forest phi(x, Tx) is defined from the root upward as phi(Tx, T^2x) plus
    GP(x, Tx, T^2x) plus a random slack; other pair values are random.
    """
    rng = random.Random(f"caristi:{seed}")
    n = rng.randint(2, 8)
    names = point_names(n)
    order = rng.sample(names, n)
    roots = order[: rng.randint(1, min(2, n))]
    parent = {r: r for r in roots}
    for i, x in enumerate(order):
        if x not in parent:
            parent[x] = rng.choice(order[:i])
    weights = random_weights(rng, names, 4)
    for r in roots:
        weights[r] = Fraction(0)
    metric = random_metric(rng, names, 5)
    U = PointUniverse(names)
    gp = weighted_gp(U, weights, metric)
    T = SelfMap(U, parent)

    psi = {}
    for x in order:  # parents come first in ``order``
        if parent[x] == x:
            psi[x] = Fraction(rng.randint(0, 6), 2)
        else:
            tx = parent[x]
            psi[x] = psi[tx] + gp(x, tx, parent[tx]) + Fraction(rng.randint(0, 4), 2)
    table = {(x, y): Fraction(rng.randint(0, 40), 2) for x in names for y in names}
    for x in names:
        table[(x, parent[x])] = psi[x]
    return gp, T, PairPotential(table)


def halving_example(depth: int = 20):
    U = dyadic_grid(depth)
    return max_gp(U), scaled_map(U, Fraction(1, 2)), linear_pair_potential(2)


__all__ = [
    "CORPUS_SIZE", "partial_corpus", "gp_corpus", "mixed_tables", "valid_table",
    "trace_corpus", "TRACE_KINDS", "contraction_corpus", "baire_shift_instance",
    "grid_contraction_instance", "caristi_instance", "halving_example",
]
