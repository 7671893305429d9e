"""Brute-force axiom verdicts, written independently of :mod:`gpmetric.axioms`.

These functions evaluate each axiom as a plain quantified formula over every
ordered tuple, calling the distance function directly, with no canonical
index cache and no witness search. They exist to cross-check the validators.
Symmetry is checked literally over all permutations here, since a raw
function need not be symmetric.
"""
from __future__ import annotations

from itertools import permutations, product
from typing import Callable, Sequence


def _cmp(tol):
    def le(a, b):
        return a <= b + tol

    def lt(a, b):
        return a < b - tol

    def eq(a, b):
        return abs(a - b) <= tol

    return le, lt, eq


def partial_axioms(points: Sequence, p: Callable, tol=0) -> dict:
    le, lt, eq = _cmp(tol)
    X = list(points)
    return {
        "P1": all(x == y or not (eq(p(x, x), p(x, y)) and eq(p(x, y), p(y, y)))
                  for x, y in product(X, X)),
        "P2": all(le(p(x, x), p(x, y)) for x, y in product(X, X)),
        "P3": all(eq(p(x, y), p(y, x)) for x, y in product(X, X)),
        "P4": all(le(p(x, z), p(x, y) + p(y, z) - p(y, y)) for x, y, z in product(X, X, X)),
    }


def g_axioms(points: Sequence, G: Callable, tol=0) -> dict:
    le, lt, eq = _cmp(tol)
    X = list(points)
    return {
        "G1": all(eq(G(x, x, x), 0) for x in X),
        "G2": all(x == y or lt(0, G(x, x, y)) for x, y in product(X, X)),
        "G3": all(z == y or le(G(x, x, y), G(x, y, z)) for x, y, z in product(X, X, X)),
        "G4": all(eq(G(*t), G(*s)) for t in product(X, X, X) for s in permutations(t)),
        "G5": all(le(G(x, y, z), G(x, a, a) + G(a, y, z))
                  for x, y, z, a in product(X, X, X, X)),
    }


def g_symmetric(points: Sequence, G: Callable, tol=0) -> bool:
    _, _, eq = _cmp(tol)
    return all(eq(G(x, y, y), G(y, x, x)) for x, y in product(points, points))


def gp_axioms(points: Sequence, GP: Callable, tol=0) -> dict:
    le, lt, eq = _cmp(tol)
    X = list(points)
    return {
        "GP1": all(le(0, GP(x, x, x)) and le(GP(x, x, x), GP(x, x, y))
                   and le(GP(x, x, y), GP(x, y, z)) for x, y, z in product(X, X, X)),
        "GP2": all(eq(GP(*t), GP(*s)) for t in product(X, X, X) for s in permutations(t)),
        "GP3": all(le(GP(x, y, z), GP(x, a, a) + GP(a, y, z) - GP(a, a, a))
                   for x, y, z, a in product(X, X, X, X)),
        "GP4": all((x == y == z)
                   or not (eq(GP(x, y, z), GP(x, x, x)) and eq(GP(x, y, z), GP(y, y, y))
                           and eq(GP(x, y, z), GP(z, z, z)))
                   for x, y, z in product(X, X, X)),
        "positivity": all(x == y or lt(0, GP(x, x, y)) for x, y in product(X, X)),
    }


ORACLES = {"partial": partial_axioms, "g": g_axioms, "gp": gp_axioms}


def oracle_verdicts(carrier) -> dict:
    tol = 0 if carrier.policy.exact else carrier.policy.tolerance
    return ORACLES[carrier.kind](carrier.universe.points, carrier, tol)
