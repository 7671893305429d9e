"""JSON table documents for carriers, self-maps and potentials.

A document looks like::

    {"kind": "gp",
     "points": ["0", "1/2", "1"],
     "entries": [{"key": ["0", "0", "0"], "value": 0}, ...],
     "map": [["1", "1/2"], ...],           # optional
     "phi": [{"key": ["1", "1/2"], "value": "3"}, ...]}   # optional

Rational values travel as ``"num/den"`` strings; integers may be plain JSON
numbers.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .core import (
    CARRIER_KINDS, EXACT, Carrier, CarrierError, NumericPolicy, PairPotential,
    PointPotential, PointUniverse, SelfMap, UnknownPointError,
)


class DocumentError(ValueError):
    """Malformed or inconsistent table document."""


def parse_number(raw, policy: NumericPolicy = EXACT):
    if isinstance(raw, bool):
        raise DocumentError(f"not a number: {raw!r}")
    if isinstance(raw, int):
        value = Fraction(raw)
    elif isinstance(raw, float):
        if not math.isfinite(raw):
            raise DocumentError(f"non-finite value {raw!r}")
        value = Fraction(repr(raw)) if policy.exact else raw
    elif isinstance(raw, str):
        try:
            value = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            if policy.exact:
                raise DocumentError(f"rational required in exact mode, got {raw!r}") from None
            try:
                value = float(raw)
            except ValueError:
                raise DocumentError(f"not a number: {raw!r}") from None
    else:
        raise DocumentError(f"not a number: {raw!r}")
    return value if policy.exact else float(value)


def format_number(value):
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return float(value)


def format_point(p) -> str:
    return p if isinstance(p, str) else str(p)


def read_document(source: Union[str, Path, Mapping]) -> dict:
    if isinstance(source, Mapping):
        return dict(source)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {source}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise DocumentError(f"{source}: top level must be an object")
    return doc


def _universe(doc: Mapping) -> PointUniverse:
    points = doc.get("points")
    if not isinstance(points, list) or not points or not all(isinstance(p, str) for p in points):
        raise DocumentError("'points' must be a non-empty list of strings")
    try:
        return PointUniverse(points)
    except CarrierError as exc:
        raise DocumentError(str(exc)) from None


def load_carrier(document, policy: NumericPolicy = EXACT) -> Carrier:
    doc = read_document(document)
    kind = doc.get("kind")
    if kind not in CARRIER_KINDS:
        raise DocumentError(f"'kind' must be one of {sorted(CARRIER_KINDS)}, got {kind!r}")
    cls = CARRIER_KINDS[kind]
    universe = _universe(doc)
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise DocumentError("'entries' must be a list")
    table = {}
    for entry in entries:
        if not isinstance(entry, dict) or "key" not in entry or "value" not in entry:
            raise DocumentError(f"malformed entry {entry!r}")
        key = entry["key"]
        if not isinstance(key, list) or len(key) != cls.arity:
            raise DocumentError(f"entry key {key!r} must list {cls.arity} points")
        value = parse_number(entry["value"], policy)
        if value < 0:
            raise DocumentError(f"negative value {entry['value']!r} at {key!r}")
        try:
            ckey = universe.canonical(key)
        except UnknownPointError as exc:
            raise DocumentError(str(exc)) from None
        if ckey in table and table[ckey] != value:
            raise DocumentError(
                f"conflicting symmetric entries for {list(ckey)}: "
                f"{format_number(table[ckey])} vs {format_number(value)}")
        table[ckey] = value
    try:
        return cls(universe, table=table, policy=policy)
    except CarrierError as exc:
        raise DocumentError(str(exc)) from None


def dump_carrier(carrier: Carrier, selfmap: Optional[SelfMap] = None,
                 phi=None) -> dict:
    doc: dict[str, Any] = {
        "kind": carrier.kind,
        "points": [format_point(p) for p in carrier.universe],
        "entries": [
            {"key": [format_point(p) for p in key], "value": format_number(v)}
            for key, v in carrier.items()
        ],
    }
    if selfmap is not None:
        doc["map"] = dump_map(selfmap)
    if phi is not None:
        doc["phi"] = dump_potential(phi, carrier.universe)
    return doc


def dump_map(selfmap: SelfMap) -> list:
    return [[format_point(x), format_point(y)] for x, y in selfmap.as_table().items()]


def dump_potential(phi, universe: PointUniverse) -> list:
    if isinstance(phi, PairPotential):
        keys = [(x, y) for x in universe for y in universe]
        rows = []
        for x, y in keys:
            try:
                v = phi(x, y)
            except UnknownPointError:
                continue
            rows.append({"key": [format_point(x), format_point(y)], "value": format_number(v)})
        return rows
    return [{"key": [format_point(x)], "value": format_number(phi(x))} for x in universe]


def _resolve(universe: PointUniverse, name):
    if name in universe:
        return name
    raise DocumentError(f"unknown point {name!r}")


def load_map(document, universe: PointUniverse) -> SelfMap:
    doc = read_document(document)
    pairs = doc.get("map")
    if not isinstance(pairs, list):
        raise DocumentError("document has no 'map' list")
    table = {}
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"map entry {pair!r} must be [from, to]")
        x, y = (_resolve(universe, p) for p in pair)
        if x in table and table[x] != y:
            raise DocumentError(f"map sends {x!r} to both {table[x]!r} and {y!r}")
        table[x] = y
    try:
        return SelfMap(universe, table)
    except CarrierError as exc:
        raise DocumentError(str(exc)) from None


def parse_inline_map(text: str, universe: PointUniverse) -> SelfMap:
    """Parse ``"a->b,b->b"`` into a self-map."""
    table = {}
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        if "->" not in chunk:
            raise DocumentError(f"inline map entry {chunk!r} must look like x->y")
        x, y = (s.strip() for s in chunk.split("->", 1))
        table[_resolve(universe, x)] = _resolve(universe, y)
    try:
        return SelfMap(universe, table)
    except CarrierError as exc:
        raise DocumentError(str(exc)) from None


def load_potential(document, universe: PointUniverse, policy: NumericPolicy = EXACT):
    """A :class:`PointPotential` or :class:`PairPotential`, by key length."""
    doc = read_document(document)
    rows = doc.get("phi")
    if not isinstance(rows, list) or not rows:
        raise DocumentError("document has no 'phi' list")
    arity = None
    table = {}
    for row in rows:
        if not isinstance(row, dict) or not isinstance(row.get("key"), list):
            raise DocumentError(f"malformed phi entry {row!r}")
        key = [_resolve(universe, p) for p in row["key"]]
        if arity is None:
            arity = len(key)
        if len(key) != arity or arity not in (1, 2):
            raise DocumentError("phi keys must all have one point or all have two")
        value = parse_number(row["value"], policy)
        if value < 0:
            raise DocumentError(f"negative potential at {key!r}")
        table[key[0] if arity == 1 else tuple(key)] = value
    cls = PointPotential if arity == 1 else PairPotential
    return cls(table, policy)
