"""Conversion of report dataclasses to JSON-ready documents."""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .documents import format_number


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)) if not isinstance(k, str) else k: to_jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (Fraction, int, float)):
        return format_number(obj)
    return str(obj)


def dumps(obj, **kwargs) -> str:
    return json.dumps(to_jsonable(obj), **kwargs)
