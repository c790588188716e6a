"""Conversion of results to deterministic JSON and CSV text."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .surd import ctx

DIGITS = 20


def fmt(x, model=None):
    """A JSON-ready copy of ``x``; model objects become their canonical strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ctx.mpf) or type(x).__name__ == "mpf":
        return ctx.nstr(x, DIGITS)
    if model is not None:
        if model.is_boundary(x):
            return model.format_boundary(x)
        if model.is_element(x):
            return model.format_element(x)
        if model.is_point(x):
            return model.format_point(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): fmt(v, model) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [fmt(v, model) for v in x]
        if isinstance(x, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return str(x)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def csv_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = sorted({k for r in rows for k in r})
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v
