"""JSON wire formats for metric spaces, elements, measures and edge functions.

Numbers travel as exact rational strings ("3", "-3/2", "0.5"); binary
floats are accepted only when their decimal form is exact.  Every emitted
object re-parses to an equal value.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Optional

from .deleeuw import DeLeeuwMeasure, EdgeFunction
from .freespace import FreeElement, from_coeff_map
from .metricspace import FiniteMetricSpace, InvalidMetricError, validate
from .rational import InexactNumberError, format_rational, to_fraction


class FormatError(ValueError):
    """Input file problem, with a JSON-path style context."""

    def __init__(self, context: str, message: str):
        self.context = context
        super().__init__(f"{context}: {message}")


def _rational(value, context: str) -> Fraction:
    try:
        return to_fraction(value)
    except InexactNumberError as exc:
        raise FormatError(context, str(exc)) from None


def _require(obj, key, context, kind=None):
    if not isinstance(obj, dict):
        raise FormatError(context, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise FormatError(context, f"missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(f"{context}.{key}", f"expected {kind.__name__}")
    return value


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(path, str(exc)) from None
    except json.JSONDecodeError as exc:
        raise FormatError(path, f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# ---------------------------------------------------------------------------
# metric files: {"points": [...], "base": label, "d": [[...], ...]}


def metric_from_obj(obj, context: str = "metric") -> FiniteMetricSpace:
    points = _require(obj, "points", context, list)
    if not points:
        raise FormatError(f"{context}.points", "at least one point required")
    labels = [str(p) for p in points]
    base = obj.get("base", labels[0])
    if base not in labels:
        raise FormatError(f"{context}.base", f"base {base!r} is not a listed point")
    matrix = _require(obj, "d", context, list)
    if len(matrix) != len(labels) or any(
        not isinstance(row, list) or len(row) != len(labels) for row in matrix
    ):
        raise FormatError(f"{context}.d", f"expected a {len(labels)}x{len(labels)} matrix")
    rows = [
        [_rational(v, f"{context}.d[{i}][{j}]") for j, v in enumerate(row)]
        for i, row in enumerate(matrix)
    ]
    order = [labels.index(base)] + [k for k, l in enumerate(labels) if l != base]
    labels = [labels[k] for k in order]
    rows = [[rows[i][j] for j in order] for i in order]
    try:
        return validate(labels, rows)
    except InvalidMetricError:
        raise  # an axiom report, not a parse problem
    except ValueError as exc:
        raise FormatError(context, str(exc)) from None


def metric_to_obj(space: FiniteMetricSpace) -> dict:
    return {
        "points": list(space.labels),
        "base": space.labels[0],
        "d": [[format_rational(v) for v in row] for row in space.dist],
    }


def _space_from_field(obj, context: str, base_dir: Optional[str]) -> FiniteMetricSpace:
    field = _require(obj, "space", context)
    if isinstance(field, str):
        path = field
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return metric_from_obj(load_json(path), context=path)
    return metric_from_obj(field, context=f"{context}.space")


# ---------------------------------------------------------------------------
# element files: {"space": path-or-inline, "coeffs": {label: rational}}


def element_from_obj(obj, context: str = "element", base_dir=None) -> FreeElement:
    space = _space_from_field(obj, context, base_dir)
    coeffs = _require(obj, "coeffs", context, dict)
    table = {}
    for label, value in coeffs.items():
        if label not in space.labels:
            raise FormatError(f"{context}.coeffs.{label}", "unknown point label")
        index = space.index(label)
        if index == 0:
            raise FormatError(
                f"{context}.coeffs.{label}", "the base point carries no coefficient"
            )
        table[index] = _rational(value, f"{context}.coeffs.{label}")
    return from_coeff_map(space, table)


def element_to_obj(m: FreeElement, inline_space: bool = True) -> dict:
    coeffs = {
        m.space.labels[i]: format_rational(v)
        for i, v in enumerate(m.coeffs, start=1)
        if v != 0
    }
    obj = {"coeffs": coeffs}
    if inline_space:
        obj["space"] = metric_to_obj(m.space)
    return obj


# ---------------------------------------------------------------------------
# measure files: {"space": ..., "masses": [{"x","y","m"}]}; duplicates add up


def measure_from_obj(obj, context: str = "measure", base_dir=None) -> DeLeeuwMeasure:
    space = _space_from_field(obj, context, base_dir)
    entries = _require(obj, "masses", context, list)
    table: dict[tuple[int, int], Fraction] = {}
    for k, entry in enumerate(entries):
        where = f"{context}.masses[{k}]"
        x = str(_require(entry, "x", where))
        y = str(_require(entry, "y", where))
        for label in (x, y):
            if label not in space.labels:
                raise FormatError(where, f"unknown point label {label!r}")
        if x == y:
            raise FormatError(where, "mass on the diagonal is not allowed")
        pair = (space.index(x), space.index(y))
        table[pair] = table.get(pair, Fraction(0)) + _rational(
            _require(entry, "m", where), f"{where}.m"
        )
    return DeLeeuwMeasure(space, table)


def measure_to_obj(mu: DeLeeuwMeasure, inline_space: bool = True) -> dict:
    masses = [
        {
            "x": mu.space.labels[x],
            "y": mu.space.labels[y],
            "m": format_rational(v),
        }
        for (x, y), v in sorted(mu.masses.items())
    ]
    obj = {"masses": masses}
    if inline_space:
        obj["space"] = metric_to_obj(mu.space)
    return obj


# ---------------------------------------------------------------------------
# edge-function files: {"space": ..., "values": [{"x","y","g"}]}, all pairs once


def edge_function_from_obj(obj, context: str = "edgefunction", base_dir=None) -> EdgeFunction:
    space = _space_from_field(obj, context, base_dir)
    entries = _require(obj, "values", context, list)
    table = {}
    for k, entry in enumerate(entries):
        where = f"{context}.values[{k}]"
        x = str(_require(entry, "x", where))
        y = str(_require(entry, "y", where))
        for label in (x, y):
            if label not in space.labels:
                raise FormatError(where, f"unknown point label {label!r}")
        if x == y:
            raise FormatError(where, "diagonal pairs are not in the domain")
        pair = (space.index(x), space.index(y))
        if pair in table:
            raise FormatError(where, f"duplicate value for pair ({x}, {y})")
        table[pair] = _rational(_require(entry, "g", where), f"{where}.g")
    missing = set(space.pairs) - set(table)
    if missing:
        x, y = sorted(missing)[0]
        raise FormatError(
            f"{context}.values",
            f"{len(missing)} ordered pairs lack a value, e.g. "
            f"({space.labels[x]}, {space.labels[y]})",
        )
    return EdgeFunction(space, table)


def edge_function_to_obj(g: EdgeFunction, inline_space: bool = True) -> dict:
    values = [
        {"x": g.space.labels[x], "y": g.space.labels[y], "g": format_rational(v)}
        for (x, y), v in sorted(g.values.items())
    ]
    obj = {"values": values}
    if inline_space:
        obj["space"] = metric_to_obj(g.space)
    return obj


# ---------------------------------------------------------------------------
# partition files: {"parts": [[{"x","y"}, ...], ...]}


def partition_from_obj(obj, space: FiniteMetricSpace, context: str = "partition"):
    entries = _require(obj, "parts", context, list)
    parts = []
    for k, block in enumerate(entries):
        where = f"{context}.parts[{k}]"
        if not isinstance(block, list):
            raise FormatError(where, "expected a list of pairs")
        pairs = []
        for j, entry in enumerate(block):
            inner = f"{where}[{j}]"
            x = str(_require(entry, "x", inner))
            y = str(_require(entry, "y", inner))
            for label in (x, y):
                if label not in space.labels:
                    raise FormatError(inner, f"unknown point label {label!r}")
            pairs.append((space.index(x), space.index(y)))
        parts.append(pairs)
    return parts
