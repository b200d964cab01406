"""JSON formats for groups and measures, and a deterministic report writer.

Group: ``{"cyclic_orders": [m_1, ..., m_r]}``.

Measure: ``{"group": <group>, "kind": "probability" | "signed" | "complex",
"weights": [...]}`` with one weight per element in row-major order.  A weight
is a number, a ``[re, im]`` pair, or a fraction string such as ``"1/3"``.
When every weight is an integer or a fraction string the measure gets exact
rational backing.

Reports are written with 17 significant digits for every float and keys in
insertion order, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .groups import Group
from .measures import Measure

KINDS = ("probability", "signed", "complex")


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def _load(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def group_from_json(obj) -> Group:
    if not isinstance(obj, dict) or "cyclic_orders" not in obj:
        raise InputError('a group is an object with a "cyclic_orders" list')
    orders = obj["cyclic_orders"]
    if not isinstance(orders, list) or not all(isinstance(m, int) and not isinstance(m, bool) for m in orders):
        raise InputError("cyclic_orders must be a list of integers")
    try:
        return Group(tuple(orders))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def group_to_json(g: Group) -> dict:
    return {"cyclic_orders": list(g.orders)}


def _parse_weight(w):
    if isinstance(w, bool):
        raise InputError(f"bad weight {w!r}")
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, float):
        return complex(w)
    if isinstance(w, str):
        try:
            return Fraction(w)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad fraction {w!r}") from None
    if isinstance(w, list) and len(w) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in w):
        return complex(w[0], w[1])
    raise InputError(f"bad weight {w!r}")


def measure_from_json(obj, tol: float = 1e-9) -> Measure:
    if not isinstance(obj, dict) or not {"group", "weights"} <= obj.keys():
        raise InputError('a measure is an object with "group" and "weights"')
    g = group_from_json(obj["group"])
    raw = obj["weights"]
    if not isinstance(raw, list) or len(raw) != len(g):
        raise InputError(f"expected {len(g)} weights for {g}")
    vals = [_parse_weight(w) for w in raw]
    if all(isinstance(v, Fraction) for v in vals):
        mu = Measure.from_fractions(g, vals)
    else:
        mu = Measure(g, [complex(v) for v in vals])
    kind = obj.get("kind")
    if kind is not None:
        if kind not in KINDS:
            raise InputError(f"kind must be one of {', '.join(KINDS)}")
        if kind == "probability" and not mu.is_probability(tol):
            raise InputError("weights do not form a probability measure")
        if kind == "signed" and not mu.is_real(tol):
            raise InputError("a signed measure must have real weights")
    return mu


def load_group(path) -> Group:
    return group_from_json(_load(path))


def load_measure(path, tol: float = 1e-9) -> Measure:
    return measure_from_json(_load(path), tol)


def measure_to_json(mu: Measure) -> dict:
    if mu.is_exact:
        weights = [str(f) for f in mu.fractions()]
    elif mu.is_real(0.0):
        weights = [float(w) for w in mu.weights.real]
    else:
        weights = [[float(w.real), float(w.imag)] for w in mu.weights]
    return {"group": group_to_json(mu.group), "kind": mu.kind(), "weights": weights}


# ---------------------------------------------------------------------------
# deterministic writer


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0:
        return "0.0"
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def _emit(obj, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list)) for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                _emit(v, indent, level, out)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
        else:
            out.append("[\n")
            for i, v in enumerate(obj):
                out.append(pad)
                _emit(v, indent, level + 1, out)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(end + "]")
    elif isinstance(obj, float):
        out.append(_float(obj))
    else:
        out.append(json.dumps(obj))


def dumps(obj, indent: int = 2) -> str:
    """Serialize ``obj`` with every float at 17 significant digits."""
    out: list[str] = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out) + "\n"
