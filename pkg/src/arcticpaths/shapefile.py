"""YAML shape files.

Examples::

    kind: linear
    p: 3

    kind: piecewise
    pieces:
      - {width: 1/2, slope: 2}
      - {jump: 1}
      - {width: 1/2, slope: frozen}

    kind: hexagon
    a: 1/3
    b: 1
    c: 2/3

    kind: analytic
    expr: 3*u**(1/3)
    exponent0: 1/3

    kind: table
    u: [0, 0.5, 1]
    alpha: [0, 1, 3]

Numbers may be written as YAML numbers or as strings such as ``"1/3"``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import yaml

from .boundary import BoundaryShape, Jump, Segment, ShapeError

__all__ = ["ShapeFileError", "parse_shape", "load_shape", "KINDS"]

KINDS = ("linear", "piecewise", "hexagon", "analytic", "table")


class ShapeFileError(ShapeError):
    """Malformed shape description; the message names the offending field."""


def _num(v, where: str) -> Fraction:
    try:
        if isinstance(v, bool):
            raise TypeError
        if isinstance(v, float):
            return Fraction(v).limit_denominator(10**12)
        return Fraction(str(v).strip())
    except (TypeError, ValueError, ZeroDivisionError):
        raise ShapeFileError(f"field '{where}': cannot read {v!r} as a number") from None


def _opt(d, key):
    if d.get(key) is None:
        return None
    if d[key] in ("inf", "infinity", ".inf") or d[key] == float("inf"):
        return float("inf")
    return float(_num(d[key], key))


def _pieces(items):
    if not isinstance(items, list) or not items:
        raise ShapeFileError("field 'pieces': expected a non-empty list")
    out = []
    for k, it in enumerate(items):
        where = f"pieces[{k}]"
        if not isinstance(it, dict):
            raise ShapeFileError(f"field '{where}': expected a mapping")
        if "jump" in it:
            out.append(Jump(_num(it["jump"], where + ".jump")))
        elif "width" in it and "slope" in it:
            s = it["slope"]
            s = "frozen" if s == "frozen" else _num(s, where + ".slope")
            out.append(Segment(_num(it["width"], where + ".width"), s))
        else:
            raise ShapeFileError(f"field '{where}': need 'jump' or 'width' and 'slope'")
    return out


def _analytic(d, name):
    import sympy as sp

    if "expr" not in d:
        raise ShapeFileError("field 'expr': missing")
    u = sp.Symbol("u", nonnegative=True)
    try:
        ex = sp.sympify(str(d["expr"]), locals={"u": u})
    except (sp.SympifyError, SyntaxError, TypeError) as err:
        raise ShapeFileError(f"field 'expr': {err}") from None
    if ex.free_symbols - {u}:
        raise ShapeFileError(f"field 'expr': unknown symbols {ex.free_symbols - {u}}")
    f = sp.lambdify(u, ex, "math")
    df = sp.lambdify(u, sp.diff(ex, u), "math")
    return f, df


def _table(d):
    from scipy.interpolate import PchipInterpolator

    try:
        us = np.asarray(d["u"], dtype=float)
        vs = np.asarray(d["alpha"], dtype=float)
    except KeyError as err:
        raise ShapeFileError(f"field '{err.args[0]}': missing") from None
    if us.shape != vs.shape or us.ndim != 1 or len(us) < 2:
        raise ShapeFileError("field 'u'/'alpha': need two lists of equal length >= 2")
    if us[0] != 0 or us[-1] != 1 or np.any(np.diff(us) <= 0):
        raise ShapeFileError("field 'u': must increase strictly from 0 to 1")
    ip = PchipInterpolator(us, vs)
    dip = ip.derivative()
    return (lambda x: float(ip(x))), (lambda x: float(dip(x)))


def parse_shape(text: str, name: str = "") -> BoundaryShape:
    try:
        d = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ShapeFileError(f"not valid YAML: {err}") from None
    if not isinstance(d, dict):
        raise ShapeFileError("top level must be a mapping")
    kind = d.get("kind")
    name = str(d.get("name", name))
    if kind not in KINDS:
        raise ShapeFileError(f"field 'kind': expected one of {KINDS}, got {kind!r}")
    if kind == "linear":
        if "p" not in d:
            raise ShapeFileError("field 'p': missing")
        sh = BoundaryShape.linear(_num(d["p"], "p"))
    elif kind == "hexagon":
        for k in "abc":
            if k not in d:
                raise ShapeFileError(f"field '{k}': missing")
        sh = BoundaryShape.hexagon(_num(d["a"], "a"), _num(d["b"], "b"), _num(d["c"], "c"))
    elif kind == "piecewise":
        sh = BoundaryShape.piecewise(_pieces(d.get("pieces")), name=name)
    else:
        f, df = _analytic(d, name) if kind == "analytic" else _table(d)
        frozen = [(float(_num(a, "frozen")), float(_num(b, "frozen")))
                  for a, b in d.get("frozen", []) or []]
        jumps = [(float(_num(a, "jumps")), float(_num(b, "jumps")))
                 for a, b in d.get("jumps", []) or []]
        sh = BoundaryShape.analytic(f, df, frozen=frozen, jumps=jumps, name=name,
                                    slope0=_opt(d, "slope0"), slope1=_opt(d, "slope1"),
                                    exponent0=_opt(d, "exponent0"),
                                    exponent1=_opt(d, "exponent1"))
    if name:
        sh.name = name
    return sh


def load_shape(path) -> BoundaryShape:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ShapeFileError(f"field '--shape': {err}") from None
    return parse_shape(text, name=str(path))
