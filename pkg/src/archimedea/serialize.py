"""Tagged JSON for domain values, and a writer that prints floats with 17 significant digits.

encode() turns values into plain JSON data; decode() inverts it, so every
CLI payload re-parses into the type it came from.
"""
from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np

from . import analytic as an
from . import arch_gamma as ag
from . import characters as ch
from . import coeffs as co
from . import selberg as se
from . import whittaker as wh
from .exact import CQ, format_cq, parse_cq

SCHEMA_VERSION = 1
TAG = "$type"

_DATACLASSES = {c.__name__: c for c in (
    ag.Atom, ag.Prefactor, ag.PolyRatio, ag.ArchExpr, ag.PrincipalSeries, ag.DiscreteSeries,
    ag.FinitelyManyZeros, ag.InfinitelyManyZeros, ag.StirlingProfile,
    ch.EpsFactor, ch.WeilEpsDescriptor, co.LocalFactor,
    an.PoleEntry, an.PoleReport, an.QuadratureSpec,
    se.Check, se.AxiomReport,
)}
# fields whose lists are meant as tuples
_TUPLE_FIELDS = {"num", "den", "inverse_roots", "zeros", "entries", "t_range"}


def encode(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, Fraction):
        return {TAG: "rational", "value": str(x)}
    if isinstance(x, CQ):
        return {TAG: "gaussian_rational", "value": format_cq(x)}
    if isinstance(x, (complex, np.complexfloating)):
        return {TAG: "complex", "re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return {TAG: "complex_array", "re": x.real.tolist(), "im": x.imag.tolist()}
        return x.tolist()
    if isinstance(x, ch.DirichletCharacter):
        return {TAG: "DirichletCharacter", "modulus": x.modulus, "exponents": list(x.exponents),
                "index": x.index(), "conductor": x.conductor, "parity": x.parity, "order": x.order}
    if isinstance(x, wh.WhittakerCoeffs):
        return {TAG: "WhittakerCoeffs", "rep": encode(x.rep),
                "entries": [[int(n), encode(c)] for n, c in sorted(x.entries.items())]}
    if dataclasses.is_dataclass(x) and type(x).__name__ in _DATACLASSES:
        out = {TAG: type(x).__name__}
        for f in dataclasses.fields(x):
            out[f.name] = encode(getattr(x, f.name))
        return out
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode(x):
    if isinstance(x, list):
        return [decode(v) for v in x]
    if not isinstance(x, dict):
        return x
    tag = x.get(TAG)
    if tag is None:
        return {k: decode(v) for k, v in x.items()}
    if tag == "rational":
        return Fraction(x["value"])
    if tag == "gaussian_rational":
        return parse_cq(x["value"])
    if tag == "complex":
        return complex(x["re"], x["im"])
    if tag == "complex_array":
        return np.array(x["re"]) + 1j * np.array(x["im"])
    if tag == "DirichletCharacter":
        return ch.DirichletCharacter(x["modulus"], tuple(x["exponents"]))
    if tag == "WhittakerCoeffs":
        return wh.WhittakerCoeffs(decode(x["rep"]), {int(n): decode(c) for n, c in x["entries"]})
    cls = _DATACLASSES.get(tag)
    if cls is None:
        raise ValueError(f"unknown payload type {tag!r}")
    kw = {}
    for f in dataclasses.fields(cls):
        if f.name not in x:
            continue
        v = decode(x[f.name])
        if f.name in _TUPLE_FIELDS and isinstance(v, list):
            v = tuple(tuple(e) if isinstance(e, list) else e for e in v)
        kw[f.name] = v
    return cls(**kw)


# ---------------------------------------------------------------- writing

def _num(v):
    # Python's json reads these tokens back
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if v.is_integer() and abs(v) < 1e16:
        return f"{v:.1f}"  # keep it a float on re-read
    return format(v, ".17g")


def dumps(data, indent=2):
    """JSON text with floats at 17 significant digits.  Deterministic for fixed input."""
    pad = " " * indent if indent else ""

    def w(x, level):
        if x is None:
            return "null"
        if x is True:
            return "true"
        if x is False:
            return "false"
        if isinstance(x, int):
            return str(x)
        if isinstance(x, float):
            return _num(x)
        if isinstance(x, str):
            return json.dumps(x, ensure_ascii=False)
        if isinstance(x, dict):
            if not x:
                return "{}"
            inner = [f"{json.dumps(str(k))}: {w(v, level + 1)}" for k, v in x.items()]
            return _block("{", "}", inner, level)
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
                return "[" + ", ".join(w(v, level) for v in x) + "]"
            return _block("[", "]", [w(v, level + 1) for v in x], level)
        raise TypeError(f"cannot write {type(x).__name__}")

    def _block(o, c, items, level):
        if not pad:
            return o + ", ".join(items) + c
        sep = ",\n" + pad * (level + 1)
        return o + "\n" + pad * (level + 1) + sep.join(items) + "\n" + pad * level + c

    return w(data, 0)


def loads(text):
    return json.loads(text)
