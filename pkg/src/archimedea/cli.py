"""Command-line front end.  Every invocation prints one JSON document.

Exit codes: 0 ok, 1 domain error (the payload names it), 2 usage error.
"""
from __future__ import annotations

import argparse
import re
import sys
import time
from fractions import Fraction

import numpy as np

from . import analytic as an
from . import arch_gamma as ag
from . import characters as ch
from . import coeffs as co
from . import selberg as se
from . import serialize as sz
from . import whittaker as wh
from .errors import ArchimedeaError, InvalidArgument
from .exact import as_shift, parse_cq

_ATOM = re.compile(r"(GR|GC|G)\(([^()]*)\)")


# ---------------------------------------------------------------- argument grammar

def parse_expr(text):
    """Whitespace-separated atoms GR(shift), GC(shift), G(lambda,shift); empty means 1."""
    out = ag.ArchExpr()
    text = (text or "").strip()
    pos = 0
    for m in _ATOM.finditer(text):
        if text[pos:m.start()].strip():
            raise InvalidArgument(f"cannot parse {text[pos:m.start()].strip()!r}")
        pos = m.end()
        kind, body = m.group(1), m.group(2)
        try:
            if kind == "G":
                lam, shift = body.split(",", 1)
                out = out * ag.build("plain", parse_cq(shift), lam=Fraction(lam.strip()))
            else:
                out = out * ag.build("gamma_r" if kind == "GR" else "gamma_c", parse_cq(body))
        except ValueError as e:
            raise InvalidArgument(str(e)) from None
    if text[pos:].strip():
        raise InvalidArgument(f"cannot parse {text[pos:].strip()!r}")
    return out


def parse_quotient(num, den):
    return parse_expr(num) / parse_expr(den) if den else parse_expr(num)


def parse_complex(text):
    try:
        return complex(parse_cq(text))
    except ValueError:
        try:
            return complex(text.replace("i", "j"))
        except ValueError:
            raise InvalidArgument(f"cannot parse complex number {text!r}") from None


def parse_char(text):
    try:
        q, i = text.split(":")
        return ch.character_by_index(int(q), int(i))
    except ValueError:
        raise InvalidArgument(f"character must be MODULUS:INDEX, got {text!r}") from None


def parse_rep(text):
    """PS(eps1,eps2,nu,b1,b2) or DS(k,b3); trailing parameters default to 0."""
    m = re.fullmatch(r"\s*(PS|DS)\((.*)\)\s*", text or "")
    if not m:
        raise InvalidArgument(f"representation must be PS(...) or DS(...), got {text!r}")
    args = [a.strip() for a in m.group(2).split(",") if a.strip()]
    if m.group(1) == "PS":
        if len(args) < 2:
            raise InvalidArgument("PS needs eps1, eps2")
        e1, e2 = int(args[0]), int(args[1])
        nu = as_shift(args[2]) if len(args) > 2 else 0
        b = [_real(a) for a in args[3:5]] + [0] * (2 - len(args[3:5]))
        return ag.PrincipalSeries(e1, e2, nu, b[0], b[1])
    if not args:
        raise InvalidArgument("DS needs k")
    return ag.DiscreteSeries(int(args[0]), _real(args[1]) if len(args) > 1 else 0)


def _real(text):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def parse_poly(text):
    """Ascending coefficients, whitespace or comma separated."""
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    if not parts:
        raise InvalidArgument("empty polynomial")
    out = []
    for p in parts:
        try:
            out.append(parse_cq(p))
        except ValueError:
            out.append(parse_complex(p))
    return out


def parse_series(name):
    return co.series_by_name(name)


# ---------------------------------------------------------------- gamma

def _expr_payload(e):
    return {"label": e.label(), "degree": e.degree(), "expr": e}


def cmd_gamma_build(a):
    lam = Fraction(a.lam) if a.lam else None
    e = ag.build(a.kind, parse_cq(a.shift), lam=lam, parity=a.parity)
    return _expr_payload(e)


def cmd_gamma_degree(a):
    e = parse_quotient(a.num, a.den)
    return {"label": e.label(), "degree": ag.degree(e)}


def cmd_gamma_twist(a):
    return _expr_payload(ag.twist_parity(parse_quotient(a.num, a.den), a.eps))


def _verdict_payload(v):
    if isinstance(v, ag.InfinitelyManyZeros):
        return {"verdict": "InfinitelyManyZeros", "witness": v.witness.label(), "value": v}
    return {"verdict": "FinitelyManyZeros", "gl2_type": repr(v.gl2_type),
            "ratio_is_one": v.ratio.is_one(), "value": v}


def cmd_gamma_reduce(a):
    v = ag.reduce_quotient(parse_quotient(a.num, a.den))
    if a.normalize and isinstance(v, ag.FinitelyManyZeros):
        v = ag.normalize_rational(v)
    return _verdict_payload(v)


def cmd_gamma_stirling(a):
    return {"profile": ag.stirling_profile(parse_quotient(a.num, a.den))}


def cmd_gamma_eval(a):
    e = parse_quotient(a.num, a.den)
    return {"label": e.label(), "s": parse_complex(a.s), "value": complex(ag.eval_arch(e, parse_complex(a.s)))}


# ---------------------------------------------------------------- characters

def _char_row(c):
    return {"character": c, "primitive": c.is_primitive}


def cmd_char_table(a):
    return {"modulus": a.modulus, "characters": [_char_row(c) for c in ch.character_table(a.modulus)]}


def cmd_char_gauss(a):
    c = ch.character_by_index(a.modulus, a.index)
    return {"character": c, "gauss_sum": ch.gauss_sum(c)}


def cmd_char_eps(a):
    c = ch.character_by_index(a.modulus, a.index)
    return {"character": c, "eps": ch.eps_global(c), "eps_infty": ch.eps_infty(c)}


def cmd_char_eps_product(a):
    c1, c2 = parse_char(a.chi1), parse_char(a.chi2)
    e = ch.eps_product_coprime(c1, c2)
    direct = ch.eps_global((c1 * c2).primitive_core())
    return {"eps": e, "direct": direct, "difference": abs(e.r - direct.r)}


def cmd_char_weil_eps(a):
    d = ch.weil_eps_descriptor(a.n, parse_char(a.omega_pi), parse_char(a.omega_rho),
                               parse_char(a.chi0), parse_char(a.chi))
    out = {"descriptor": d}
    if a.s is not None:
        out["value"] = d(parse_complex(a.s))
    return out


# ---------------------------------------------------------------- coefficients

def _fe_summary(s):
    return {"label": s.label, "conductor": s.conductor, "omega": s.omega,
            "arch": None if s.arch is None else s.arch.label(), "degree": s.degree,
            "poles": None if s.completed_poles is None else [list(p) for p in s.completed_poles]}


def cmd_coeffs_list(a):
    s = parse_series(a.series)
    return {"series": _fe_summary(s), "coefficients": np.asarray(co.dirichlet_coeffs(s, a.N))}


def cmd_coeffs_dump(a):
    s = parse_series(a.series)
    path = a.out or co.cache_path(s.label, a.N)
    if path is None:
        raise InvalidArgument("give --out or set ARCHIMEDEA_CACHE_DIR")
    co.save_cache(s, a.N, path)
    return {"series": s.label, "N": a.N, "path": path}


def cmd_coeffs_twist(a):
    s = co.twist(parse_series(a.series), parse_char(a.chi))
    return {"series": _fe_summary(s), "coefficients": np.asarray(s.coefficients(a.N))}


def cmd_coeffs_combine(a):
    s1 = parse_series(a.a)
    if a.op == "partial":
        primes = [int(p) for p in re.split(r"[\s,]+", a.primes or "") if p]
        s = co.combine(s1, None, "partial", primes=primes)
    else:
        if not a.b:
            raise InvalidArgument(f"{a.op} needs --b")
        s = co.combine(s1, parse_series(a.b), a.op)
    return {"series": _fe_summary(s), "coefficients": np.asarray(s.coefficients(a.N))}


def cmd_coeffs_local(a):
    return {"local_factor": co.local_factor(parse_series(a.series), a.p)}


# ---------------------------------------------------------------- L-functions

def _quad(a):
    return an.QuadratureSpec(target_error=a.target)


def cmd_lfun_eval(a):
    s = parse_series(a.series)
    z = parse_complex(a.s)
    return {"series": s.label, "s": z, "value": an.completed_eval(s, z, a.N, _quad(a))}


def cmd_lfun_fe_check(a):
    s = parse_series(a.series)
    z = parse_complex(a.s)
    return {"series": s.label, "s": z, "residual": an.fe_residual(s, z, a.N, _quad(a))}


def cmd_lfun_zeros(a):
    s = parse_series(a.series)
    t0, t1 = a.range
    zs = an.scan_zeros(s, t0, t1, a.step, _quad(a))
    return {"series": s.label, "range": [t0, t1], "step": a.step, "zeros": zs}


def cmd_lfun_poles(a):
    num, den = parse_series(a.num), parse_series(a.den)
    t0, t1 = a.range
    r = an.quotient_pole_report(num, den, t0, t1, a.step, a.margin, q=_quad(a))
    return {"num": num.label, "den": den.label, "certified": len(r.poles), "report": r}


# ---------------------------------------------------------------- Whittaker

def cmd_whittaker_qpoly(a):
    rep = parse_rep(a.rep)
    p, pref = wh.q_poly(rep, a.n)
    return {"rep": rep, "n": a.n, "poly": p, "prefactor": pref, "degree": len(p) - 1}


def cmd_whittaker_testvec(a):
    rep = parse_rep(a.rep)
    P = parse_poly(a.poly)
    w = wh.test_vector(rep, P)
    pts = 2 + 1j * np.linspace(-10, 10, 20)
    return {"coeffs": w, "residual": wh.residual(w, P, pts)}


def cmd_whittaker_bessel_check(a):
    lhs, rhs = wh.mellin_bessel_check(parse_complex(a.nu), parse_complex(a.s))
    return {"lhs": lhs, "rhs": rhs, "relative_error": abs(lhs - rhs) / abs(rhs)}


def cmd_whittaker_gl2(a):
    rep = parse_rep(a.rep)
    L, eps = wh.gl2_l_and_eps(rep, a.eps_chi)
    return {"rep": rep, "L": _expr_payload(L), "eps": eps}


# ---------------------------------------------------------------- Selberg

def _check_payload(c):
    return {"status": c.label(), "check": c}


def cmd_selberg_axioms(a):
    s = parse_series(a.series)
    fe = se.FEData.from_series(s)
    if a.arch:
        fe.arch = parse_expr(a.arch)
    r = se.axiom_report(fe, a.N)
    return {"series": s.label, "g1": _check_payload(r.g1), "g3": _check_payload(r.g3),
            "g4": _check_payload(r.g4), "js_bound": _check_payload(r.js_bound)}


def cmd_selberg_partitions(a):
    d = Fraction(a.d)
    parts = se.factorization_partitions(d)
    return {"d": d, "partitions": [list(p) for p in parts],
            "annotated": [[[x, note] for x, note in se.describe_partition(p)] for p in parts]}


def cmd_selberg_primitivity(a):
    s = parse_series(a.series)
    rep = se.primitivity_obstruction(se.FEData.from_series(s))
    for shape in rep["shapes"]:
        for job in shape["jobs"]:
            if "expr" in job:
                job["expr"] = job["expr"].label()
        shape["factors"] = [[x, n] for x, n in shape["factors"]]
    return rep


# ---------------------------------------------------------------- parser

def _range(p):
    p.add_argument("--range", nargs=2, type=float, required=True, metavar=("T0", "T1"))


def _target(p):
    p.add_argument("--target", type=float, default=1e-12, help="relative error target")


def build_parser():
    P = argparse.ArgumentParser(prog="archimedea", description=__doc__.splitlines()[0])
    P.add_argument("--no-timing", action="store_true", help="report timing_ms as 0")
    P.add_argument("--indent", type=int, default=2)
    top = P.add_subparsers(dest="group", required=True)

    def group(name, helptext):
        g = top.add_parser(name, help=helptext)
        return g.add_subparsers(dest="sub", required=True)

    def quotient(p):
        p.add_argument("--num", "--expr", dest="num", default="", help='atoms, e.g. "GR(0) GC(1/2)"')
        p.add_argument("--den", default="")

    g = group("gamma", "gamma-factor calculus")
    p = g.add_parser("build"); p.set_defaults(fn=cmd_gamma_build)
    p.add_argument("--kind", choices=["gamma_r", "gamma_c", "plain"], required=True)
    p.add_argument("--shift", default="0")
    p.add_argument("--lam")
    p.add_argument("--parity", type=int, choices=[0, 1])
    p = g.add_parser("degree"); quotient(p); p.set_defaults(fn=cmd_gamma_degree)
    p = g.add_parser("twist"); quotient(p); p.set_defaults(fn=cmd_gamma_twist)
    p.add_argument("--eps", type=int, choices=[0, 1], required=True)
    p = g.add_parser("reduce"); quotient(p); p.set_defaults(fn=cmd_gamma_reduce)
    p.add_argument("--normalize", action="store_true")
    p = g.add_parser("stirling"); quotient(p); p.set_defaults(fn=cmd_gamma_stirling)
    p = g.add_parser("eval"); quotient(p); p.set_defaults(fn=cmd_gamma_eval)
    p.add_argument("--s", required=True)

    g = group("char", "Dirichlet characters and epsilon factors")
    p = g.add_parser("table"); p.set_defaults(fn=cmd_char_table)
    p.add_argument("--modulus", type=int, required=True)
    for name, fn in (("gauss", cmd_char_gauss), ("eps", cmd_char_eps)):
        p = g.add_parser(name); p.set_defaults(fn=fn)
        p.add_argument("--modulus", type=int, required=True)
        p.add_argument("--index", type=int, required=True)
    p = g.add_parser("eps-product"); p.set_defaults(fn=cmd_char_eps_product)
    p.add_argument("--chi1", required=True, help="MODULUS:INDEX")
    p.add_argument("--chi2", required=True)
    p = g.add_parser("weil-eps"); p.set_defaults(fn=cmd_char_weil_eps)
    p.add_argument("--n", type=int, required=True)
    for f in ("--omega-pi", "--omega-rho", "--chi0", "--chi"):
        p.add_argument(f, required=True, help="MODULUS:INDEX")
    p.add_argument("--s")

    g = group("coeffs", "Dirichlet coefficients")
    p = g.add_parser("list"); p.set_defaults(fn=cmd_coeffs_list)
    p.add_argument("--series", required=True); p.add_argument("--N", type=int, default=20)
    p = g.add_parser("dump"); p.set_defaults(fn=cmd_coeffs_dump)
    p.add_argument("--series", required=True); p.add_argument("--N", type=int, required=True)
    p.add_argument("--out")
    p = g.add_parser("twist"); p.set_defaults(fn=cmd_coeffs_twist)
    p.add_argument("--series", required=True); p.add_argument("--chi", required=True)
    p.add_argument("--N", type=int, default=20)
    p = g.add_parser("combine"); p.set_defaults(fn=cmd_coeffs_combine)
    p.add_argument("--a", required=True); p.add_argument("--b")
    p.add_argument("--op", choices=["product", "quotient", "partial"], required=True)
    p.add_argument("--primes"); p.add_argument("--N", type=int, default=20)
    p = g.add_parser("local"); p.set_defaults(fn=cmd_coeffs_local)
    p.add_argument("--series", required=True); p.add_argument("--p", type=int, required=True)

    g = group("lfun", "completed L-functions")
    p = g.add_parser("eval"); p.set_defaults(fn=cmd_lfun_eval)
    p.add_argument("--series", required=True); p.add_argument("--s", required=True)
    p.add_argument("--N", type=int); _target(p)
    p = g.add_parser("fe-check"); p.set_defaults(fn=cmd_lfun_fe_check)
    p.add_argument("--series", required=True); p.add_argument("--s", required=True)
    p.add_argument("--N", type=int); _target(p)
    p = g.add_parser("zeros"); p.set_defaults(fn=cmd_lfun_zeros)
    p.add_argument("--series", required=True); _range(p)
    p.add_argument("--step", type=float, default=0.01); _target(p)
    p = g.add_parser("poles"); p.set_defaults(fn=cmd_lfun_poles)
    p.add_argument("--num", required=True); p.add_argument("--den", required=True); _range(p)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--margin", type=float, default=an.CERTIFY_MARGIN); _target(p)

    g = group("whittaker", "GL(2) test vectors")
    p = g.add_parser("qpoly"); p.set_defaults(fn=cmd_whittaker_qpoly)
    p.add_argument("--rep", required=True, help="PS(e1,e2,nu,b1,b2) or DS(k,b3)")
    p.add_argument("--n", type=int, required=True)
    p = g.add_parser("testvec"); p.set_defaults(fn=cmd_whittaker_testvec)
    p.add_argument("--rep", required=True); p.add_argument("--poly", required=True, help="ascending coefficients")
    p = g.add_parser("bessel-check"); p.set_defaults(fn=cmd_whittaker_bessel_check)
    p.add_argument("--nu", required=True); p.add_argument("--s", required=True)
    p = g.add_parser("gl2"); p.set_defaults(fn=cmd_whittaker_gl2)
    p.add_argument("--rep", required=True); p.add_argument("--eps-chi", type=int, choices=[0, 1], default=0)

    g = group("selberg", "axiom audits and degree partitions")
    p = g.add_parser("axioms"); p.set_defaults(fn=cmd_selberg_axioms)
    p.add_argument("--series", required=True); p.add_argument("--N", type=int, default=1000)
    p.add_argument("--arch", help="override the gamma factor")
    p = g.add_parser("partitions"); p.set_defaults(fn=cmd_selberg_partitions)
    p.add_argument("--d", required=True)
    p = g.add_parser("primitivity"); p.set_defaults(fn=cmd_selberg_primitivity)
    p.add_argument("--series", required=True)
    return P


def _config(a):
    skip = {"fn", "group", "sub"}
    return {k: v for k, v in sorted(vars(a).items()) if k not in skip}


def run(argv):
    """Parse, execute, and return (exit_code, document)."""
    a = build_parser().parse_args(argv)
    t = time.perf_counter()
    doc = {"schema_version": sz.SCHEMA_VERSION, "command": f"{a.group} {a.sub}"}
    try:
        payload = a.fn(a)
        doc.update(status="ok", payload=sz.encode(payload))
        code = 0
    except ArchimedeaError as e:
        doc.update(status="error", error={"name": e.name, "message": str(e), "details": sz.encode(e.details)})
        code = e.exit_code
    doc["timing_ms"] = 0.0 if a.no_timing else (time.perf_counter() - t) * 1000
    doc["config_echo"] = sz.encode(_config(a))
    return code, doc


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, doc = run(argv)
    print(sz.dumps(doc, indent=doc["config_echo"]["indent"]))
    return code


if __name__ == "__main__":
    sys.exit(main())
