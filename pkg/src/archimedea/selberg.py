"""Axiom audits and degree bookkeeping for Dirichlet series with functional equations.

Conditions audited (notation of the class G):
  G1  absolute convergence for re(s) > 1,
  G3  every gamma atom Gamma(lam s + mu), numerator or denominator, has re(-mu/lam) < 1/2,
  G4  log-Euler coefficients |b_(p^k)| <= C p^(k theta) with theta < 1/2,
plus the Jacquet-Shalika type bound |alpha_i(p)| < p^(1/2 - 1/(n^2+1)).
G3 is decided exactly; G1 and G4 can only be estimated from finitely many
coefficients and are labelled heuristic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
from sympy import primerange

from . import arch_gamma as ag
from . import coeffs as co
from .errors import InvalidArgument, WrongDegree
from .exact import as_shift, close, re_part

HALF = Fraction(1, 2)


@dataclass
class FEData:
    Q: float
    omega: complex | None
    arch: ag.ArchExpr
    pole_poly_degree: int = 0
    series: object = None
    theta: float | None = None
    sigma_a_claim: float = 1.0

    def __post_init__(self):
        if self.Q is None or self.Q <= 0:
            raise InvalidArgument("Q must be positive")
        if self.pole_poly_degree < 0:
            raise InvalidArgument("pole polynomial degree must be >= 0")

    @classmethod
    def from_series(cls, series, theta=None):
        if series.arch is None or series.conductor is None:
            raise InvalidArgument(f"{series.label}: no functional-equation data")
        m = 0
        if series.completed_poles:
            m = sum(1 for b, _ in series.completed_poles if abs(b - 1) < 1e-12)
        return cls(series.Q, series.omega, series.arch, m, series,
                   theta if theta is not None else series.theta_bound)


@dataclass
class Check:
    status: str
    heuristic: bool = False
    estimate: float | None = None
    witness: object = None
    detail: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == "pass"

    def label(self):
        return ("heuristic-" if self.heuristic else "") + self.status


@dataclass
class AxiomReport:
    g1: Check
    g3: Check
    g4: Check
    js_bound: Check


# ---------------------------------------------------------------- G3

def _absorb(expr):
    """Move polynomial factors into the atoms when that pushes poles left.

    Gamma(z) z = Gamma(z+1) and 1/(Gamma(z) z) = 1/Gamma(z+1); only these
    directions are used, so the result has the leftmost poles available.
    Returns the rewritten atoms and the leftover ratio roots.
    """
    num, den = list(expr.num), list(expr.den)
    rnum, rden = list(expr.ratio.num), list(expr.ratio.den)
    changed = True
    while changed:
        changed = False
        for atoms, roots in ((num, rnum), (den, rden)):
            for i, a in enumerate(atoms):
                pole = -a.mu / a.lam
                j = next((j for j, r in enumerate(roots) if close(r, pole, 1e-9)), None)
                if j is not None:
                    roots.pop(j)
                    atoms[i] = ag.Atom(a.lam, a.mu + 1, a.origin, a.parity)
                    changed = True
    return num, den, rnum, rden


def check_g3(expr):
    num, den, rnum, rden = _absorb(expr)
    worst, witness = -math.inf, None
    for side, atoms in (("num", num), ("den", den)):
        for a in atoms:
            v = float(re_part(-as_shift(a.mu) / as_shift(a.lam)))
            if v > worst:
                worst, witness = v, (side, a)
    bad = [r for r in rden if float(re_part(r)) >= 0.5]
    if bad:
        return Check("fail", estimate=float(re_part(bad[0])), witness=bad[0],
                     detail={"side": "ratio", "re_shift": float(re_part(bad[0]))})
    if worst < 0.5:
        return Check("pass", estimate=worst)
    side, a = witness
    return Check("fail", estimate=worst, witness=a,
                 detail={"side": side, "re_shift": worst})


# ---------------------------------------------------------------- G1 / G4

def check_g1(series, N, claim=1.0):
    """Fit sum_(n<=x) |a_n| ~ x^beta on [N/10, N]; beta estimates sigma_a."""
    a = np.abs(series.coefficients(N))
    S = np.cumsum(a)
    x = np.unique(np.geomspace(max(10, N // 10), N, 24).astype(int))
    y = S[x - 1]
    if np.any(y <= 0):
        return Check("pass", heuristic=True, estimate=-math.inf, detail={"N": N})
    beta = float(np.polyfit(np.log(x), np.log(y), 1)[0])
    beta = max(beta, 0.0)
    ok = beta <= claim + 0.05
    return Check("pass" if ok else "fail", heuristic=True, estimate=beta, detail={"N": N, "claim": claim})


def _log_series(c):
    """Coefficients of log(sum c_k X^k), c_0 = 1."""
    K = len(c) - 1
    b = np.zeros(K + 1, dtype=complex)
    # X d/dX log f = X f'/f: k c_k = sum_(j=1..k) j b_j c_(k-j)
    for k in range(1, K + 1):
        acc = k * c[k]
        for j in range(1, k):
            acc -= j * b[j] * c[k - j]
        b[k] = acc / k
    return b


def log_euler_coeffs(series, p, K):
    return _log_series(np.asarray(series.prime_power_coeffs(p, K), dtype=complex))


def check_g4(series, N, K=48, max_prime=50):
    """theta_p = max over k in [K/2, K] of log(k |b_(p^k)|) / (k log p); theta = max_p theta_p."""
    theta, seen = -math.inf, []
    for p in primerange(2, min(N, max_prime) + 1):
        p = int(p)
        b = log_euler_coeffs(series, p, K)
        ks = np.arange(K // 2, K + 1)
        mag = ks * np.abs(b[ks])
        m = mag > 0
        if not m.any():
            continue
        tp = float(np.max(np.log(mag[m]) / (ks[m] * math.log(p))))
        seen.append((p, tp))
        theta = max(theta, tp)
    if not seen:
        theta = 0.0
    ok = theta < 0.5
    return Check("pass" if ok else "fail", heuristic=True, estimate=max(theta, 0.0),
                 detail={"K": K, "primes": len(seen)})


def check_js(series, N, max_prime=200):
    d = series.degree
    if d is None or d < 1:
        return Check("pass", detail={"checked": 0})
    checked = 0
    for p in primerange(2, min(N, max_prime) + 1):
        p = int(p)
        try:
            roots = series.local_data(p).inverse_roots
        except Exception:
            roots = co.local_factor(series, p).inverse_roots
        bound = co.js_bound(p, d)
        checked += 1
        for r in roots:
            # for n = 1 the bound is 1 and unitary characters attain it
            if abs(r) > bound * (1 + 1e-12) or (d > 1 and abs(r) >= bound):
                return Check("fail", witness=(p, complex(r)), detail={"bound": bound, "checked": checked})
    return Check("pass", detail={"checked": checked})


def axiom_report(fe, N=1000):
    if N < 100:
        raise InvalidArgument("N must be at least 100")
    g3 = check_g3(fe.arch)
    s = fe.series
    if s is None:
        na = Check("pass", heuristic=True, detail={"note": "no coefficients"})
        return AxiomReport(na, g3, na, na)
    return AxiomReport(check_g1(s, N, fe.sigma_a_claim), g3, check_g4(s, N), check_js(s, N))


# ---------------------------------------------------------------- degrees

def _admissible(x):
    return x == 1 or x >= 2


def factorization_partitions(d):
    """Multisets of factor degrees summing to d with every part 1 or >= 2.

    Parts are taken in steps of 1/den(d).  Degree 0 allows only the empty
    product; parts in (0, 1) and (1, 2) are excluded by the classification
    of small degrees.
    """
    d = Fraction(d) if not isinstance(d, float) else Fraction(d).limit_denominator(10 ** 6)
    if d < 0:
        raise InvalidArgument("degree must be nonnegative")
    if d == 0:
        return [()]
    g = Fraction(1, d.denominator)
    out = []

    def rec(rest, top, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        x = min(top, rest)
        while x > 0:
            if _admissible(x):
                rec(rest - x, x, acc + [x])
            x -= g

    rec(d, d, [])
    out.sort(key=lambda p: (len(p), [-x for x in p]))
    return out


def describe_part(x):
    x = Fraction(x)
    if x == 1:
        return "shifted Dirichlet L"
    if x == 2:
        return "degree 2"
    return f"degree {x}"


def describe_partition(parts):
    return [(Fraction(x), describe_part(x)) for x in parts]


def brute_force_partitions(n):
    """Integer partitions of n into parts 1 or >= 2 (i.e. all positive parts), by enumeration."""
    out = set()
    for k in range(1, n + 1):
        for combo in combinations_with_replacement(range(1, n + 1), k):
            if sum(combo) == n:
                out.add(tuple(sorted(combo, reverse=True)))
    return out


# ---------------------------------------------------------------- degree 3

def primitivity_obstruction(fe):
    """Job descriptions that would refute each factorization shape of a degree-3 element.

    Any factorization contains a degree-1 factor L(s+iA, chi), so each shape
    leaves a degree-2 quotient F2 = F / L(s+iA, chi) that must lie in G.
    Showing F2 has infinitely many poles refutes the shape.
    """
    deg = fe.arch.degree()
    if deg != 3:
        raise WrongDegree(f"need degree 3, got {deg}", degree=str(deg))
    label = fe.series.label if fe.series is not None else "F"
    shapes = []
    for parts in factorization_partitions(3):
        if len(parts) < 2:
            continue
        jobs = []
        for eps in (0, 1):
            den = ag.build("gamma_r", eps, parity=eps)
            jobs.append({
                "op": "reduce_quotient",
                "num": fe.arch.label(),
                "den": f"GR({eps})",
                "note": f"arch quotient against chi with chi(-1) = {(-1) ** eps}, A = 0",
                "expr": fe.arch / den,
            })
        jobs.append({
            "op": "quotient_pole_report",
            "num": label,
            "den": "L(s+iA,chi)",
            "note": "zeros of L(s+iA, chi) on re(s)=1/2 where the numerator does not vanish",
        })
        shapes.append({
            "shape": tuple(Fraction(x) for x in parts),
            "factors": describe_partition(parts),
            "quotient": f"{label}/L(s+iA,chi)",
            "quotient_degree": Fraction(2),
            "jobs": jobs,
        })
    return {"degree": Fraction(3), "series": label, "shapes": shapes}
