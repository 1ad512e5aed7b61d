"""Archimedean GL(2) zeta integrals of the K-finite vectors W_n.

For a principal series with characters sgn^e_j |.|^nu_j the integral
Psi(s, W_n) is a positive combination over m = e1 (mod 2) of

    C(n, m) (2 pi)^(-(nu1+nu2+n)/2) pi^(-s) Gamma((s+nu1+m)/2) Gamma((s+nu2+n-m)/2),

and dividing by L = Gamma_R(s+e1+nu1) Gamma_R(s+e2+nu2) leaves a polynomial
of degree (n-e1-e2)/2.  For the discrete series of weight k we use the
K-types n = k, k+2, ... with Psi(s, W_n) = Gamma_C(s + (n-1)/2 + i b3), so
Psi/L = (2 pi)^(-j) (s + (k-1)/2 + i b3)_j with j = (n-k)/2.

Polynomials are coefficient lists in ascending powers of s; coefficients
stay exact (CQ) when the parameters are Gaussian rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arch_gamma as ag
from .errors import InvalidDomain, WrongParity
from .exact import CQ, is_exact
from .gammafn import log_gamma

HALF = Fraction(1, 2)


# ---------------------------------------------------------------- polynomials

def _c(x):
    if is_exact(x):
        return x if isinstance(x, CQ) else CQ(x)
    return complex(x)


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _padd(p, q, scale=1):
    out = list(p) + [0] * max(0, len(q) - len(p))
    for i, b in enumerate(q):
        out[i] = out[i] + scale * b
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and complex(p[-1]) == 0:
        p.pop()
    return p


def poly_eval(p, s):
    s = np.asarray(s, dtype=complex)
    out = np.zeros(s.shape, dtype=complex)
    for a in reversed(p):
        out = out * s + complex(a)
    return out if out.ndim else complex(out)


def _poch_half(shift, j):
    """((s + shift)/2)_j as a polynomial in s."""
    out = [CQ(1)]
    for i in range(j):
        out = _pmul(out, [(shift + 2 * i) * HALF, CQ(HALF)])
    return out


# ---------------------------------------------------------------- reps

def parity(rep):
    if isinstance(rep, ag.DiscreteSeries):
        return rep.k % 2
    return (rep.eps1 + rep.eps2) % 2


def minimal_n(rep):
    if isinstance(rep, ag.DiscreteSeries):
        return rep.k
    return rep.eps1 + rep.eps2


def _check(rep, n):
    if n < 0 or int(n) != n:
        raise WrongParity("n must be a nonnegative integer")
    if n % 2 != parity(rep):
        raise WrongParity(f"W_{n} does not occur: n must be {parity(rep)} mod 2", n=n)
    if isinstance(rep, ag.DiscreteSeries) and n < rep.k:
        raise WrongParity(f"discrete series of weight {rep.k} has no K-type {n}", n=n)


def contragredient(rep):
    if isinstance(rep, ag.DiscreteSeries):
        return ag.DiscreteSeries(rep.k, -rep.b3)
    return ag.PrincipalSeries(rep.eps1, rep.eps2, -rep.nu, -rep.b1, -rep.b2)


# ---------------------------------------------------------------- Psi / L

def q_poly(rep, n):
    """(poly, prefactor) with Psi(s, W_n) = prefactor * poly(s) * L(s, rep), poly monic."""
    _check(rep, n)
    if isinstance(rep, ag.DiscreteSeries):
        j = (n - rep.k) // 2
        a = _c(rep.shift)
        p = [CQ(1)]
        for i in range(j):
            p = _pmul(p, [a + i, CQ(1)])
        return p, (2 * math.pi) ** (-j)
    e1, e2 = rep.eps1, rep.eps2
    n1, n2 = _c(rep.nu1), _c(rep.nu2)
    total = [0]
    for m in range(e1, n + 1, 2):
        if (n - m) % 2 != e2:
            continue
        term = _pmul(_poch_half(n1 + e1, (m - e1) // 2), _poch_half(n2 + e2, (n - m - e2) // 2))
        total = _padd(total, term, math.comb(n, m))
    total = _trim(total)
    lead = total[-1]
    poly = [_c(x / lead) for x in total]
    nn = complex(n1) + complex(n2)
    pref = (2 * math.pi) ** (-(nn + n) / 2) * math.pi ** ((e1 + e2 + nn) / 2) * complex(lead)
    return poly, complex(pref)


def psi(rep, n, s):
    """Psi(s, W_n) summed directly from gamma values, independent of q_poly."""
    _check(rep, n)
    s = np.asarray(s, dtype=complex)
    if isinstance(rep, ag.DiscreteSeries):
        b = complex(rep.shift) + (n - rep.k) / 2
        return ag.eval_arch(ag.build("gamma_c", b), s)
    n1, n2 = complex(rep.nu1), complex(rep.nu2)
    out = np.zeros(s.shape, dtype=complex)
    for m in range(rep.eps1, n + 1, 2):
        lg = (-(n1 + n2 + n) / 2 * math.log(2 * math.pi) - s * math.log(math.pi)
              + log_gamma((s + n1 + m) / 2) + log_gamma((s + n2 + n - m) / 2))
        out = out + math.comb(n, m) * np.exp(lg)
    return out if out.ndim else complex(out)


@dataclass
class WhittakerCoeffs:
    """W = sum_n c_n W_n."""
    rep: object
    entries: dict = field(default_factory=dict)

    def psi(self, s):
        return sum(c * psi(self.rep, n, s) for n, c in sorted(self.entries.items()))

    def ratio(self, s):
        """Psi(s, W) / L(s, rep), assembled from the q_poly basis."""
        out = 0
        for n, c in sorted(self.entries.items()):
            p, pref = q_poly(self.rep, n)
            out = out + c * pref * poly_eval(p, s)
        return out


def test_vector(rep, P):
    """Coefficients c_n with Psi(s, W(P)) = P(s) L(s, rep); P ascending in s."""
    P = _trim([_c(x) for x in P]) or [0]
    n0 = minimal_n(rep)
    basis = [q_poly(rep, n0 + 2 * j) for j in range(len(P))]
    rem = list(P)
    b = [0] * len(P)
    for j in range(len(P) - 1, -1, -1):
        p, _ = basis[j]
        b[j] = rem[j]
        if complex(b[j]) != 0:
            rem = _padd(rem, p, -b[j])
    out = {}
    for j, (_, pref) in enumerate(basis):
        if complex(b[j]) != 0:
            out[n0 + 2 * j] = complex(b[j]) / pref
    if not out:
        out[n0] = 0j
    return WhittakerCoeffs(rep, out)


test_vector.__test__ = False  # not a pytest test


def residual(wc, P, s):
    """max relative |Psi(s, W) - P(s) L(s)| over the points s, Psi from gamma sums."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    L = wc.rep.l_factor()
    lhs = np.asarray(wc.psi(s))
    rhs = poly_eval(list(P), s) * L(s)
    return float(np.max(np.abs(lhs - rhs) / (np.abs(rhs) + 1e-300)))


# ---------------------------------------------------------------- L and epsilon

def gl2_l_and_eps(rep, eps_chi=0):
    """Archimedean L-factor of rep twisted by sgn^eps_chi, and the epsilon constant."""
    if eps_chi not in (0, 1):
        raise InvalidDomain("eps_chi must be 0 or 1")
    L = rep.l_factor(eps_chi)
    if isinstance(rep, ag.DiscreteSeries):
        return L, 1j ** (rep.k % 4)
    return L, 1j ** ((rep.eps1 + rep.eps2) % 4)


# ---------------------------------------------------------------- Bessel

def mellin_bessel_check(nu, s, tol=1e-10):
    """Double integral of e^(-a(t+1/t)/2) t^nu a^s against d*t d*a, and 2^(s-2) Gamma Gamma.

    The multiplicative measure on t is dt/(2t), the image of dx/x under
    t = x^2; with dt/t the integral is twice as large.
    """
    from scipy.integrate import dblquad

    nu, s = complex(nu), complex(s)
    if not s.real > abs(nu.real):
        raise InvalidDomain("need re(s) > |re(nu)|", nu=nu, s=s)
    # u = log t, v = log a; the mass sits in v < log(60), |u| < U, v > -|u| - X
    gap = s.real - abs(nu.real)
    U = 40.0 / gap + 5
    lo_v = -U - 40.0 / s.real

    def f(u, v):
        return np.exp(-np.exp(v) * np.cosh(u) + nu * u + s * v)

    kw = dict(epsabs=tol, epsrel=tol)
    re_, _ = dblquad(lambda u, v: f(u, v).real, lo_v, math.log(60.0), -U, U, **kw)
    im_, _ = dblquad(lambda u, v: f(u, v).imag, lo_v, math.log(60.0), -U, U, **kw) if (nu.imag or s.imag) else (0.0, 0)
    lhs = complex(re_, im_) / 2
    rhs = complex(np.exp((s - 2) * math.log(2) + log_gamma((s + nu) / 2) + log_gamma((s - nu) / 2)))
    return lhs, rhs
