"""Completed L-values by the smoothed split integral.

For a series with Lambda(s) = Q^s gamma(s) F(s) = omega Lambda~(1-s) and
finitely many simple poles beta, and any complex alpha,

    Lambda(s) = e^(-alpha s) 1/(2 pi i) int_(c)  Lambda(w)  e^(alpha w) / (w - s) dw
              + omega e^(alpha (1-s)) 1/(2 pi i) int_(c') Lambda~(u) e^(-alpha u) / (u - (1-s)) du
              - sum_beta r_beta e^(alpha (beta - s)) / (beta - s).

Expanding Lambda(w) = gamma(w) sum a_n (n/Q)^(-w) inside the integral gives
the incomplete kernels; the sum over n converges because each per-n
integral decays in n.  Both integrals are done by the trapezoid rule on
the vertical lines.  alpha = log A - i theta rotates the kernel so that
values high on the critical line do not drown in cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import arch_gamma as ag
from .errors import ContourError, MissingFEData, PoleAtPoint, TailTooLarge, UnsupportedKernel, UnsupportedScan
from .gammafn import log_gamma  # noqa: F401  (public re-export)

ROTATION_MARGIN = 8.0
CERTIFY_MARGIN = 1e-4
MAX_AUTO_N = 1 << 14


@dataclass(frozen=True)
class QuadratureSpec:
    """Trapezoid parameters.  c and T are chosen automatically when None."""
    c: float | None = None
    h: float = 0.05
    T: float | None = None
    target_error: float = 1e-12
    max_nodes: int = 400_000


DEFAULT = QuadratureSpec()


@dataclass(frozen=True)
class PoleEntry:
    t: float
    den_zero_order: int
    num_abs: float
    certified: bool
    scale: float = 0.0


@dataclass(frozen=True)
class PoleReport:
    entries: tuple = ()
    margin: float = CERTIFY_MARGIN
    t_range: tuple = (0.0, 0.0)

    @property
    def poles(self):
        return [e for e in self.entries if e.certified]

    def __len__(self):
        return len(self.entries)


# ---------------------------------------------------------------- vertical lines

def _threshold(target):
    return -math.log(target) + 18.0


def _envelope(arch, c, rot):
    """log |gamma(c+it) e^(rot (c+it))| as a function of t."""
    def env(t):
        w = c + 1j * np.asarray(t, dtype=float)
        return np.real(ag.log_eval_arch(arch, w) + rot * w)
    return env


def _line_span(arch, c, rot, target, T=None):
    """The t-interval outside which the integrand is negligible."""
    if T is not None:
        return -float(T), float(T)
    env = _envelope(arch, c, rot)
    thr = _threshold(target)
    X = 64.0
    while True:
        t = np.arange(-X, X + 0.25, 0.5)
        e = env(t)
        top = e.max()
        if e[0] < top - thr and e[-1] < top - thr:
            break
        if X > 2e5:
            raise ContourError("integrand does not decay on the contour", c=c)
        X *= 2
    keep = np.nonzero(e >= top - thr)[0]
    return float(t[keep[0]] - 1.0), float(t[keep[-1]] + 1.0)


def _nodes(arch, c, rot, q, T=None):
    lo, hi = _line_span(arch, c, rot, q.target_error, T)
    n = int(math.ceil((hi - lo) / q.h)) + 1
    if n > q.max_nodes:
        raise ContourError(f"contour needs {n} nodes (max {q.max_nodes})", nodes=n)
    t = lo + q.h * np.arange(n)
    w = c + 1j * t
    with np.errstate(over="ignore", under="ignore"):
        g = np.exp(ag.log_eval_arch(arch, w) + rot * w) * (q.h / (2 * math.pi))
    return w, g


def _dirichlet_block(a, logs, w):
    """sum_n a_n (n/Q)^(-w) on the nodes, for a chunk of n."""
    out = np.zeros(w.shape, dtype=complex)
    step = 256
    for i in range(0, len(a), step):
        aa, ll = a[i:i + step], logs[i:i + step]
        out += aa @ np.exp(-np.outer(ll, w))
    return out


def _dirichlet_grid(a, logs, c, t0, h, m):
    """_dirichlet_block on the grid w_j = c + i(t0 + j h), j < m.

    With j = B k + r, n^(-w_j) splits into a factor in r and a factor in k,
    so only n (B + K) exponentials are needed and the rest is a matrix product.
    """
    B = max(1, int(math.isqrt(m)))
    K = -(-m // B)
    out = np.zeros((B, K), dtype=complex)
    step = 512
    for i in range(0, len(a), step):
        aa, ll = a[i:i + step], logs[i:i + step]
        base = aa * np.exp(-ll * complex(c, t0))
        rows = np.exp(-1j * h * np.outer(np.arange(B), ll)) * base[None, :]
        cols = np.exp(-1j * h * B * np.outer(ll, np.arange(K)))
        out += rows @ cols
    return out.T.ravel()[:m]


def _apply(b, w, s):
    """sum_j b_j / (w_j - s_k) for every s_k."""
    out = np.empty(len(s), dtype=complex)
    step = max(1, 2_000_000 // max(1, len(w)))
    for i in range(0, len(s), step):
        out[i:i + step] = b @ (1.0 / (w[:, None] - s[None, i:i + step]))
    return out


# ---------------------------------------------------------------- kernels

def _closed_kernel(arch, y, s):
    """Incomplete-gamma form for a lone Gamma_R(w+a) or Gamma_C(w+a), else None."""
    import mpmath

    if len(arch.num) != 1 or arch.den:
        return None
    a = arch.num[0]
    if a.origin == "R":
        if arch != ag.build("gamma_r", a.shift, parity=a.parity):
            return None
    elif a.origin == "C":
        if arch != ag.build("gamma_c", a.shift):
            return None
    else:
        return None
    sh = complex(a.shift)
    z = complex(s) + sh
    if a.origin == "R":
        X = math.pi * y * y
        v = mpmath.power(X, -z / 2) * mpmath.gammainc(z / 2, X)
    else:
        X = 2 * math.pi * y
        v = 2 * mpmath.power(X, -z) * mpmath.gammainc(z, X)
    return complex(v) * y ** sh


def _saddle(arch, y, c0):
    """Real point where gamma(c) y^(-c) is smallest; the contour through it avoids cancellation."""
    def slope(c):
        e = 1e-5
        v = ag.log_eval_arch(arch, np.array([c - e, c + e], dtype=complex)).real
        return (v[1] - v[0]) / (2 * e) - math.log(y)
    if slope(c0) >= 0:
        return c0
    hi = c0 + 1
    while slope(hi) < 0:
        hi = c0 + 2 * (hi - c0)
        if hi > 1e6:
            return c0
    return brentq(slope, c0, hi, xtol=1e-6)


def incomplete_kernel(arch, y, s, q=DEFAULT, method="auto"):
    """(1/2 pi i) int_(c) gamma(w) y^(-w) / (w - s) dw.

    method: 'auto' uses the incomplete-gamma closed form for a single
    Gamma_R or Gamma_C, 'closed' insists on it, 'quad' forces quadrature.
    """
    if arch.den:
        raise UnsupportedKernel("kernel needs a gamma factor without denominator atoms")
    if y <= 0:
        raise ContourError("y must be positive")
    s = complex(s)
    c = q.c if q.c is not None else max(s.real, arch.pole_abscissa()) + 1 + float(arch.degree()) / 4
    if c <= s.real:
        raise ContourError(f"contour re(w) = {c} must lie right of re(s) = {s.real}")
    if c <= arch.pole_abscissa():
        raise ContourError("contour must lie right of the gamma poles")
    if method in ("auto", "closed"):
        v = _closed_kernel(arch, y, s)
        if v is not None:
            return v
        if method == "closed":
            raise UnsupportedKernel("no closed form for this gamma factor")
    if q.c is None:
        c = max(c, _saddle(arch, y, c))
    w, g = _nodes(arch, c, 0.0, q, q.T)
    return complex(np.sum(g * np.exp(-w * math.log(y)) / (w - s)))


# ---------------------------------------------------------------- completed values

def _check_fe(series):
    if series.arch is None or series.conductor is None:
        raise MissingFEData(f"{series.label}: archimedean factor or conductor unknown")
    if series.omega is None:
        raise MissingFEData(f"{series.label}: root number unknown")
    if series.completed_poles is None:
        raise MissingFEData(f"{series.label}: poles of the completed function unknown")
    if series.arch.degree() <= 0:
        raise MissingFEData(f"{series.label}: completed function needs positive degree")


def _rotation(d, t_ref, sign):
    if sign == 0:
        return 0.0
    return sign * max(0.0, math.pi * d / 4 - ROTATION_MARGIN / max(t_ref, 1e-300))


def _contour(arch, sre, poles_re, q):
    base = max([sre, 1.0, arch.pole_abscissa()] + list(poles_re))
    if q.c is not None:
        c = max(q.c, base + 0.5)
    else:
        c = base + 1 + float(arch.degree()) / 4
    return c


class _Side:
    """One vertical-line integral with coefficients accumulated on demand."""

    def __init__(self, series, arch, c, rot, q, s_arr):
        self.series = series
        self.w, self.g = _nodes(arch, c, rot, q, q.T)
        self.c, self.t0 = c, float(self.w[0].imag)
        self.h = q.h
        self.s = s_arr
        self.b = np.zeros(self.w.shape, dtype=complex)
        self.n = 0
        self.logQ = math.log(series.Q)

    def _chunk(self, n0, n1):
        a = self.series.coefficients(n1)[n0:n1]
        logs = np.log(np.arange(n0 + 1, n1 + 1)) - self.logQ
        return self.g * _dirichlet_grid(a, logs, self.c, self.t0, self.h, len(self.w))

    def extend(self, N):
        if N > self.n:
            self.b += self._chunk(self.n, N)
            self.n = N

    def value(self):
        return _apply(self.b, self.w, self.s)

    def peek(self, N):
        """Contribution of n in (self.n, N] without keeping it."""
        return _apply(self._chunk(self.n, N), self.w, self.s)


def _eval_group(series, dual, s, N, q, t_ref, sign, split):
    d = float(series.arch.degree())
    theta = _rotation(d, t_ref, sign)
    alpha = complex(math.log(split), -theta)
    poles = series.completed_poles
    c1 = _contour(series.arch, float(s.real.max()), [b.real for b, _ in poles], q)
    c2 = _contour(dual.arch, float((1 - s).real.max()), [1 - b.real for b, _ in poles], q)
    one = _Side(series, series.arch, c1, alpha, q, s)
    two = _Side(dual, dual.arch, c2, -alpha, q, 1 - s)
    f1 = np.exp(-alpha * s)
    f2 = series.omega * np.exp(alpha * (1 - s))
    corr = np.zeros(len(s), dtype=complex)
    for beta, r in poles:
        corr += r * np.exp(alpha * (beta - s)) / (beta - s)
    target = q.target_error

    def tail_ok(n0, n1, v1, v2):
        one.n, two.n = n0, n0
        t1 = np.abs(f1 * one.peek(n1))
        t2 = np.abs(f2 * two.peek(n1))
        scale = np.abs(f1 * v1) + np.abs(f2 * v2) + np.abs(corr) + 1e-300
        return bool(np.all(t1 + t2 <= target * scale)), float(np.max((t1 + t2) / scale))

    if N is not None:
        one.extend(N)
        two.extend(N)
        ok, ratio = tail_ok(N, 2 * N, one.value(), two.value())
        if not ok:
            raise TailTooLarge(f"N = {N} leaves relative tail {ratio:.2e}", suggested_N=_suggest(series, dual, N, q, s, t_ref, sign, split))
        one.n = two.n = N
    else:
        N = 16
        while True:
            one.extend(N)
            two.extend(N)
            v1, v2 = one.value(), two.value()
            ok, ratio = tail_ok(N, 2 * N, v1, v2)
            one.n = two.n = N
            if ok:
                break
            if 2 * N > MAX_AUTO_N:
                raise TailTooLarge(f"tail still {ratio:.2e} at N = {2 * N}", suggested_N=4 * N)
            N *= 2
        # keep the checked tail chunk too
        one.extend(2 * N)
        two.extend(2 * N)
    return f1 * one.value() + f2 * two.value() - corr


def _suggest(series, dual, N, q, s, t_ref, sign, split):
    n = 2 * N
    while n <= MAX_AUTO_N:
        try:
            _eval_group(series, dual, s, n, q, t_ref, sign, split)
            return n
        except TailTooLarge:
            n *= 2
    return n


def completed_eval(series, s, N=None, q=DEFAULT, split=1.0):
    """Lambda(s) for a scalar or an array of s.

    N=None picks the number of terms automatically; an explicit N is
    checked and raises TailTooLarge (with a suggestion) when the tail
    exceeds q.target_error relative to the size of the terms.
    split is |A|, the real part of the split parameter; the value of
    Lambda does not depend on it, which fe_residual exploits.
    """
    _check_fe(series)
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex)).ravel()
    for beta, _ in series.completed_poles:
        if np.any(np.abs(s_arr - beta) < 1e-12):
            raise PoleAtPoint(f"{series.label} has a pole at {beta}", point=beta)
    dual = series.dual()
    out = np.empty(len(s_arr), dtype=complex)
    for sign in (-1, 0, 1):
        idx = np.nonzero(np.sign(s_arr.imag) == sign)[0]
        if idx.size == 0:
            continue
        t_ref = float(np.abs(s_arr.imag[idx]).max())
        out[idx] = _eval_group(series, dual, s_arr[idx], N, q, t_ref, sign, split)
    return complex(out[0]) if scalar else out.reshape(np.shape(s))


def fe_residual(series, s, N=None, q=DEFAULT):
    """Relative mismatch of Lambda(s) and omega Lambda~(1-s), computed with different splits.

    Accepts an array of s; the points then share the contour sums.
    """
    _check_fe(series)
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    lam = completed_eval(series, s, N, q, split=1.0)
    dual = completed_eval(series.dual(), 1 - s, N, q, split=1.25)
    r = np.abs(lam - series.omega * dual) / (np.abs(lam) + np.abs(dual) + 1e-30)
    return float(r) if scalar else r


# ---------------------------------------------------------------- critical line

def _rotator(series):
    if series.omega is None:
        raise UnsupportedScan(f"{series.label}: root number unknown")
    if abs(abs(series.omega) - 1) > 1e-9:
        raise UnsupportedScan(f"{series.label}: |omega| != 1")
    try:
        _check_fe(series)
    except MissingFEData as e:
        raise UnsupportedScan(str(e)) from None
    return complex(series.omega) ** -0.5


def hardy_z(series, t, N=None, q=DEFAULT):
    """The real function Re(Lambda(1/2+it) omega^(-1/2))."""
    rot = _rotator(series)
    t = np.asarray(t, dtype=float)
    v = completed_eval(series, 0.5 + 1j * t, N, q)
    return np.real(v * rot)


def _grid(t0, t1, step):
    n = max(1, int(math.ceil((t1 - t0) / step - 1e-9)))
    return np.linspace(t0, t1, n + 1)


def _refine(series, a, b, za, zb, q, tol):
    f = lambda t: float(hardy_z(series, t, q=q))
    if za == 0:
        return a
    return brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps)


def scan_zeros(series, t0, t1, step=0.01, q=DEFAULT, tol=1e-7):
    """Zero ordinates in [t0, t1] from sign changes of the rotated function."""
    if t1 < t0:
        t0, t1 = t1, t0
    _rotator(series)
    t = _grid(t0, t1, step)
    z = hardy_z(series, t, q=q)
    return _zeros_from_grid(series, t, z, q, tol)


def _zeros_from_grid(series, t, z, q, tol):
    out = []
    for i in range(len(t) - 1):
        if z[i] == 0:
            out.append(float(t[i]))
        elif z[i] * z[i + 1] < 0:
            out.append(float(_refine(series, t[i], t[i + 1], z[i], z[i + 1], q, tol)))
    if len(t) and z[-1] == 0:
        out.append(float(t[-1]))
    return out


def quotient_pole_report(num, den, t0, t1, step=0.01, margin=CERTIFY_MARGIN, window=1.0, q=DEFAULT):
    """Zeros of den on the critical line at which num does not vanish.

    Each zero of den found by a sign change is reported with |Lambda_num|
    there, and certified as a pole of num/den when that exceeds margin
    times the largest |Lambda_num| within +-window of the zero.
    """
    if t1 < t0:
        t0, t1 = t1, t0
    zeros = scan_zeros(den, t0, t1, step, q)
    entries = []
    for t in zeros:
        g = _grid(t - window, t + window, step)
        vals = np.abs(completed_eval(num, 0.5 + 1j * g, q=q))
        here = abs(completed_eval(num, 0.5 + 1j * t, q=q))
        scale = float(vals.max())
        entries.append(PoleEntry(t=t, den_zero_order=1, num_abs=float(here),
                                 certified=bool(here > margin * scale), scale=scale))
    return PoleReport(tuple(entries), margin, (t0, t1))
