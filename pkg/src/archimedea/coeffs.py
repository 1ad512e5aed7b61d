"""Dirichlet coefficient providers with Euler products and functional-equation data.

A series carries its coefficients (assembled multiplicatively from local
factors, or by convolution for products and quotients) together with
whatever is known about its completion Lambda(s) = Q^s gamma(s) F(s):
the conductor N (Q = sqrt(N)), the root number, the archimedean factor and
the poles of Lambda.  Unknown pieces are None.
"""
from __future__ import annotations

import logging
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import primerange

from . import arch_gamma as ag
from .characters import DirichletCharacter, gauss_sum
from .errors import InvalidArgument, NonInvertible, UnsupportedTwist

log = logging.getLogger(__name__)

BLOCK = 4096
DELTA_WEIGHT = 12


# ---------------------------------------------------------------- tau(n)

@lru_cache(maxsize=4)
def _tau_block(N):
    import flint

    P = [0] * (N + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= N:
                P[e] = 1 if kk % 2 == 0 else -1
                hit = True
        if not hit:
            break
        k += 1
    p = flint.fmpz_poly(P)
    mul = lambda a, b: a.mul_low(b, N + 1)
    p2 = mul(p, p)
    p4 = mul(p2, p2)
    p8 = mul(p4, p4)
    p16 = mul(p8, p8)
    c = mul(p16, p8).coeffs()
    c += [0] * (N + 1 - len(c))
    return tuple(int(x) for x in c[:N])


def ramanujan_tau(N):
    """[tau(1), ..., tau(N)] from the q-expansion of q prod (1 - q^n)^24."""
    if N < 1:
        return []
    size = BLOCK
    while size < N:
        size *= 2
    return list(_tau_block(size)[:N])


def _tau(n):
    size = BLOCK
    while size < n:
        size *= 2
    return _tau_block(size)[n - 1]


# ---------------------------------------------------------------- local factors

@dataclass(frozen=True)
class LocalFactor:
    """prod (1 - zeta p^-s) / prod (1 - alpha p^-s)."""
    prime: int
    inverse_roots: tuple
    zeros: tuple = ()
    js_bound_ok: bool = True

    def series(self, K):
        """Coefficients of p^(-ks), k = 0..K."""
        out = np.zeros(K + 1, dtype=complex)
        out[0] = 1
        # 1/prod(1 - a x) by repeated geometric multiplication
        for a in self.inverse_roots:
            for k in range(1, K + 1):
                out[k] += a * out[k - 1]
        for z in self.zeros:
            out[1:] = out[1:] - z * out[:-1]
        return out


def js_bound(p, n):
    """The unitary bound p^(1/2 - 1/(n^2+1)) for inverse roots."""
    return p ** (0.5 - 1.0 / (n * n + 1))


# ---------------------------------------------------------------- series

class CoefficientSeries:

    def __init__(self, label, *, local=None, coeff_fn=None, pp_fn=None, arch=None, conductor=None,
                 omega=None, poles=None, theta_bound=0.0, central_character=None, degree=None,
                 real=False):
        self.label = label
        self._local = local
        self._coeff_fn = coeff_fn
        self._pp_fn = pp_fn
        self.arch = arch
        self.conductor = conductor
        self.omega = None if omega is None else complex(omega)
        self.completed_poles = None if poles is None else tuple((complex(b), complex(r)) for b, r in poles)
        self.theta_bound = theta_bound
        self.central_character = central_character
        self.degree = degree if degree is not None else (int(arch.degree()) if arch is not None else None)
        self.real = real
        self._memo = np.zeros(0, dtype=complex)
        self._lock = threading.Lock()

    @property
    def Q(self):
        return None if self.conductor is None else math.sqrt(self.conductor)

    @property
    def has_fe(self):
        return (self.arch is not None and self.conductor is not None and self.omega is not None
                and self.completed_poles is not None)

    def coefficients(self, N):
        """a_1..a_N as a complex array (index 0 is a_1)."""
        if len(self._memo) < N:
            with self._lock:
                if len(self._memo) < N:
                    size = -(-N // BLOCK) * BLOCK
                    self._memo = self._compute(size)
        return self._memo[:N]

    def _compute(self, N):
        if self._coeff_fn is not None:
            a = np.asarray(self._coeff_fn(N), dtype=complex)
        else:
            a = _assemble(self.local_data, N)
        a.setflags(write=False)
        return a

    def local_data(self, p):
        if self._local is None:
            raise InvalidArgument(f"{self.label} has no Euler data")
        return self._local(p)

    def prime_power_coeffs(self, p, K):
        """a_(p^k), k = 0..K from the Euler structure, without building the full array."""
        if self._pp_fn is not None:
            return self._pp_fn(p, K)
        if self._local is not None:
            return self._local(p).series(K)
        N = p ** K
        a = self.coefficients(N)
        return np.concatenate([[1], a[[p ** k - 1 for k in range(1, K + 1)]]])

    def dual(self):
        """Coefficients conj(a_n); archimedean data conjugated."""
        if self.real:
            return self
        base = self
        d = CoefficientSeries(
            f"dual({self.label})", coeff_fn=lambda N: np.conj(base.coefficients(N)),
            pp_fn=lambda p, K: np.conj(base.prime_power_coeffs(p, K)),
            arch=None if self.arch is None else self.arch.conjugate(), conductor=self.conductor,
            omega=None if self.omega is None else self.omega.conjugate(),
            poles=None if self.completed_poles is None else [(b.conjugate(), r.conjugate()) for b, r in self.completed_poles],
            theta_bound=self.theta_bound, degree=self.degree)
        return d

    def __repr__(self):
        return f"CoefficientSeries({self.label!r})"


def _assemble(local, N):
    """Multiplicative coefficients up to N from local factors."""
    a = np.ones(N, dtype=complex)
    for p in primerange(2, N + 1):
        p = int(p)
        K = int(math.log(N, p) + 1e-9)
        while p ** (K + 1) <= N:
            K += 1
        h = local(p).series(K)
        if K == 1:
            a[p - 1::p] *= h[1]
            continue
        idx = np.arange(p, N + 1, p)
        m = idx.copy()
        v = np.zeros(len(idx), dtype=np.int64)
        while True:
            div = m % p == 0
            if not div.any():
                break
            v[div] += 1
            m[div] //= p
        a[idx - 1] *= h[v]
    return a


def dirichlet_coeffs(series, N):
    """a_1..a_N (memoized in blocks of 4096)."""
    if N < 1:
        raise InvalidArgument("N must be positive")
    return series.coefficients(N)


# ---------------------------------------------------------------- built-in series

_TRIVIAL = DirichletCharacter(1)


def zeta():
    return CoefficientSeries(
        "zeta", local=lambda p: LocalFactor(p, (1.0,)), coeff_fn=lambda N: np.ones(N, dtype=complex),
        arch=ag.build("gamma_r", 0), conductor=1, omega=1, poles=[(1, 1), (0, -1)],
        central_character=_TRIVIAL, real=True)


def dirichlet_l(chi):
    """L(s, chi); functional-equation data only for primitive chi."""
    q = chi.modulus
    vals = chi.values()

    def local(p):
        return LocalFactor(p, () if q % p == 0 else (vals[p % q],))

    def cf(N):
        return vals[np.arange(1, N + 1) % q]

    prim = chi.is_primitive
    if prim:
        from .characters import eps_global
        omega = eps_global(chi).r
    real = chi.order <= 2
    return CoefficientSeries(
        f"L(chi_{q}_{chi.index()})", local=local, coeff_fn=cf,
        arch=ag.build("gamma_r", chi.parity, parity=chi.parity) if prim else None,
        conductor=q if prim else None, omega=omega if prim else None,
        poles=([(1, 1), (0, -1)] if chi.is_trivial else []) if prim else None,
        central_character=chi, real=real)


def _delta_ap(p):
    return _tau(p) / p ** ((DELTA_WEIGHT - 1) / 2)


def _satake(ap):
    d = max(0.0, 4 - ap * ap)
    return complex(ap / 2, math.sqrt(d) / 2)


def delta():
    """Normalized Ramanujan Delta: a(n) = tau(n)/n^(11/2)."""
    def local(p):
        al = _satake(_delta_ap(p))
        return LocalFactor(p, (al, al.conjugate()))

    def cf(N):
        t = np.array(ramanujan_tau(N), dtype=float)
        return t / np.arange(1, N + 1) ** 5.5

    return CoefficientSeries(
        "delta", local=local, coeff_fn=cf, arch=ag.build("gamma_c", Fraction(11, 2)),
        conductor=1, omega=1j ** DELTA_WEIGHT, poles=[], central_character=_TRIVIAL, real=True)


def sym_power_arch(m, k=DELTA_WEIGHT):
    """Archimedean factor of sym^m of a level-one weight-k eigenform."""
    w = Fraction(k - 1, 2)
    if m % 2:
        out = ag.ArchExpr()
        for j in range((m + 1) // 2):
            out = out * ag.build("gamma_c", (m - 2 * j) * w)
        return out
    e = (m // 2 * (k - 1)) % 2
    out = ag.build("gamma_r", e, parity=e)
    for j in range(m // 2):
        out = out * ag.build("gamma_c", (m - 2 * j) * w)
    return out


def sym_power_delta(m):
    """L(s, sym^m Delta) for 0 <= m <= 4.  Root number known only for m <= 2."""
    if m not in range(5):
        raise InvalidArgument("m must be in 0..4")
    if m == 0:
        return zeta()
    if m == 1:
        return delta()

    def local(p):
        al = _satake(_delta_ap(p))
        return LocalFactor(p, tuple(al ** (m - 2 * j) for j in range(m + 1)))

    omega = 1 if m == 2 else None
    return CoefficientSeries(
        f"sym{m}delta", local=local, arch=sym_power_arch(m), conductor=1, omega=omega,
        poles=[], central_character=_TRIVIAL, real=True)


# ---------------------------------------------------------------- operations

def _twist_root_number(series, chi):
    """Root number of series x chi for primitive chi unramified for the series."""
    q = chi.modulus
    N = series.conductor
    d = series.degree
    psi = series.central_character or _TRIVIAL
    w = series.omega * psi(q) * chi(N) * (gauss_sum(chi) / math.sqrt(q)) ** d
    if chi.parity:
        # each Gamma_R atom changes parity; the archimedean epsilon i^eps enters inversely
        for a in series.arch.num:
            if a.origin == "R":
                w *= -1j if (a.parity or 0) == 0 else 1j
    return complex(w)


def twist(series, chi):
    """Coefficients a_n chi(n).  FE data is propagated only for primitive chi
    coprime to the conductor, otherwise marked unknown."""
    q = chi.modulus
    vals = chi.values()
    base = series

    def cf(N):
        return base.coefficients(N) * vals[np.arange(1, N + 1) % q]

    def pp(p, K):
        c = base.prime_power_coeffs(p, K)
        return c * (vals[p % q] ** np.arange(K + 1)) if q % p else np.concatenate([[1], np.zeros(K)])

    local = None
    if series._local is not None:
        def local(p):
            lf = base.local_data(p)
            c = vals[p % q]
            if q % p == 0:
                return LocalFactor(p, ())
            return LocalFactor(p, tuple(a * c for a in lf.inverse_roots), tuple(z * c for z in lf.zeros))

    arch = conductor = omega = poles = None
    cc = None
    if (series.has_fe and chi.is_primitive and math.gcd(q, int(round(series.conductor))) == 1
            and series.degree is not None):
        try:
            arch = ag.twist_parity(series.arch, chi.parity)
        except UnsupportedTwist:
            arch = None
        if arch is not None:
            conductor = series.conductor * q ** series.degree
            omega = _twist_root_number(series, chi)
            poles = list(series.completed_poles) if chi.is_trivial else []
            psi = series.central_character or _TRIVIAL
            cc = psi * _power(chi, series.degree)
    real = series.real and chi.order <= 2
    return CoefficientSeries(
        f"{series.label}x{chi.modulus}_{chi.index()}", local=local, coeff_fn=cf, pp_fn=pp, arch=arch,
        conductor=conductor, omega=omega, poles=poles, theta_bound=series.theta_bound,
        central_character=cc, degree=series.degree, real=real)


def _power(chi, d):
    out = DirichletCharacter(chi.modulus)
    for _ in range(d):
        out = out * chi
    return out


def _convolve(a, b):
    N = len(a)
    c = np.zeros(N, dtype=complex)
    for d in range(1, N + 1):
        if a[d - 1] != 0:
            m = N // d
            c[d - 1::d] += a[d - 1] * b[:m]
    return c


def _inverse(b):
    N = len(b)
    if b[0] == 0:
        raise NonInvertible("a_1 = 0")
    inv = np.zeros(N, dtype=complex)
    acc = np.zeros(N, dtype=complex)
    b1 = b[0]
    for n in range(1, N + 1):
        val = (1 if n == 1 else 0) - acc[n - 1]
        inv[n - 1] = val / b1
        if inv[n - 1] != 0:
            m = N // n
            if m >= 2:
                # n * d for d >= 2
                acc[2 * n - 1::n] += b[1:m] * inv[n - 1]
    return inv


def _pp_convolve(u, v):
    return np.convolve(u, v)[: len(u)]


def _pp_inverse(v):
    K = len(v) - 1
    out = np.zeros(K + 1, dtype=complex)
    out[0] = 1 / v[0]
    for k in range(1, K + 1):
        out[k] = -np.dot(v[1:k + 1], out[k - 1::-1][:k]) / v[0]
    return out


def combine(s1, s2, op="product", primes=None):
    """product (Dirichlet convolution), quotient (formal inverse), or partial.

    op='partial' deletes the Euler factors of s1 at the given primes; s2 is ignored.
    """
    if op == "partial":
        if primes is None:
            raise InvalidArgument("partial needs a prime set")
        return partial(s1, primes)
    if op not in ("product", "quotient"):
        raise InvalidArgument(f"unknown op {op!r}")
    if op == "quotient" and abs(s2.coefficients(1)[0]) == 0:
        raise NonInvertible("the divisor has a_1 = 0")
    if op == "product":
        cf = lambda N: _convolve(s1.coefficients(N), s2.coefficients(N))
        pp = lambda p, K: _pp_convolve(s1.prime_power_coeffs(p, K), s2.prime_power_coeffs(p, K))
    else:
        cf = lambda N: _convolve(s1.coefficients(N), _inverse(s2.coefficients(N)))
        pp = lambda p, K: _pp_convolve(s1.prime_power_coeffs(p, K), _pp_inverse(s2.prime_power_coeffs(p, K)))
    local = None
    if s1._local is not None and s2._local is not None:
        if op == "product":
            def local(p):
                x, y = s1.local_data(p), s2.local_data(p)
                return LocalFactor(p, x.inverse_roots + y.inverse_roots, x.zeros + y.zeros)
        else:
            def local(p):
                x, y = s1.local_data(p), s2.local_data(p)
                roots, zeros = list(x.inverse_roots), list(x.zeros)
                for a in y.inverse_roots:
                    j = next((j for j, r in enumerate(roots) if abs(r - a) < 1e-9), None)
                    if j is None:
                        zeros.append(a)
                    else:
                        roots.pop(j)
                for z in y.zeros:
                    j = next((j for j, r in enumerate(zeros) if abs(r - z) < 1e-9), None)
                    if j is None:
                        roots.append(z)
                    else:
                        zeros.pop(j)
                return LocalFactor(p, tuple(roots), tuple(zeros))
    arch = conductor = omega = poles = cc = None
    if s1.arch is not None and s2.arch is not None:
        arch = s1.arch * s2.arch if op == "product" else s1.arch / s2.arch
    if s1.conductor is not None and s2.conductor is not None:
        conductor = s1.conductor * s2.conductor if op == "product" else Fraction(s1.conductor, s2.conductor)
        if conductor.denominator == 1:
            conductor = int(conductor)
    if s1.omega is not None and s2.omega is not None:
        omega = s1.omega * s2.omega if op == "product" else s1.omega / s2.omega
    if op == "product" and s1.completed_poles is not None and s2.completed_poles is not None:
        poles = _product_poles(s1, s2)
    if s1.central_character is not None and s2.central_character is not None:
        cc = s1.central_character * (s2.central_character if op == "product" else s2.central_character.conj())
    deg = None
    if s1.degree is not None and s2.degree is not None:
        deg = s1.degree + s2.degree if op == "product" else s1.degree - s2.degree
    sym = "*" if op == "product" else "/"
    return CoefficientSeries(
        f"({s1.label}{sym}{s2.label})", local=local, coeff_fn=cf, pp_fn=pp, arch=arch,
        conductor=conductor, omega=omega, poles=poles, theta_bound=max(s1.theta_bound, s2.theta_bound),
        central_character=cc, degree=deg, real=s1.real and s2.real)


def _product_poles(s1, s2):
    """Poles of Lambda_1 Lambda_2 when at most one factor has poles (all simple)."""
    p1, p2 = s1.completed_poles, s2.completed_poles
    if not p1 and not p2:
        return []
    if p1 and p2:
        return None
    poly, other = (s1, s2) if p1 else (s2, s1)
    if not other.has_fe:
        return None
    from .analytic import completed_eval
    return [(b, r * completed_eval(other, b)) for b, r in poly.completed_poles]


def partial(series, primes):
    """Delete the Euler factors at the given primes."""
    S = sorted(set(int(p) for p in primes))
    mod = math.prod(S) if S else 1
    base = series

    def cf(N):
        a = np.array(base.coefficients(N))
        if S:
            n = np.arange(1, N + 1)
            a[np.gcd(n, mod) > 1] = 0
        return a

    def pp(p, K):
        if p in S:
            return np.concatenate([[1], np.zeros(K)])
        return base.prime_power_coeffs(p, K)

    local = None
    if series._local is not None:
        local = lambda p: LocalFactor(p, ()) if p in S else base.local_data(p)
    return CoefficientSeries(
        f"{series.label}_S{','.join(map(str, S))}", local=local, coeff_fn=cf, pp_fn=pp, arch=series.arch,
        theta_bound=series.theta_bound, degree=series.degree, real=series.real)


def local_series(series, p, N_max=None):
    """The single Euler factor at p as a series (used to undo partial)."""
    def pp_only(N):
        K = int(math.log(N, p) + 1e-9) + 1
        c = series.prime_power_coeffs(p, K)
        a = np.zeros(N, dtype=complex)
        k, pk = 0, 1
        while pk <= N:
            a[pk - 1] = c[k]
            k += 1
            pk *= p
        return a

    return CoefficientSeries(f"{series.label}_at_{p}", coeff_fn=pp_only,
                             pp_fn=lambda q, K: series.prime_power_coeffs(q, K) if q == p else
                             np.concatenate([[1], np.zeros(K)]))


def local_factor(series, prime):
    """Inverse roots recovered from a_(p^k), k <= degree, with the unitary-bound check."""
    p = int(prime)
    d = series.degree
    if d is None or d < 1:
        raise InvalidArgument("series degree unknown")
    c = np.asarray(series.prime_power_coeffs(p, d), dtype=complex)
    P = _pp_inverse(c)
    nz = np.nonzero(np.abs(P) > 1e-12)[0]
    top = int(nz.max()) if nz.size else 0
    if top == 0:
        roots = ()
    else:
        x = np.roots(P[: top + 1][::-1])
        roots = tuple(complex(1 / r) for r in x)
    bound = js_bound(p, d)
    # degree 1: the bound is 1 and unitary characters sit on it
    bad = [r for r in roots if abs(r) > bound * (1 + 1e-12) or (d > 1 and abs(r) >= bound)]
    if bad:
        log.warning("unitary bound violated at p=%d: |alpha|=%g >= %g", p, abs(bad[0]), bound)
    return LocalFactor(p, roots, (), not bad)


# ---------------------------------------------------------------- cache files

def save_cache(series, N, path):
    """Write the first N coefficients; 17 significant digits round-trip exactly."""
    a = series.coefficients(N)
    label = series.label.replace(" ", "_")
    with open(path, "w") as fh:
        fh.write(f"# archimedea-coeffs v1 {label} {N}\n")
        for n, z in enumerate(a, 1):
            fh.write(f"{n}\t{z.real:.17g}\t{z.imag:.17g}\n")


def load_cache(path):
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 5 or head[:3] != ["#", "archimedea-coeffs", "v1"]:
            raise InvalidArgument(f"{path}: not an archimedea coefficient file")
        label, N = head[3], int(head[4])
        a = np.zeros(N, dtype=complex)
        for line in fh:
            n, re, im = line.split("\t")
            a[int(n) - 1] = complex(float(re), float(im))
    return label, a


def cache_dir():
    d = os.environ.get("ARCHIMEDEA_CACHE_DIR")
    return d or None


def cache_path(label, N, directory=None):
    d = directory or cache_dir()
    if d is None:
        return None
    return os.path.join(d, f"{label.replace(' ', '_')}-{N}.coeffs")


BUILTINS = {
    "zeta": zeta,
    "delta": delta,
    "sym2delta": lambda: sym_power_delta(2),
    "sym3delta": lambda: sym_power_delta(3),
    "sym4delta": lambda: sym_power_delta(4),
}


def builtin_series(name, arg=None):
    """zeta, delta, dirichlet_l (arg: character) or sym_power_delta (arg: m)."""
    if name == "zeta":
        return zeta()
    if name == "delta":
        return delta()
    if name == "dirichlet_l":
        if not isinstance(arg, DirichletCharacter):
            raise InvalidArgument("dirichlet_l needs a character")
        return dirichlet_l(arg)
    if name == "sym_power_delta":
        return sym_power_delta(int(arg))
    raise InvalidArgument(f"unknown series {name!r}")


def series_by_name(name):
    """zeta, delta, symMdelta, or dirichlet:Q:INDEX."""
    if name in BUILTINS:
        return BUILTINS[name]()
    if name.startswith("dirichlet:"):
        from .characters import character_by_index
        try:
            _, q, i = name.split(":")
            return dirichlet_l(character_by_index(int(q), int(i)))
        except ValueError:
            raise InvalidArgument(f"bad series name {name!r}") from None
    raise InvalidArgument(f"unknown series {name!r}")
