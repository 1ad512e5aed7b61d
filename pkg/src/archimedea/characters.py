"""Dirichlet characters, Gauss sums and epsilon factors.

Characters are labelled by exponent tuples on a fixed generator set: the
smallest primitive root for each odd prime power, -1 for 4, and (-1, 5) for
2^k with k >= 3.  Values are kept exact as (numerator, order) pairs.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint
from sympy.ntheory import primitive_root

from .errors import ImprimitiveCharacter, InvalidArgument, NotCoprime


@dataclass(frozen=True)
class _Gen:
    p: int
    e: int
    pe: int
    gen: int
    order: int


@lru_cache(maxsize=None)
def _structure(q):
    """Generators of (Z/q)^x, one block per prime power."""
    gens = []
    for p, e in sorted(factorint(q).items()):
        pe = p ** e
        if p == 2:
            if e == 2:
                gens.append(_Gen(2, e, pe, pe - 1, 2))
            elif e >= 3:
                gens.append(_Gen(2, e, pe, pe - 1, 2))
                gens.append(_Gen(2, e, pe, 5, 2 ** (e - 2)))
        else:
            gens.append(_Gen(p, e, pe, int(primitive_root(pe)), (p - 1) * p ** (e - 1)))
    return tuple(gens)


@lru_cache(maxsize=64)
def _dlog_tables(q):
    """For each generator, an int array over residues mod q of discrete logs (-1 off units)."""
    out = []
    n = np.arange(q)
    for p, e in sorted(factorint(q).items()):
        pe = p ** e
        r = n % pe
        if p == 2:
            if e == 1:
                continue
            a_tab = np.full(pe, -1, dtype=np.int64)
            b_tab = np.full(pe, -1, dtype=np.int64)
            border = 2 ** (e - 2) if e >= 3 else 1
            x = 1
            for b in range(border):
                a_tab[x] = 0
                b_tab[x] = b
                a_tab[pe - x] = 1
                b_tab[pe - x] = b
                x = x * 5 % pe
            out.append(a_tab[r])
            if e >= 3:
                out.append(b_tab[r])
        else:
            g = int(primitive_root(pe))
            tab = np.full(pe, -1, dtype=np.int64)
            x = 1
            for j in range((p - 1) * p ** (e - 1)):
                tab[x] = j
                x = x * g % pe
            out.append(tab[r])
    return out


def _lcm(xs):
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def root_of_unity(num, order):
    """exp(2 pi i num/order), exact at quarter turns."""
    f = Fraction(num, order) % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): -1 + 0j, Fraction(1, 4): 1j, Fraction(3, 4): -1j}
    if f in exact:
        return exact[f]
    return cmath.exp(2j * math.pi * f.numerator / f.denominator)


class DirichletCharacter:
    """A character mod q given by exponents on the generator set."""

    def __init__(self, modulus, exponents=None):
        q = int(modulus)
        if q <= 0:
            raise InvalidArgument("modulus must be positive")
        self.modulus = q
        gens = _structure(q)
        if exponents is None:
            exponents = (0,) * len(gens)
        exponents = tuple(int(k) % g.order for k, g in zip(exponents, gens))
        if len(exponents) != len(gens):
            raise InvalidArgument(f"need {len(gens)} exponents for modulus {q}")
        self.exponents = exponents
        self._gens = gens
        self._vals = None

    # -- values
    @property
    def order(self):
        return _lcm([g.order // math.gcd(k, g.order) for k, g in zip(self.exponents, self._gens)] or [1])

    def _table(self):
        """Numerators over self.order for every residue, -1 off the units."""
        if self._vals is None:
            m = self.order
            q = self.modulus
            acc = np.zeros(q, dtype=np.int64)
            unit = np.ones(q, dtype=bool)
            if q > 1:
                unit = np.gcd(np.arange(q), q) == 1
            for k, g, dl in zip(self.exponents, self._gens, _dlog_tables(q)):
                acc = (acc + (k * m // g.order) * np.where(dl < 0, 0, dl)) % m
            self._vals = np.where(unit, acc, -1)
        return self._vals

    def value(self, n):
        """(numerator, order) in lowest terms, or None when gcd(n, q) > 1."""
        j = int(self._table()[n % self.modulus])
        if j < 0:
            return None
        f = Fraction(j, self.order)
        return f.numerator, f.denominator

    def __call__(self, n):
        v = self.value(n)
        return 0j if v is None else root_of_unity(*v)

    def values(self):
        """Complex values at 0..q-1."""
        t = self._table()
        m = self.order
        roots = np.array([root_of_unity(j, m) for j in range(m)] + [0j])
        return roots[np.where(t < 0, m, t)]

    # -- structure
    @property
    def parity(self):
        v = self.value(self.modulus - 1)
        return 0 if v is None or v == (0, 1) else 1

    @property
    def conductor(self):
        f = 1
        for p, e, ks in self._blocks():
            f *= _block_conductor(p, e, ks)
        return f

    def _blocks(self):
        out = []
        i = 0
        for p, e in sorted(factorint(self.modulus).items()):
            n = 0 if (p == 2 and e == 1) else (1 if p != 2 or e == 2 else 2)
            out.append((p, e, self.exponents[i:i + n]))
            i += n
        return out

    @property
    def is_primitive(self):
        return self.conductor == self.modulus

    @property
    def is_trivial(self):
        return all(k == 0 for k in self.exponents)

    def conj(self):
        return DirichletCharacter(self.modulus, tuple(-k for k in self.exponents))

    @classmethod
    def from_values(cls, q, fn):
        """The character mod q agreeing with fn (returning (num, order) or None) on units."""
        gens = _structure(q)
        exps = []
        for g in gens:
            a = _crt_lift(q, g.pe, g.gen)
            v = fn(a)
            if v is None:
                raise InvalidArgument("value function vanishes on a unit")
            num, order = v
            f = Fraction(num, order) * g.order
            if f.denominator != 1:
                raise InvalidArgument("values are not a character mod q")
            exps.append(int(f) % g.order)
        chi = cls(q, tuple(exps))
        return chi

    def __mul__(self, other):
        q = _lcm([self.modulus, other.modulus])

        def fn(a):
            u, v = self.value(a), other.value(a)
            if u is None or v is None:
                return None
            f = Fraction(*u) + Fraction(*v)
            return f.numerator, f.denominator

        return DirichletCharacter.from_values(q, fn)

    def primitive_core(self):
        """The primitive character inducing this one."""
        f = self.conductor
        if f == self.modulus:
            return self

        def fn(a):
            # lift a mod f to a unit mod q
            b = a
            while math.gcd(b, self.modulus) != 1:
                b += f
            return self.value(b)

        return DirichletCharacter.from_values(f, fn)

    def index(self):
        return table_index(self.modulus, self.exponents)

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter) and self.modulus == other.modulus
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter({self.modulus}, {self.exponents})"


def _crt_lift(q, pe, g):
    """x = g mod pe, x = 1 mod q/pe."""
    rest = q // pe
    if rest == 1:
        return g % q
    x = (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % q
    return x


def _v(p, n):
    k = 0
    while n and n % p == 0:
        n //= p
        k += 1
    return k


def _block_conductor(p, e, ks):
    if not ks:
        return 1
    if p != 2:
        (k,) = ks
        if k == 0:
            return 1
        return p ** max(1, e - _v(p, k))
    if e == 2:
        return 4 if ks[0] else 1
    a, b = ks
    if b == 0:
        return 4 if a else 1
    return 2 ** (e - _v(2, b))


def _exponent_ranges(q):
    return [range(g.order) for g in _structure(q)]


def character_table(q):
    """All characters mod q, in lexicographic order of exponent tuples."""
    q = int(q)
    if q <= 0:
        raise InvalidArgument("modulus must be positive")
    return [DirichletCharacter(q, ks) for ks in itertools.product(*_exponent_ranges(q))]


def table_index(q, exponents):
    idx = 0
    for k, g in zip(exponents, _structure(q)):
        idx = idx * g.order + k
    return idx


def character_by_index(q, index):
    gens = _structure(q)
    total = math.prod(g.order for g in gens)
    if not 0 <= index < total:
        raise InvalidArgument(f"index {index} out of range for modulus {q}")
    ks = []
    for g in reversed(gens):
        ks.append(index % g.order)
        index //= g.order
    return DirichletCharacter(q, tuple(reversed(ks)))


def quadratic_character(q):
    """The unique (or first) real primitive character mod q, by table search."""
    for chi in character_table(q):
        if chi.order == 2 and chi.is_primitive:
            return chi
    raise InvalidArgument(f"no primitive quadratic character mod {q}")


# ---------------------------------------------------------------- Gauss sums, epsilon

def gauss_sum(chi):
    if not chi.is_primitive:
        raise ImprimitiveCharacter(f"{chi!r} has conductor {chi.conductor}")
    q, m = chi.modulus, chi.order
    t = chi._table()
    a = np.arange(q, dtype=np.int64)
    ok = t >= 0
    # exact phase numerator over m q
    tot = (t[ok] * q + a[ok] * m) % (m * q)
    return complex(np.exp(2j * np.pi * tot / (m * q)).sum())


@dataclass(frozen=True)
class EpsFactor:
    """epsilon(s) = r K^(1/2 - s)."""
    r: complex
    K: int

    def __call__(self, s):
        return self.r * self.K ** (0.5 - s)


def eps_global(chi):
    if not chi.is_primitive:
        raise ImprimitiveCharacter(f"{chi!r} has conductor {chi.conductor}")
    D = chi.modulus
    r = (-1j) ** chi.parity * gauss_sum(chi) / math.sqrt(D)
    return EpsFactor(complex(r), D)


def eps_infty(chi):
    return 1j ** chi.parity


def eps_product_coprime(chi1, chi2):
    """epsilon of chi1 chi2 from the two factors, for coprime conductors.

    The finite parts multiply as chi1(D2) chi2(D1) tau1 tau2.  The (-i)^eps
    archimedean factors do not: two odd characters give an even product, so a
    sign -1 is needed to land on eps_global of the product.
    """
    for c in (chi1, chi2):
        if not c.is_primitive:
            raise ImprimitiveCharacter(f"{c!r} is not primitive")
    D1, D2 = chi1.modulus, chi2.modulus
    if math.gcd(D1, D2) != 1:
        raise NotCoprime(f"conductors {D1} and {D2} are not coprime")
    e1, e2 = eps_global(chi1), eps_global(chi2)
    r = chi1(D2) * chi2(D1) * e1.r * e2.r
    if chi1.parity and chi2.parity:
        r = -r
    return EpsFactor(complex(r), D1 * D2)


@dataclass(frozen=True)
class WeilEpsDescriptor:
    constant: complex
    evaluated_char: complex
    N: int
    chi_at_N: complex
    eps_chi_sq: EpsFactor

    def __call__(self, s):
        return (self.constant * self.evaluated_char * self.N ** (0.5 - s)
                * self.chi_at_N * self.eps_chi_sq(s))


def weil_eps_descriptor(n, omega_pi, omega_rho, chi0, chi, constant=None):
    """The factors of E0(s, chi) = c psi(D) N^(1/2-s) chi(N) eps(s, chi)^2,
    psi = omega_pi omega_rho^(-1) chi0^2 and N = cond(chi0)^2.

    constant defaults to r(omega_pi chi0) / r(omega_rho chi0) computed from
    primitive cores; pass it explicitly when those are not characters.
    """
    if int(n) != n or n < 3:
        raise InvalidArgument("n must be an integer >= 3")
    if not chi0.is_primitive:
        raise ImprimitiveCharacter(f"{chi0!r} is not primitive")
    chi_p = chi.primitive_core()
    D = chi_p.modulus
    if math.gcd(D, chi0.modulus) != 1:
        raise NotCoprime(f"conductor {D} clashes with {chi0.modulus}")
    N = chi0.modulus ** 2
    if constant is None:
        a = eps_global((omega_pi * chi0).primitive_core()).r
        b = eps_global((omega_rho * chi0).primitive_core()).r
        constant = a / b
    constant = complex(constant)
    if abs(abs(constant) - 1) > 1e-10:
        raise InvalidArgument("constant must have unit modulus")
    psi_D = omega_pi(D) * omega_rho(D).conjugate() * chi0(D) ** 2
    e = eps_global(chi_p)
    return WeilEpsDescriptor(constant, complex(psi_D), N, complex(chi_p(N)),
                             EpsFactor(e.r ** 2, e.K ** 2))
