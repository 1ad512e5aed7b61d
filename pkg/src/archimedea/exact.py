"""Exact Gaussian rationals, used for gamma shifts when the inputs are rational.

Anything mixed with a float complex degrades to a plain complex.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

TOL = 1e-9


class CQ:
    """a + b i with a, b Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, CQ):
            re, im = re.re, re.im + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, CQ):
            return other
        if isinstance(other, (int, Rational)):
            return CQ(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return CQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CQ(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return CQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return CQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("CQ division by zero")
        return CQ((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def conjugate(self):
        return CQ(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"CQ({format_cq(self)})"

    def __str__(self):
        return format_cq(self)


def as_shift(x):
    """Normalize a user shift. ints, Fractions, CQ and strings stay exact."""
    if isinstance(x, CQ):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a shift")
    if isinstance(x, (int, Rational)):
        return CQ(x)
    if isinstance(x, str):
        return parse_cq(x)
    if isinstance(x, float):
        return complex(x)
    return complex(x)


def is_exact(x):
    return isinstance(x, (CQ, int, Rational)) and not isinstance(x, bool)


def to_complex(x):
    return complex(x)


def re_part(x):
    if isinstance(x, CQ):
        return x.re
    return complex(x).real


def im_part(x):
    if isinstance(x, CQ):
        return x.im
    return complex(x).imag


def is_integer(x, tol=TOL):
    """True when x is a real integer (exactly for CQ, within tol otherwise)."""
    if isinstance(x, CQ):
        return x.im == 0 and x.re.denominator == 1
    if isinstance(x, (int, Rational)):
        return Fraction(x).denominator == 1
    z = complex(x)
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


def nearest_int(x):
    return int(round(float(re_part(x))))


def close(x, y, tol=TOL):
    if is_exact(x) and is_exact(y):
        return as_shift(x) == as_shift(y)
    return abs(complex(x) - complex(y)) < tol


def _frac(t, default):
    if t in ("", "+"):
        return Fraction(default)
    if t == "-":
        return Fraction(-default)
    return Fraction(t)


def parse_cq(text):
    """Parse a+bi with rational a, b.  Examples: '0', '1/2', '2i', '-i', '1/2-3/4i'."""
    t = text.replace(" ", "").replace("j", "i")
    if not t:
        raise ValueError("empty shift")
    try:
        if not t.endswith("i"):
            return CQ(Fraction(t), 0)
        body = t[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            return CQ(0, _frac(body, 1))
        return CQ(Fraction(body[:cut]), _frac(body[cut:], 1))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse shift {text!r}") from None


def format_cq(z):
    re_v, im_v = z.re, z.im
    if im_v == 0:
        return str(re_v)
    if re_v == 0:
        return f"{im_v}i"
    sign = "+" if im_v > 0 else "-"
    return f"{re_v}{sign}{abs(im_v)}i"


def format_shift(x):
    if isinstance(x, CQ):
        return format_cq(x)
    z = complex(x)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"
