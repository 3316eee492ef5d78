"""Scalar arithmetic for operator coefficients.

Coefficients live in a small tower:

    int / Fraction      exact rationals
    GaussianRational    exact complex rationals re + im*i
    complex / float     inexact fallback

plus ``LaurentZ``, Laurent polynomials in a formal unimodular variable z
(so conj(z^k) = z^-k), used for gauge-parametric representation entries.

Exactness propagates: any operation that touches a float or complex value
produces an inexact result.  Equality between inexact values is decided
with an absolute tolerance (default 1e-12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with Fraction real and imaginary parts.

    Construct through gaussian() so that purely real values collapse back
    to Fraction/int and hashing stays consistent across the tower.
    """

    re: Fraction
    im: Fraction

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"


Scalar = Union[int, Fraction, GaussianRational, float, complex]


def gaussian(re, im) -> Scalar:
    """Build an exact complex scalar, demoting to rational when im == 0."""
    re = Fraction(re)
    im = Fraction(im)
    if im == 0:
        return _demote(re)
    return GaussianRational(re, im)


def _demote(q: Fraction) -> Scalar:
    return int(q) if q.denominator == 1 else q


def is_exact(s: Scalar) -> bool:
    return isinstance(s, (int, Fraction, GaussianRational)) and not isinstance(s, bool)


def is_zero(s: Scalar) -> bool:
    if isinstance(s, GaussianRational):
        return s.re == 0 and s.im == 0
    return s == 0


def to_complex(s: Scalar) -> complex:
    if isinstance(s, GaussianRational):
        return complex(s)
    return complex(s)


def _parts(s: Scalar):
    # (re, im) as Fractions; only valid for exact scalars
    if isinstance(s, GaussianRational):
        return s.re, s.im
    return Fraction(s), Fraction(0)


def add(a: Scalar, b: Scalar) -> Scalar:
    if is_exact(a) and is_exact(b):
        ar, ai = _parts(a)
        br, bi = _parts(b)
        return gaussian(ar + br, ai + bi)
    return to_complex(a) + to_complex(b)


def neg(a: Scalar) -> Scalar:
    if isinstance(a, GaussianRational):
        return GaussianRational(-a.re, -a.im)
    return -a


def sub(a: Scalar, b: Scalar) -> Scalar:
    return add(a, neg(b))


def mul(a: Scalar, b: Scalar) -> Scalar:
    if is_exact(a) and is_exact(b):
        ar, ai = _parts(a)
        br, bi = _parts(b)
        return gaussian(ar * br - ai * bi, ar * bi + ai * br)
    return to_complex(a) * to_complex(b)


def div(a: Scalar, b: Scalar) -> Scalar:
    if is_exact(a) and is_exact(b):
        br, bi = _parts(b)
        d = br * br + bi * bi
        if d == 0:
            raise ZeroDivisionError("scalar division by zero")
        ar, ai = _parts(a)
        return gaussian((ar * br + ai * bi) / d, (ai * br - ar * bi) / d)
    return to_complex(a) / to_complex(b)


def conj(a: Scalar) -> Scalar:
    if isinstance(a, GaussianRational):
        return a.conjugate()
    if isinstance(a, (int, Fraction)):
        return a
    return to_complex(a).conjugate()


def abs2(a: Scalar) -> Scalar:
    """|a|^2, exact (Fraction/int) for exact input."""
    if is_exact(a):
        ar, ai = _parts(a)
        return _demote(ar * ar + ai * ai)
    z = to_complex(a)
    return z.real * z.real + z.imag * z.imag


def abs_value(a: Scalar) -> float:
    return math.sqrt(float(abs2(a)))


def eq(a: Scalar, b: Scalar, tol: float = DEFAULT_TOL) -> bool:
    """Exact equality when both sides are exact, |a-b| <= tol otherwise."""
    if is_exact(a) and is_exact(b):
        ar, ai = _parts(a)
        br, bi = _parts(b)
        return ar == br and ai == bi
    return abs(to_complex(a) - to_complex(b)) <= tol


def to_text(s: Scalar) -> str:
    """Render a scalar the way the expression grammar reads it back."""
    if isinstance(s, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(s, int):
        return str(s)
    if isinstance(s, Fraction):
        if s.denominator == 1:
            return str(s.numerator)
        return f"{s.numerator}/{s.denominator}"
    if isinstance(s, GaussianRational):
        re_txt = to_text(_demote(s.re))
        im_txt = to_text(_demote(abs(s.im)))
        sign = "+" if s.im >= 0 else "-"
        return f"({re_txt}{sign}{im_txt}i)"
    if isinstance(s, float):
        return repr(s)
    if isinstance(s, complex):
        sign = "+" if s.imag >= 0 else "-"
        return f"({s.real!r}{sign}{abs(s.imag)!r}i)"
    raise TypeError(f"not a scalar: {s!r}")


def to_json(s: Scalar):
    """JSON form: ints as numbers, rationals as 'p/q', complex as {re, im}."""
    if isinstance(s, int) and not isinstance(s, bool):
        return s
    if isinstance(s, Fraction):
        if s.denominator == 1:
            return s.numerator
        return f"{s.numerator}/{s.denominator}"
    if isinstance(s, GaussianRational):
        return {"re": to_json(_demote(s.re)), "im": to_json(_demote(s.im))}
    if isinstance(s, float):
        return s
    if isinstance(s, complex):
        return {"re": s.real, "im": s.imag}
    if isinstance(s, LaurentZ):
        return s.to_json()
    raise TypeError(f"not a scalar: {s!r}")


class LaurentZ:
    """Laurent polynomial in a formal unimodular z; conj sends z^k to z^-k.

    Coefficients are scalars from the tower above.  Instances are immutable
    in use: arithmetic returns fresh objects, and zero coefficients are
    dropped on construction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for k, v in coeffs.items():
                if not is_zero(v):
                    clean[int(k)] = v
        self.coeffs = clean

    @classmethod
    def var(cls, power: int = 1, coeff: Scalar = 1) -> "LaurentZ":
        return cls({power: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = add(out.get(k, 0), v)
        return LaurentZ(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentZ({k: neg(v) for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) + (-self)

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                out[k] = add(out.get(k, 0), mul(v1, v2))
        return LaurentZ(out)

    __rmul__ = __mul__

    def conjugate(self) -> "LaurentZ":
        return LaurentZ({-k: conj(v) for k, v in self.coeffs.items()})

    def substitute(self, z: complex) -> complex:
        total = 0j
        for k, v in self.coeffs.items():
            total += to_complex(v) * z**k
        return total

    def degree_support(self):
        return sorted(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentZ):
            other = _as_laurent(other)
        if set(self.coeffs) != set(other.coeffs):
            return False
        return all(eq(v, other.coeffs[k]) for k, v in self.coeffs.items())

    def __hash__(self):
        return hash(tuple(sorted((k, to_complex(v)) for k, v in self.coeffs.items())))

    def to_json(self):
        return {f"z^{k}": to_json(v) for k, v in sorted(self.coeffs.items())}

    def __repr__(self):
        if not self.coeffs:
            return "LaurentZ(0)"
        bits = [f"{to_text(v)}*z^{k}" for k, v in sorted(self.coeffs.items())]
        return "LaurentZ(" + " + ".join(bits) + ")"


def _as_laurent(x) -> LaurentZ:
    if isinstance(x, LaurentZ):
        return x
    return LaurentZ({0: x})


# --- generic operations that also accept LaurentZ values -----------------

def gadd(a, b):
    if isinstance(a, LaurentZ) or isinstance(b, LaurentZ):
        return _as_laurent(a) + _as_laurent(b)
    return add(a, b)


def gmul(a, b):
    if isinstance(a, LaurentZ) or isinstance(b, LaurentZ):
        return _as_laurent(a) * _as_laurent(b)
    return mul(a, b)


def gneg(a):
    if isinstance(a, LaurentZ):
        return -a
    return neg(a)


def gconj(a):
    if isinstance(a, LaurentZ):
        return a.conjugate()
    return conj(a)


def gis_zero(a) -> bool:
    if isinstance(a, LaurentZ):
        return a.is_zero()
    return is_zero(a)


def geq(a, b, tol: float = DEFAULT_TOL) -> bool:
    if isinstance(a, LaurentZ) or isinstance(b, LaurentZ):
        a = _as_laurent(a)
        b = _as_laurent(b)
        for k in set(a.coeffs) | set(b.coeffs):
            if not eq(a.coeffs.get(k, 0), b.coeffs.get(k, 0), tol):
                return False
        return True
    return eq(a, b, tol)


def gabs(a) -> float:
    """Crude magnitude for discrepancy reporting; Laurent uses coeff sum."""
    if isinstance(a, LaurentZ):
        return sum(abs_value(v) for v in a.coeffs.values())
    return abs_value(a)
