"""Exact number types used by the angular-momentum algebra.

``Fraction`` from the standard library plays the role of the exact rational.
On top of it this module adds

* :class:`HalfInt` -- a spin quantum number stored as twice its value,
* :class:`SqrtRational` -- ``sign * sqrt(radicand)`` with a rational radicand,
  the natural value domain of Clebsch-Gordan, 3j and 6j symbols,
* :class:`RadicalSum` -- a finite sum ``sum_d coeff_d * sqrt(d)`` over
  squarefree integers ``d``, closed under addition and multiplication,
* :class:`PiScaled` -- a :class:`SqrtRational` times a power of
  ``1/sqrt(4*pi)``, used for Gaunt coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import IrrationalResult


# --------------------------------------------------------------------------
# half-integers
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer, stored exactly as ``twice = 2*value``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {self.twice!r}")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce ``int``, ``Fraction``, ``float``, ``str`` or ``HalfInt``."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif isinstance(value, float):
            if not value.is_integer() and not (2 * value).is_integer():
                raise ValueError(f"{value!r} is not a multiple of 1/2")
            value = Fraction(value)
        elif not isinstance(value, Rational):
            raise TypeError(f"cannot interpret {value!r} as a half-integer")
        twice = 2 * Fraction(value)
        if twice.denominator != 1:
            raise ValueError(f"{value!r} is not a multiple of 1/2")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self):
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __float__(self):
        return self.twice / 2

    def __neg__(self):
        return HalfInt(-self.twice)

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def twice(value) -> int:
    """Return ``2*value`` as an int for any half-integer-like input."""
    return HalfInt.of(value).twice


def factorial(n: int) -> int:
    """Exact ``n!`` for a nonnegative integer."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


# --------------------------------------------------------------------------
# squarefree decomposition
# --------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def square_decompose(n: int) -> tuple[int, int]:
    """Write a positive integer as ``s*s*d`` with ``d`` squarefree.

    Trial division runs up to the cube root of what is left; the remaining
    cofactor then has at most two prime factors, so it is either a perfect
    square or squarefree.
    """
    if n <= 0:
        raise ValueError("square_decompose needs a positive integer")
    s, d = 1, 1
    p = 2
    while p * p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            s *= p ** (k // 2)
            if k % 2:
                d *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        s *= r
    else:
        d *= n
    return s, d


def _is_square(q: Fraction) -> bool:
    return (math.isqrt(q.numerator) ** 2 == q.numerator
            and math.isqrt(q.denominator) ** 2 == q.denominator)


def _exact_sqrt(q: Fraction) -> Fraction:
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


# --------------------------------------------------------------------------
# signed square roots of rationals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SqrtRational:
    """The real number ``sign * sqrt(radicand)``.

    ``sign`` is -1, 0 or +1 and is 0 exactly when the radicand is 0.
    """

    sign: int
    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if self.radicand < 0:
            raise ValueError("radicand must be nonnegative")
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if (self.sign == 0) != (self.radicand == 0):
            raise ValueError("sign is 0 iff radicand is 0")

    @classmethod
    def from_rational(cls, q) -> "SqrtRational":
        q = Fraction(q)
        return cls((q > 0) - (q < 0), q * q)

    @classmethod
    def sqrt(cls, q) -> "SqrtRational":
        """Positive square root of a nonnegative rational."""
        q = Fraction(q)
        return cls(1 if q else 0, q)

    @classmethod
    def zero(cls) -> "SqrtRational":
        return cls(0, Fraction(0))

    def __bool__(self):
        return self.sign != 0

    def __neg__(self):
        return SqrtRational(-self.sign, self.radicand)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return self * SqrtRational.from_rational(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero SqrtRational")
        return SqrtRational(self.sign * other.sign, self.radicand / other.radicand)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return SqrtRational(self.sign ** n if n else 1, self.radicand ** n)

    def square(self) -> Fraction:
        """The exact rational ``value**2``."""
        return self.radicand

    def is_rational(self) -> bool:
        return _is_square(self.radicand)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise IrrationalResult(f"{self} is not rational")
        return self.sign * _exact_sqrt(self.radicand)

    def __float__(self):
        return self.sign * math.sqrt(self.radicand)

    def __str__(self):
        if not self.sign:
            return "0"
        if self.is_rational():
            return str(self.as_rational())
        return ("-" if self.sign < 0 else "") + f"sqrt({self.radicand})"

    def __repr__(self):
        return f"SqrtRational({self})"


# --------------------------------------------------------------------------
# sums of radicals
# --------------------------------------------------------------------------

class RadicalSum:
    """Exact value ``sum_d coeff_d * sqrt(d)`` with squarefree keys ``d``.

    Distinct square roots of squarefree integers are linearly independent
    over the rationals, so the representation is canonical and equality is
    structural.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for d, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[d] = c
        self.terms = clean

    @classmethod
    def from_sqrt(cls, x: SqrtRational) -> "RadicalSum":
        if not x:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q = s*sqrt(d)/q
        p, q = x.radicand.numerator, x.radicand.denominator
        sp, dp = square_decompose(p)
        sq, dq = square_decompose(q)
        g = math.gcd(dp, dq)
        d = (dp // g) * (dq // g)
        coeff = Fraction(x.sign * sp * sq * g, q)
        return cls({d: coeff})

    @classmethod
    def from_rational(cls, q) -> "RadicalSum":
        return cls({1: Fraction(q)})

    def __add__(self, other):
        other = _as_radical_sum(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return RadicalSum(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_radical_sum(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = _as_radical_sum(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, 0) + c1 * c2 * g
        return RadicalSum(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _as_radical_sum(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise IrrationalResult(f"{self} has irrational part")
        return self.terms.get(1, Fraction(0))

    def __float__(self):
        return math.fsum(float(c) * math.sqrt(d) for d, c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "RadicalSum(0)"
        parts = [f"{c}" if d == 1 else f"{c}*sqrt({d})"
                 for d, c in sorted(self.terms.items())]
        return "RadicalSum(" + " + ".join(parts) + ")"


def _as_radical_sum(x):
    if isinstance(x, RadicalSum):
        return x
    if isinstance(x, SqrtRational):
        return RadicalSum.from_sqrt(x)
    if isinstance(x, (int, Fraction)):
        return RadicalSum.from_rational(x)
    return None


# --------------------------------------------------------------------------
# values carrying powers of 1/sqrt(4 pi)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PiScaled:
    """``coeff * (4*pi)**(-power/2)`` with the transcendental factor kept symbolic."""

    coeff: SqrtRational
    power: int = 1

    def __mul__(self, other):
        if isinstance(other, PiScaled):
            return PiScaled(self.coeff * other.coeff, self.power + other.power)
        if isinstance(other, (SqrtRational, int, Fraction)):
            return PiScaled(self.coeff * other, self.power)
        return NotImplemented

    __rmul__ = __mul__

    def times_four_pi(self, k: int = 1) -> "PiScaled":
        """Multiply by ``(4*pi)**k``, cancelling two units of ``power`` each."""
        return PiScaled(self.coeff, self.power - 2 * k)

    def __bool__(self):
        return bool(self.coeff)

    def __float__(self):
        return float(self.coeff) * (4 * math.pi) ** (-self.power / 2)

    def __str__(self):
        if not self.power:
            return str(self.coeff)
        return f"{self.coeff} * (4pi)^(-{self.power}/2)"
