"""Clebsch-Gordan, 3j, 6j and Gaunt coefficients in exact arithmetic.

All quantum numbers may be given as ``int``, ``Fraction``, ``"3/2"`` or
:class:`~lande_rterm.exact.HalfInt`; internally everything runs on twice the
value so half-integers stay exact. Phases follow Condon and Shortley.
Selection-rule violations give an exact zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial as _fact

from .exact import HalfInt, PiScaled, SqrtRational, factorial, twice

__all__ = [
    "factorial",
    "clebsch_gordan",
    "wigner_3j",
    "wigner_6j",
    "gaunt",
    "reduced_C2",
    "triangle",
]


def _half(t: int) -> int:
    # t is twice a quantity known to be an integer here
    assert t % 2 == 0, t
    return t // 2


def triangle(tja: int, tjb: int, tjc: int) -> bool:
    """Triangle rule on doubled values, including the integer-perimeter check."""
    return (tjc >= abs(tja - tjb) and tjc <= tja + tjb
            and (tja + tjb + tjc) % 2 == 0 and min(tja, tjb, tjc) >= 0)


def _delta_sq(tja: int, tjb: int, tjc: int) -> Fraction:
    """Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!."""
    return Fraction(
        _fact(_half(tja + tjb - tjc)) * _fact(_half(tja - tjb + tjc))
        * _fact(_half(-tja + tjb + tjc)),
        _fact(_half(tja + tjb + tjc) + 1),
    )


def _m_ok(tj: int, tm: int) -> bool:
    return abs(tm) <= tj and (tj - tm) % 2 == 0


def _signed(total: Fraction, prefactor: Fraction) -> SqrtRational:
    if not total:
        return SqrtRational.zero()
    return SqrtRational(1 if total > 0 else -1, prefactor * total * total)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> SqrtRational:
    """Exact ``<j1 m1 j2 m2 | J M>``."""
    tj1, tm1, tj2, tm2, tJ, tM = map(twice, (j1, m1, j2, m2, J, M))
    if (tm1 + tm2 != tM or not triangle(tj1, tj2, tJ)
            or not (_m_ok(tj1, tm1) and _m_ok(tj2, tm2) and _m_ok(tJ, tM))):
        return SqrtRational.zero()
    a = _half(tj1 + tj2 - tJ)
    b = _half(tj1 - tm1)
    c = _half(tj2 + tm2)
    d = _half(tJ - tj2 + tm1)
    e = _half(tJ - tj1 - tm2)
    kmin = max(0, -d, -e)
    kmax = min(a, b, c)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (_fact(k) * _fact(a - k) * _fact(b - k) * _fact(c - k)
               * _fact(d + k) * _fact(e + k))
        total += Fraction((-1) ** k, den)
    prefactor = (tJ + 1) * _delta_sq(tj1, tj2, tJ) * (
        _fact(_half(tj1 + tm1)) * _fact(_half(tj1 - tm1))
        * _fact(_half(tj2 + tm2)) * _fact(_half(tj2 - tm2))
        * _fact(_half(tJ + tM)) * _fact(_half(tJ - tM)))
    return _signed(total, prefactor)


def wigner_3j(j1, j2, j3, m1, m2, m3) -> SqrtRational:
    """Exact 3j symbol ``(j1 j2 j3; m1 m2 m3)`` from Racah's single sum.

    Evaluated independently of :func:`clebsch_gordan` so the two can check
    each other through the usual phase relation.
    """
    tj1, tj2, tj3, tm1, tm2, tm3 = map(twice, (j1, j2, j3, m1, m2, m3))
    if (tm1 + tm2 + tm3 != 0 or not triangle(tj1, tj2, tj3)
            or not (_m_ok(tj1, tm1) and _m_ok(tj2, tm2) and _m_ok(tj3, tm3))):
        return SqrtRational.zero()
    # k-limits of the Racah sum
    a1 = _half(tj3 - tj2 + tm1)
    a2 = _half(tj3 - tj1 - tm2)
    b1 = _half(tj1 + tj2 - tj3)
    b2 = _half(tj1 - tm1)
    b3 = _half(tj2 + tm2)
    kmin = max(0, -a1, -a2)
    kmax = min(b1, b2, b3)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (_fact(k) * _fact(a1 + k) * _fact(a2 + k)
               * _fact(b1 - k) * _fact(b2 - k) * _fact(b3 - k))
        total += Fraction((-1) ** k, den)
    if _half(tj1 - tj2 - tm3) % 2:
        total = -total
    prefactor = _delta_sq(tj1, tj2, tj3) * (
        _fact(_half(tj1 + tm1)) * _fact(_half(tj1 - tm1))
        * _fact(_half(tj2 + tm2)) * _fact(_half(tj2 - tm2))
        * _fact(_half(tj3 + tm3)) * _fact(_half(tj3 - tm3)))
    return _signed(total, prefactor)


def wigner_6j(j1, j2, j3, j4, j5, j6) -> SqrtRational:
    """Exact 6j symbol ``{j1 j2 j3; j4 j5 j6}`` by the Racah formula."""
    t = list(map(twice, (j1, j2, j3, j4, j5, j6)))
    tj1, tj2, tj3, tj4, tj5, tj6 = t
    triads = ((tj1, tj2, tj3), (tj1, tj5, tj6), (tj4, tj2, tj6), (tj4, tj5, tj3))
    if not all(triangle(*tr) for tr in triads):
        return SqrtRational.zero()
    lows = [_half(sum(tr)) for tr in triads]
    highs = [_half(tj1 + tj2 + tj4 + tj5), _half(tj2 + tj3 + tj5 + tj6),
             _half(tj3 + tj1 + tj6 + tj4)]
    total = Fraction(0)
    for k in range(max(lows), min(highs) + 1):
        den = 1
        for lo in lows:
            den *= _fact(k - lo)
        for hi in highs:
            den *= _fact(hi - k)
        total += Fraction((-1) ** k * _fact(k + 1), den)
    prefactor = Fraction(1)
    for tr in triads:
        prefactor *= _delta_sq(*tr)
    return _signed(total, prefactor)


def gaunt(l1: int, m1: int, l2: int, m2: int, l3: int, m3: int) -> PiScaled:
    """Exact ``integral Y_l1m1 Y_l2m2 Y_l3m3 dOmega``.

    The result is a :class:`PiScaled` with one power of ``1/sqrt(4 pi)``
    left symbolic, so products of Gaunt coefficients stay exact.
    """
    for l, m in ((l1, m1), (l2, m2), (l3, m3)):
        if int(l) != l or int(m) != m:
            raise ValueError("gaunt takes integer l and m")
        if l < 0:
            raise ValueError("l must be nonnegative")
    if m1 + m2 + m3 or any(abs(m) > l for l, m in ((l1, m1), (l2, m2), (l3, m3))):
        return PiScaled(SqrtRational.zero())
    parity = wigner_3j(l1, l2, l3, 0, 0, 0)
    if not parity:
        return PiScaled(SqrtRational.zero())
    norm = SqrtRational.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1))
    return PiScaled(norm * parity * wigner_3j(l1, l2, l3, m1, m2, m3))


def reduced_C2(l) -> SqrtRational:
    """Reduced matrix element ``<l||C^2||l>`` with ``C^2_q = sqrt(4pi/5) Y_2q``.

    For integer ``l`` this is ``(-1)^l (2l+1) (l 2 l; 0 0 0)``. A half-integer
    ``j`` has no spherical harmonics, so the element is continued formally
    from the diagonal value ``<j m|C^2_0|j m> = (j(j+1) - 3m^2)/((2j-1)(2j+3))``,
    which for integer ``l`` reproduces the formula above.
    """
    tl = twice(l)
    if tl < 0:
        raise ValueError("l must be nonnegative")
    if tl % 2 == 0:
        l = tl // 2
        sign = -1 if l % 2 else 1
        return sign * (2 * l + 1) * wigner_3j(l, 2, l, 0, 0, 0)
    if tl < 2:
        return SqrtRational.zero()
    j = Fraction(tl, 2)
    # stretched state m = j: (j(j+1) - 3j^2)/((2j-1)(2j+3)) = -j/(2j+3)
    diag = -j / (2 * j + 3)
    three_j = wigner_3j(HalfInt(tl), 2, HalfInt(tl), HalfInt(-tl), 0, HalfInt(tl))
    return SqrtRational.from_rational(diag) / three_j
