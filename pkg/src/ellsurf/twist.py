"""Quadratic twists (A, B) -> (d^2 A, d^3 B) and twist/isomorphism detection."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .qpoly import Poly
from .weierstrass import WeierstrassPair, classify_membership

TRIAL_LIMIT = 10**6


def twist(p: WeierstrassPair, d) -> WeierstrassPair:
    d = Fraction(d)
    if not d:
        raise ValueError("twist by zero")
    return WeierstrassPair(p.A * d**2, p.B * d**3, p.m, p.n)


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a nonzero integer, by trial division up to 10^6."""
    if n == 0:
        raise ValueError("zero has no square class")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    q = 2
    while q * q <= n and q <= TRIAL_LIMIT:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e % 2:
            out *= q
        q += 1 if q == 2 else 2
    if n > 1:
        if n >= TRIAL_LIMIT * TRIAL_LIMIT and math.isqrt(n) ** 2 != n:
            raise ValueError(f"cofactor {n} is too large to classify")
        r = math.isqrt(n)
        if r * r != n:
            out *= n
    return sign * out


def square_class(d) -> int:
    d = Fraction(d)
    return squarefree_part(d.numerator * d.denominator)


def rational_root(q: Fraction, e: int) -> Optional[Fraction]:
    """Exact real ``e``-th root of ``q`` if rational (positive root for even ``e``)."""
    q = Fraction(q)
    if q < 0:
        if e % 2 == 0:
            return None
        r = rational_root(-q, e)
        return -r if r is not None else None

    def iroot(n: int) -> Optional[int]:
        r = round(n ** (1.0 / e)) if n < 2**52 else _int_nth_root(n, e)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**e == n:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _int_nth_root(n: int, e: int) -> int:
    lo, hi = 0, 1 << (n.bit_length() // e + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**e <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _ratio(f2: Poly, f1: Poly) -> Optional[Fraction]:
    """Constant ``c`` with ``f2 = c * f1`` (``f1 != 0``), else ``None``."""
    c = f2.lc / f1.lc if f2 else Fraction(0)
    return c if f2 == f1 * c else None


@dataclass(frozen=True)
class TwistDetection:
    d: Fraction
    d_class: int
    ambiguous: bool


def detect_twist(p1: WeierstrassPair, p2: WeierstrassPair) -> Optional[TwistDetection]:
    """``d`` with ``(A2, B2) = (d^2 A1, d^3 B1)``, reported by its class in Q*/Q*^2."""
    if bool(p1.A) != bool(p2.A) or bool(p1.B) != bool(p2.B):
        return None
    rA = _ratio(p2.A, p1.A) if p1.A else None
    rB = _ratio(p2.B, p1.B) if p1.B else None
    if p1.A and rA is None or p1.B and rB is None:
        return None
    if p1.A and p1.B:
        d = rB / rA
        if d * d != rA:
            return None
        return TwistDetection(d, square_class(d), False)
    if p1.B:
        d = rational_root(rB, 3)
        if d is None:
            return None
        return TwistDetection(d, square_class(d), False)
    if p1.A:
        d = rational_root(rA, 2)
        if d is None:
            return None
        return TwistDetection(d, square_class(d), True)
    return None


def is_isomorphic(p1: WeierstrassPair, p2: WeierstrassPair) -> bool:
    """Constant rescaling ``(A, B) -> (u^4 A, u^6 B)`` with rational ``u``."""
    if bool(p1.A) != bool(p2.A) or bool(p1.B) != bool(p2.B):
        return False
    rA = _ratio(p2.A, p1.A) if p1.A else None
    rB = _ratio(p2.B, p1.B) if p1.B else None
    if p1.A and rA is None or p1.B and rB is None:
        return False
    if p1.A and p1.B:
        u2 = rB / rA
        return u2 * u2 == rA and rational_root(u2, 2) is not None
    if p1.A:
        return rational_root(rA, 4) is not None
    if p1.B:
        return rational_root(rB, 6) is not None
    return True


@dataclass(frozen=True)
class ProbeResult:
    d: int
    in_U: bool
    isomorphic: bool


def tw_probe(p: WeierstrassPair, ds: Sequence[int]) -> list[ProbeResult]:
    out = []
    for d in ds:
        q = twist(p, d)
        out.append(ProbeResult(int(d), classify_membership(q).in_U, is_isomorphic(p, q)))
    return out
