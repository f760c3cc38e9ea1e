"""Trivial lattice, Shioda-Tate rank bounds, Shioda heights of sections, torsion bounds."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .kodaira import (
    Configuration,
    KodairaFiber,
    Place,
    configuration,
    euler_number,
    minimal_valuations,
    refine_places,
)
from .qpoly import INF, ONE, T, Poly, RatFunc, gcd, squarefree_decompose
from .weierstrass import (
    NotEllipticError,
    WeierstrassPair,
    classify_membership,
    detect_trivial,
    frame,
    infinity_model,
)

MAX_PRIME = 10**4


class TrivialSurfaceError(ValueError):
    """Shioda-Tate does not apply to a trivial (product) elliptic surface."""


class EulerMismatch(ValueError):
    pass


class NotOnCurve(ValueError):
    pass


class InconsistentSection(ValueError):
    pass


class BadSpecialization(ValueError):
    pass


class NoUsablePrime(ValueError):
    pass


# ---------------------------------------------------------------------------
# Trivial lattice


def root_lattice_det(label: str) -> int:
    kind, r = label[0], int(label[1:])
    if kind == "A":
        return r + 1
    if kind == "D":
        return 4
    return {6: 3, 7: 2, 8: 1}[r]


@dataclass(frozen=True)
class TrivialLattice:
    rank: int
    det_abs: int
    summands: tuple[tuple[str, int], ...]
    chi: int

    @property
    def gram_zero_fiber(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Gram matrix of the span of the zero section and a fiber."""
        return ((-self.chi, 1), (1, 0))


def trivial_lattice(c: Configuration, k: int) -> TrivialLattice:
    e = euler_number(c)
    if e != 12 * k:
        raise EulerMismatch(f"Euler number {e} != 12k = {12 * k}")
    summands: Counter = Counter()
    for fiber, mult in c.fibers():
        if fiber.root_lattice:
            summands[fiber.root_lattice] += mult
    rank = 2 + sum(int(lab[1:]) * cnt for lab, cnt in summands.items())
    det = math.prod(root_lattice_det(lab) ** cnt for lab, cnt in summands.items())
    return TrivialLattice(rank, det, tuple(sorted(summands.items())), k)


def chi_of(p: WeierstrassPair, c: Configuration) -> int:
    """Arithmetic genus chi(O_X) of the minimal model."""
    e = euler_number(c)
    if e % 12:
        raise EulerMismatch(f"Euler number {e} is not divisible by 12")
    chi = e // 12
    if classify_membership(p).in_U and chi != frame(p).k:
        raise EulerMismatch(f"U-member with chi = {chi} != k = {frame(p).k}")
    return chi


def rank_bound(p: WeierstrassPair, c: Optional[Configuration] = None) -> int:
    """Shioda-Tate bound ``10 chi - 2 - sum(rank of root lattices)`` on rank E(Qbar(t))."""
    if not p.D:
        raise NotEllipticError("4A^3 + 27B^2 = 0: not an elliptic surface")
    if detect_trivial(p) is not None:
        raise TrivialSurfaceError("trivial elliptic surface: Shioda-Tate inapplicable")
    if c is None:
        c = configuration(p)
    chi = chi_of(p, c)
    if chi == 0:
        raise TrivialSurfaceError("minimal model has no singular fibers: trivial surface")
    lat = trivial_lattice(c, chi)
    bound = 10 * chi - lat.rank
    if bound < 0:
        raise ArithmeticError(f"negative rank bound {bound}")
    return bound


# ---------------------------------------------------------------------------
# Sections and heights


@dataclass(frozen=True)
class Section:
    x: RatFunc
    y: RatFunc

    @classmethod
    def of(cls, x, y) -> "Section":
        return cls(RatFunc.lift(x), RatFunc.lift(y))

    def __neg__(self) -> "Section":
        return Section(self.x, -self.y)


def on_curve(p: WeierstrassPair, P: Section) -> bool:
    return P.y**2 == P.x**3 + P.x * p.A + p.B


# Height correction for a section meeting a non-identity component.  Tuples
# are candidate sets when the component index is not determined.
def contribution_candidates(f: KodairaFiber) -> tuple[Fraction, ...]:
    if f.kind == "I":
        n = f.index
        if n < 2:
            return ()
        return tuple(sorted({Fraction(i * (n - i), n) for i in range(1, n)}))
    if f.kind == "I*":
        if f.index == 0:
            return (Fraction(1),)
        return (Fraction(1), 1 + Fraction(f.index, 4))
    return {
        "III": (Fraction(1, 2),),
        "IV": (Fraction(2, 3),),
        "IV*": (Fraction(4, 3),),
        "III*": (Fraction(3, 2),),
    }.get(f.kind, ())


@dataclass(frozen=True)
class Contribution:
    place: Place
    fiber: KodairaFiber
    count: int  # geometric points of the place where P meets a non-identity component
    lower: Fraction
    upper: Fraction


@dataclass(frozen=True)
class HeightResult:
    lower: Fraction
    upper: Fraction
    exact: bool
    po_intersection: Fraction
    chi: int
    contributions: tuple[Contribution, ...] = field(default_factory=tuple)

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError("height is only known up to an interval")
        return self.lower


def _half_pole_order(v: int | float) -> Fraction:
    """Local (P.O) from the valuation of x in a minimal model."""
    if v >= 0:
        return Fraction(0)
    if v % 2:
        raise InconsistentSection(f"x has a pole of odd order {-v}")
    return Fraction(-v, 2)


def _singular_cluster(pi: Poly, A: Poly, x: RatFunc, y: RatFunc) -> Poly:
    """Roots of ``pi`` where the reduction of ``(x, y)`` is the singular point of the cubic."""
    finite = pi.exact_div(gcd(pi, x.den))
    # 3x^2 + A vanishes at rho iff 3 xn^2 + A xd^2 does (xd(rho) != 0 on ``finite``)
    slope = x.num**2 * 3 + A * x.den**2
    return gcd(gcd(finite, y.num), slope)


def height(p: WeierstrassPair, P: Section) -> HeightResult:
    """Shioda height ``2 chi + 2 (P.O) - sum of local corrections``."""
    if not on_curve(p, P):
        raise NotOnCurve("section does not satisfy the Weierstrass equation")
    if detect_trivial(p) is not None:
        raise TrivialSurfaceError("height pairing on a trivial surface is not defined here")
    places = refine_places(p)
    conf = configuration(p, places)
    chi = chi_of(p, conf)
    if chi == 0:
        raise TrivialSurfaceError("minimal model has no singular fibers: trivial surface")
    k = frame(p).k

    # global minimal model over the finite part: divide out u = prod pi^r
    u = ONE
    r_inf = 0
    for pl in places:
        r = minimal_valuations(pl.v_c4, pl.v_c6, pl.v_disc)[3]
        if pl.is_infinity:
            r_inf = r
        elif r:
            u = u * pl.pi**r
    A_min = p.A.exact_div(u**4)
    x_min = P.x / RatFunc(u**2)
    y_min = P.y / RatFunc(u**3)

    po = Fraction(0)
    if x_min.den.degree > 0:
        for g, e in squarefree_decompose(x_min.den):
            po += _half_pole_order(-e) * g.degree

    A_inf, _ = infinity_model(p)
    s_r = Poly.monomial(r_inf)
    A_inf_min = A_inf.exact_div(s_r**4)
    x_inf = P.x.reverse(2 * k) / RatFunc(s_r**2)
    y_inf = P.y.reverse(3 * k) / RatFunc(s_r**3)
    po += _half_pole_order(_ord0(x_inf))

    contribs = []
    lo_sum = hi_sum = Fraction(0)
    exact = True
    for entry in conf.entries:
        cands = contribution_candidates(entry.fiber)
        if not cands:
            continue
        pl = entry.place
        if pl.is_infinity:
            bad = _singular_cluster(T, A_inf_min, x_inf, y_inf)
        else:
            bad = _singular_cluster(pl.pi, A_min, x_min, y_min)
        cnt = max(bad.degree, 0)
        if cnt == 0:
            continue
        lo, hi = cands[0] * cnt, cands[-1] * cnt
        if lo != hi:
            exact = False
        lo_sum += lo
        hi_sum += hi
        contribs.append(Contribution(pl, entry.fiber, cnt, lo, hi))

    base = 2 * chi + 2 * po
    lower = max(base - hi_sum, Fraction(0))
    upper = base - lo_sum
    if upper < 0:
        raise InconsistentSection(f"negative height {upper}")
    return HeightResult(lower, upper, exact and lower == upper, po, chi, tuple(contribs))


def _ord0(r: RatFunc) -> int | float:
    if r.is_zero():
        return INF
    return r.num.ord0() - r.den.ord0()


# ---------------------------------------------------------------------------
# Specialization and torsion


def specialize(p: WeierstrassPair, t0) -> tuple[Fraction, Fraction]:
    t0 = Fraction(t0)
    if p.D(t0) == 0:
        raise BadSpecialization(f"singular fiber at t = {t0}")
    return p.A(t0), p.B(t0)


def count_points(a: int, b: int, q: int) -> int:
    """``#E(F_q)`` for ``y^2 = x^3 + a x + b`` by exhaustive counting (projective point included)."""
    sq = [0] * q
    for y in range(q):
        sq[y * y % q] += 1
    a %= q
    b %= q
    return 1 + sum(sq[(x * x * x + a * x + b) % q] for x in range(q))


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


@dataclass(frozen=True)
class TorsionBound:
    bound: int
    counts: tuple[tuple[int, int], ...]
    skipped: tuple[int, ...]


def torsion_bound_detail(p: WeierstrassPair, t0, primes: Sequence[int]) -> TorsionBound:
    a, b = specialize(p, t0)
    counts = []
    skipped = []
    for q in primes:
        if q > MAX_PRIME:
            raise ValueError(f"prime {q} exceeds {MAX_PRIME}")
        if q == 2 or not _is_prime(q):
            raise ValueError(f"{q} is not an odd prime")
        if a.denominator % q == 0 or b.denominator % q == 0:
            skipped.append(q)
            continue
        ai = a.numerator * pow(a.denominator, -1, q) % q
        bi = b.numerator * pow(b.denominator, -1, q) % q
        if (4 * ai**3 + 27 * bi**2) % q == 0:
            skipped.append(q)
            continue
        counts.append((q, count_points(ai, bi, q)))
    if not counts:
        raise NoUsablePrime("no prime of good reduction in the list")
    g = 0
    for _, c in counts:
        g = math.gcd(g, c)
    return TorsionBound(g, tuple(counts), tuple(skipped))


def torsion_bound(p: WeierstrassPair, t0, primes: Sequence[int]) -> int:
    """A multiple of the torsion order of E(Q(t)), via one good fiber and its reductions."""
    return torsion_bound_detail(p, t0, primes).bound
