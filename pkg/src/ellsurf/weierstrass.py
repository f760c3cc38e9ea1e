"""Weierstrass pairs (A, B), their invariants, the degree frame, and family membership."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .qpoly import (
    ONE,
    Poly,
    gcd,
    is_squarefree,
    parse_poly,
    reverse_pad,
    squarefree_decompose,
)

NOT_IN_S = "not_in_S"
S_ONLY = "S_only"
IN_U = "U"


class NotEllipticError(ValueError):
    """Raised when 4A^3 + 27B^2 vanishes identically."""

    code = NOT_IN_S


@dataclass(frozen=True)
class Frame:
    k: int
    alpha: int
    beta: int
    s_tr: int


def frame_for(m: int, n: int) -> Frame:
    k = max(-(-m // 4), -(-n // 6))
    return Frame(k=k, alpha=4 * k - m, beta=6 * k - n, s_tr=min(m // 4, n // 6))


@dataclass(frozen=True, eq=True)
class WeierstrassPair:
    """``y^2 = x^3 + A(t) x + B(t)`` inside the degree box ``deg A <= m, deg B <= n``."""

    A: Poly
    B: Poly
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("frame degrees m, n must be positive")
        if self.A.degree > self.m:
            raise ValueError(f"deg A = {self.A.degree} exceeds m = {self.m}")
        if self.B.degree > self.n:
            raise ValueError(f"deg B = {self.B.degree} exceeds n = {self.n}")

    @classmethod
    def parse(cls, A: str, B: str, m: int, n: int) -> "WeierstrassPair":
        return cls(parse_poly(A), parse_poly(B), m, n)

    @classmethod
    def from_ints(cls, a, b, m: int, n: int) -> "WeierstrassPair":
        return cls(Poly(a), Poly(b), m, n)

    @cached_property
    def D(self) -> Poly:
        """``4A^3 + 27B^2``."""
        return self.A**3 * 4 + self.B**2 * 27

    @property
    def frame(self) -> Frame:
        return frame_for(self.m, self.n)

    def is_elliptic(self) -> bool:
        return not self.D.is_zero()

    def __str__(self) -> str:
        return f"(A, B) = ({self.A}, {self.B}) in frame (m, n) = ({self.m}, {self.n})"


def frame(p: WeierstrassPair) -> Frame:
    return frame_for(p.m, p.n)


@dataclass(frozen=True)
class Invariants:
    c4: Poly
    c6: Poly
    disc: Poly
    D: Poly
    j_num: Poly
    j_den: Poly


def invariants(p: WeierstrassPair) -> Invariants:
    D = p.D
    if not D:
        raise NotEllipticError("4A^3 + 27B^2 = 0: not an elliptic surface")
    A3 = p.A**3
    if not A3:
        j_num, j_den = Poly.constant(0), ONE
    else:
        g = gcd(A3, D)
        j_num, j_den = A3.exact_div(g) * 6912, D.exact_div(g)
        lc = j_den.lc
        j_num, j_den = j_num * (1 / lc), j_den * (1 / lc)
    return Invariants(
        c4=p.A * -48,
        c6=p.B * -864,
        disc=D * -16,
        D=D,
        j_num=j_num,
        j_den=j_den,
    )


@dataclass(frozen=True)
class Membership:
    status: str
    failed: tuple[str, ...] = ()
    deg_D: int | float = 0
    expected_deg: int = 0

    @property
    def in_S(self) -> bool:
        return self.status != NOT_IN_S

    @property
    def in_U(self) -> bool:
        return self.status == IN_U


def classify_membership(p: WeierstrassPair) -> Membership:
    """Place ``p`` in ``not_in_S``, ``S_only`` (naming the failed U condition) or ``U``."""
    D = p.D
    expected = max(3 * p.m, 2 * p.n)
    if not D:
        return Membership(NOT_IN_S, ("D_nonzero",), D.degree, expected)
    failed = []
    if D.degree != expected:
        failed.append("degree")
    if not is_squarefree(D):
        failed.append("squarefree")
    status = IN_U if not failed else S_ONLY
    return Membership(status, tuple(failed), D.degree, expected)


@dataclass(frozen=True)
class TrivialWitness:
    lam: Fraction
    mu: Fraction
    u: Poly

    def reconstruct(self) -> tuple[Poly, Poly]:
        return self.u**4 * self.lam, self.u**6 * self.mu


def _root_of_power(f: Poly, e: int) -> Optional[Poly]:
    """Monic ``u`` with ``f = lc(f) * u**e``, or ``None``."""
    if f.degree == 0:
        return ONE
    u = ONE
    for g, mult in squarefree_decompose(f):
        if mult % e:
            return None
        u = u * g ** (mult // e)
    return u


def detect_trivial(p: WeierstrassPair) -> Optional[TrivialWitness]:
    """Witness ``(lam, mu, u)`` with ``A = lam u^4``, ``B = mu u^6`` and ``deg u <= s_tr``."""
    if not p.D:
        return None
    A, B = p.A, p.B
    uA = _root_of_power(A, 4) if A else None
    uB = _root_of_power(B, 6) if B else None
    if A and uA is None or B and uB is None:
        return None
    if A and B:
        if uA != uB:
            return None
        u = uA
    else:
        u = uA if A else uB
    if u.degree > frame(p).s_tr:
        return None
    return TrivialWitness(lam=A.lc, mu=B.lc, u=u)


def infinity_model(p: WeierstrassPair) -> tuple[Poly, Poly]:
    """Coefficients of the Weierstrass model in the chart ``s = 1/t``."""
    k = frame(p).k
    return reverse_pad(p.A, 4 * k), reverse_pad(p.B, 6 * k)
