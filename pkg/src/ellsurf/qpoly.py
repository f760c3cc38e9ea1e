"""Exact univariate polynomials over Q, rational functions, and two height measures.

Coefficients are stored low to high as :class:`fractions.Fraction`.  The zero
polynomial has degree ``NEG_INF`` so that expressions such as ``4*k - deg(A)``
come out as ``+inf`` (the valuation of zero) instead of a bogus integer.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

INF = math.inf
NEG_INF = -math.inf

MAX_EXPONENT = 10**6

Scalar = Union[int, Fraction]


class PolySyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class MahlerConvergenceError(ArithmeticError):
    pass


def _strip(cs: list) -> tuple:
    i = len(cs)
    while i and cs[i - 1] == 0:
        i -= 1
    return tuple(cs[:i])


class Poly:
    """Immutable polynomial in ``t`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _strip([Fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # coeffs already Fractions and stripped
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", coeffs)
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, e: int, c: Scalar = 1) -> "Poly":
        return cls([0] * e + [c])

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def ord0(self) -> int | float:
        """Order of vanishing at t = 0 (``INF`` for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INF

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return ZERO
            return Poly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        if all(x.denominator == 1 for x in a) and all(x.denominator == 1 for x in b):
            ia = [x.numerator for x in a]
            ib = [x.numerator for x in b]
            out = [0] * (len(ia) + len(ib) - 1)
            for i, x in enumerate(ia):
                if x:
                    for j, y in enumerate(ib):
                        out[i + j] += x * y
            return Poly._raw(tuple(Fraction(x) for x in out))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        b = other.coeffs
        db = len(b) - 1
        r = list(self.coeffs)
        if len(r) <= db:
            return ZERO, self
        inv = 1 / b[-1]
        q = [Fraction(0)] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c:
                c = c * inv
                q[i - db] = c
                for j in range(db):
                    r[i - db + j] -= c * b[j]
            r[i] = Fraction(0)
        return Poly._raw(_strip(q)), Poly._raw(_strip(r[:db]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def scale(self, c: Scalar) -> "Poly":
        return self * c

    def derivative(self) -> "Poly":
        return Poly._raw(_strip([i * c for i, c in enumerate(self.coeffs)][1:]))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly._raw(tuple(c / lc for c in self.coeffs))

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- integer views -------------------------------------------------------
    def primitive_ints(self) -> list[int]:
        """Integer coefficients of the primitive part (positive leading coefficient)."""
        return _primitive([c for c in self.coeffs])

    # -- formatting ----------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


ZERO = Poly._raw(())
ONE = Poly._raw((Fraction(1),))
T = Poly._raw((Fraction(0), Fraction(1)))


def format_poly(f: Poly, var: str = "t") -> str:
    """Render ``f`` in the input grammar, highest degree first."""
    if not f:
        return "0"
    parts: list[str] = []
    for e in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[e]
        if not c:
            continue
        neg = c < 0
        a = -c if neg else c
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            body = str(a)
        elif a == 1 and parts:
            body = mono
        elif a == 1 and not neg:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def coefficient_strings(f: Poly) -> list[str]:
    return [str(c) for c in f.coeffs]


def from_coefficient_strings(cs: Sequence[str]) -> Poly:
    return Poly(Fraction(c) for c in cs)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.group(1) is not None:
            toks.append(("uint", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            ch = m.group(2)
            if ch in "+-*/^t":
                toks.append((ch, ch, m.start(2)))
            else:
                raise PolySyntaxError(f"unexpected character {ch!r}", len(text[: m.start(2)].encode()))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


def parse_poly(text: str) -> Poly:
    """Parse the ASCII grammar ``poly := term (("+"|"-") term)*``.

    >>> parse_poly("1/2*t^2 - 3").coeffs
    (Fraction(-3, 1), Fraction(0, 1), Fraction(1, 2))
    """
    toks = _tokenize(text)
    i = 0

    def offset(k: int) -> int:
        return len(text[: toks[k][2]].encode())

    def expect(kind: str) -> str:
        nonlocal i
        if toks[i][0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {toks[i][1] or 'end of input'!r}", offset(i))
        val = toks[i][1]
        i += 1
        return val

    def mono() -> int:
        nonlocal i
        expect("t")
        if toks[i][0] == "^":
            i += 1
            at = i
            e = int(expect("uint"))
            if e > MAX_EXPONENT:
                raise PolySyntaxError(f"exponent {e} exceeds {MAX_EXPONENT}", offset(at))
            return e
        return 1

    def coeff() -> Fraction:
        nonlocal i
        sign = 1
        if toks[i][0] == "-":
            sign = -1
            i += 1
        num = int(expect("uint"))
        if toks[i][0] == "/":
            i += 1
            at = i
            den = int(expect("uint"))
            if den == 0:
                raise PolySyntaxError("zero denominator", offset(at))
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    def term() -> tuple[Fraction, int]:
        nonlocal i
        if toks[i][0] == "t":
            return Fraction(1), mono()
        c = coeff()
        if toks[i][0] == "*":
            i += 1
            return c, mono()
        return c, 0

    acc: dict[int, Fraction] = {}

    def add(c: Fraction, e: int) -> None:
        acc[e] = acc.get(e, Fraction(0)) + c

    add(*term())
    while toks[i][0] in ("+", "-"):
        sign = 1 if toks[i][0] == "+" else -1
        i += 1
        c, e = term()
        add(sign * c, e)
    if toks[i][0] != "end":
        raise PolySyntaxError(f"unexpected token {toks[i][1]!r}", offset(i))
    if not acc:
        return ZERO
    out = [Fraction(0)] * (max(acc) + 1)
    for e, c in acc.items():
        out[e] = c
    return Poly(out)


# ---------------------------------------------------------------------------
# gcd and friends (integer primitive remainder sequences)


def _primitive(cs: Sequence[Fraction]) -> list[int]:
    if not cs:
        return []
    den = reduce(math.lcm, (c.denominator for c in cs), 1)
    ints = [c.numerator * (den // c.denominator) for c in cs]
    return _primitive_int(ints)


def _primitive_int(ints: list[int]) -> list[int]:
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        return []
    if ints[-1] < 0:
        g = -g
    if g != 1:
        ints = [x // g for x in ints]
    return ints


def _prem(a: list[int], b: list[int]) -> list[int]:
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) > db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j, y in enumerate(b):
            r[shift + j] -= c * y
        while r and r[-1] == 0:
            r.pop()
    return r


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return _primitive_int(a)
    while True:
        r = _prem(a, b)
        if not r:
            return _primitive_int(b)
        if len(r) == 1:
            return [1]
        a, b = b, _primitive_int(r)


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over Q; ``gcd(0, 0) = 0``."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if len(f.coeffs) == 1 or len(g.coeffs) == 1:
        return ONE
    ints = _int_gcd(_primitive(f.coeffs), _primitive(g.coeffs))
    lc = ints[-1]
    return Poly._raw(tuple(Fraction(x, lc) for x in ints))


def is_squarefree(f: Poly) -> bool:
    if not f:
        return False
    return gcd(f, f.derivative()).degree <= 0


def squarefree_decompose(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic, squarefree, pairwise coprime ``(factor, multiplicity)`` pairs.

    ``f == lc(f) * prod(g**e)``.  Constants give an empty list.
    """
    if not f:
        raise ValueError("squarefree decomposition of the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return []
    fp = f.derivative()
    a = gcd(f, fp)
    b = f.exact_div(a)
    c = fp.exact_div(a)
    d = c - b.derivative()
    out: list[tuple[Poly, int]] = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def valuation(f: Poly, p: Poly) -> int | float:
    """Largest ``e`` with ``p**e | f``; ``INF`` when ``f == 0``."""
    if p.degree < 1 or p.lc != 1:
        raise ValueError("valuation requires a monic polynomial of positive degree")
    if not f:
        return INF
    e = 0
    while True:
        q, r = divmod(f, p)
        if r:
            return e
        f = q
        e += 1


def reverse_pad(f: Poly, d: int) -> Poly:
    """``s**d * f(1/s)``: the coefficient window of length ``d + 1`` reversed."""
    if f.degree > d:
        raise ValueError(f"degree {f.degree} exceeds padding window {d}")
    cs = list(f.coeffs) + [Fraction(0)] * (d + 1 - len(f.coeffs))
    return Poly._raw(_strip(cs[::-1]))


def naive_height(f: Poly) -> Fraction:
    return max((abs(c) for c in f.coeffs), default=Fraction(0))


# ---------------------------------------------------------------------------
# Mahler measure


@dataclass(frozen=True)
class MahlerResult:
    value: float
    error: float
    iterations: int

    def __float__(self) -> float:
        return self.value


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Roots of a squarefree polynomial (coefficients low to high) by Aberth iteration."""
    n = len(coeffs) - 1
    lc = coeffs[-1]
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    absc = np.abs(coeffs)
    radius = 1.0 + float(absc[:-1].max()) / abs(lc)
    k = np.arange(n)
    z = radius * np.exp(1j * (2 * np.pi * k / n + 0.4))
    hi = coeffs[::-1]
    dhi = dcoeffs[::-1]
    absh = absc[::-1]
    polish = 2  # extra steps once the residual test passes
    for it in range(1, max_iter + 1):
        pz = np.polyval(hi, z)
        dpz = np.polyval(dhi, z)
        scale = np.maximum(np.polyval(absh, np.abs(z)), np.finfo(float).tiny)
        resid = np.abs(pz) / scale
        if np.all(resid < tol):
            if polish == 0 or np.all(pz == 0):
                return z, pz, it
            polish -= 1
        w = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = (1.0 / diff).sum(axis=1) - 1.0  # drop the unit diagonal
        z = z - w / (1.0 - w * s)
    raise MahlerConvergenceError(f"root iteration did not converge within {max_iter} steps")


def mahler_measure(f: Poly, tol: float = 1e-10, max_iter: int = 10_000) -> MahlerResult:
    """``|lc| * prod(max(1, |root|))`` with an a-posteriori error estimate.

    Roots are found on each squarefree factor separately so that repeated
    roots do not degrade the iteration.
    """
    if not f:
        raise ValueError("Mahler measure of the zero polynomial")
    value = float(abs(f.lc))
    rel_err = 0.0
    iters = 0
    for g, e in squarefree_decompose(f):
        g = Poly._raw(g.coeffs[g.ord0():])  # roots at 0 contribute 1
        cs = np.array([float(c) for c in g.coeffs], dtype=np.complex128)
        if g.degree < 1:
            continue
        if g.degree == 1:
            r = abs(float(-g.coeffs[0]))
            value *= max(1.0, r) ** e
            continue
        z, pz, it = _aberth(cs, tol, max_iter)
        iters = max(iters, it)
        n = len(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        # Weierstrass inclusion radii: a root lies within n*|p(z)/(lc*prod(z-z_j))|
        rad = n * np.abs(pz / (cs[-1] * diff.prod(axis=1)))
        mags = np.abs(z)
        value *= float(np.prod(np.maximum(1.0, mags))) ** e
        rel_err += e * float(np.sum(rad / np.maximum(1.0, mags)))
    rel_err += 8 * f.degree * np.finfo(float).eps
    return MahlerResult(value, float(value * rel_err), iters)


# ---------------------------------------------------------------------------
# Rational functions


class RatFunc:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = ONE):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ZERO, ONE
        else:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly([x]))

    def __eq__(self, other) -> bool:
        o = RatFunc.lift(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.lift(other))

    def __mul__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __pow__(self, e: int) -> "RatFunc":
        return RatFunc(self.num**e, self.den**e)

    def is_zero(self) -> bool:
        return not self.num

    def order_at_infinity(self) -> int | float:
        """``deg(den) - deg(num)``, i.e. the valuation at the point at infinity."""
        if not self.num:
            return INF
        return self.den.degree - self.num.degree

    def reverse(self, w: int) -> "RatFunc":
        """``s**w * r(1/s)`` as a rational function in ``s``."""
        if not self.num:
            return self
        dn, dd = self.num.degree, self.den.degree
        num = reverse_pad(self.num, dn)
        den = reverse_pad(self.den, dd)
        shift = w - dn + dd
        if shift >= 0:
            num = num * Poly.monomial(shift)
        else:
            den = den * Poly.monomial(-shift)
        return RatFunc(num, den)

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def parse_ratfunc(text: str) -> RatFunc:
    """Parse ``P``, ``(P)``, ``(P)/(Q)``, or ``P/Q`` with ``P``, ``Q`` in the polynomial grammar.

    In the bare form a slash is read as a rational coefficient whenever the
    whole text is a polynomial; otherwise the first slash that leaves a valid
    polynomial on both sides separates numerator and denominator.
    """
    s = text.strip()
    if not s.startswith("("):
        try:
            return RatFunc(parse_poly(s))
        except PolySyntaxError as err:
            for i, ch in enumerate(s):
                if ch != "/":
                    continue
                try:
                    return RatFunc(parse_poly(s[:i]), parse_poly(s[i + 1 :]))
                except PolySyntaxError:
                    continue
            raise err
    close = s.find(")")
    if close < 0:
        raise PolySyntaxError("unbalanced parenthesis", len(text))
    num = parse_poly(s[1:close])
    rest = s[close + 1 :].strip()
    if not rest:
        return RatFunc(num)
    if not (rest.startswith("/") and rest[1:].strip().startswith("(") and rest.endswith(")")):
        raise PolySyntaxError("expected '/(denominator)'", len(text[: text.find(")") + 1].encode()))
    den = parse_poly(rest[1:].strip()[1:-1])
    return RatFunc(num, den)
