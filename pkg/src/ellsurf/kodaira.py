"""Singular fibers: places of Q(t) with constant local data and their Kodaira types.

A finite place is a monic squarefree polynomial whose roots all carry the same
valuations of c4, c6 and the discriminant.  Such clusters are found with gcd
splitting alone, so no factorization into irreducibles is ever needed.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .qpoly import INF, Poly, gcd, reverse_pad, squarefree_decompose, valuation
from .weierstrass import Frame, NotEllipticError, WeierstrassPair, frame, infinity_model


class InconsistentLocalData(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    pi: Optional[Poly]  # None is the point at infinity
    residue_degree: int
    v_c4: int | float
    v_c6: int | float
    v_disc: int

    @property
    def is_infinity(self) -> bool:
        return self.pi is None

    def sort_key(self):
        if self.pi is None:
            return (1, 0, ())
        return (0, self.residue_degree, tuple(self.pi.coeffs))

    def label(self):
        return "inf" if self.pi is None else [str(c) for c in self.pi.coeffs]


@dataclass(frozen=True)
class KodairaFiber:
    kind: str  # "I", "II", "III", "IV", "I*", "IV*", "III*", "II*"
    index: int = 0  # n for I_n and I_n*

    @property
    def name(self) -> str:
        if self.kind == "I":
            return f"I{self.index}"
        if self.kind == "I*":
            return f"I{self.index}*"
        return self.kind

    @property
    def root_lattice(self) -> Optional[str]:
        r = self.lattice_rank
        if r == 0:
            return None
        if self.kind in ("I", "III", "IV"):
            return f"A{r}"
        if self.kind == "I*":
            return f"D{r}"
        return f"E{r}"

    @property
    def lattice_rank(self) -> int:
        return self.component_count - 1

    @property
    def component_count(self) -> int:
        return _COMPONENTS[self.kind](self.index)

    @property
    def euler(self) -> int:
        return _EULER[self.kind](self.index)

    def __str__(self) -> str:
        return self.name


_COMPONENTS = {
    "I": lambda n: max(n, 1),
    "II": lambda n: 1,
    "III": lambda n: 2,
    "IV": lambda n: 3,
    "I*": lambda n: n + 5,
    "IV*": lambda n: 7,
    "III*": lambda n: 8,
    "II*": lambda n: 9,
}
_EULER = {
    "I": lambda n: n,
    "II": lambda n: 2,
    "III": lambda n: 3,
    "IV": lambda n: 4,
    "I*": lambda n: n + 6,
    "IV*": lambda n: 8,
    "III*": lambda n: 9,
    "II*": lambda n: 10,
}

I0 = KodairaFiber("I", 0)
II = KodairaFiber("II")
III = KodairaFiber("III")
IV = KodairaFiber("IV")
I0_STAR = KodairaFiber("I*", 0)
IV_STAR = KodairaFiber("IV*")
III_STAR = KodairaFiber("III*")
II_STAR = KodairaFiber("II*")


def parse_fiber(name: str) -> KodairaFiber:
    for f in (II_STAR, III_STAR, IV_STAR, II, III, IV):
        if name == f.name:
            return f
    if name.startswith("I") and name.endswith("*"):
        return KodairaFiber("I*", int(name[1:-1]))
    if name.startswith("I"):
        return KodairaFiber("I", int(name[1:]))
    raise ValueError(f"unknown fiber type {name!r}")


# ---------------------------------------------------------------------------


def minimal_valuations(v_c4, v_c6, v_disc) -> tuple:
    """Strip ``(4, 6, 12)`` while the local model is non-minimal; returns the triple and the count."""
    r = 0
    while v_c4 >= 4 and v_c6 >= 6 and v_disc >= 12:
        v_c4, v_c6, v_disc = v_c4 - 4, v_c6 - 6, v_disc - 12
        r += 1
    return v_c4, v_c6, v_disc, r


def classify_valuations(v_c4, v_c6, v_disc) -> KodairaFiber:
    """Kodaira type from ``(v(c4), v(c6), v(Delta))`` in residue characteristic 0."""
    a, b, d, _ = minimal_valuations(v_c4, v_c6, v_disc)
    if d == INF:
        raise InconsistentLocalData("infinite discriminant valuation")
    if d == 0:
        return I0
    if a == 0:
        if b != 0:
            raise InconsistentLocalData(f"v(c4)=0 with v(c6)={b}, v(disc)={d}")
        return KodairaFiber("I", d)
    if d == 2 and b == 1:
        return II
    if d == 3 and a == 1 and b >= 2:
        return III
    if d == 4 and a >= 2 and b == 2:
        return IV
    if d == 6 and a >= 2 and b >= 3:
        return I0_STAR
    if d > 6 and a == 2 and b == 3:
        return KodairaFiber("I*", d - 6)
    if d == 8 and a >= 3 and b == 4:
        return IV_STAR
    if d == 9 and a == 3 and b >= 5:
        return III_STAR
    if d == 10 and a >= 4 and b == 5:
        return II_STAR
    raise InconsistentLocalData(f"no Kodaira type for valuations ({v_c4}, {v_c6}, {v_disc})")


# (alpha condition, beta condition, fiber) columns of the fiber-at-infinity table.
_INFINITY_TABLE = (
    (lambda a: a == 0, lambda b: b >= 0, I0),
    (lambda a: a >= 0, lambda b: b == 0, I0),
    (lambda a: a >= 1, lambda b: b == 1, II),
    (lambda a: a == 1, lambda b: b >= 2, III),
    (lambda a: a >= 2, lambda b: b == 2, IV),
    (lambda a: a == 2, lambda b: b >= 3, I0_STAR),
    (lambda a: a >= 2, lambda b: b == 3, I0_STAR),
    (lambda a: a >= 3, lambda b: b == 4, IV_STAR),
    (lambda a: a == 3, lambda b: b >= 5, III_STAR),
    (lambda a: a >= 4, lambda b: b == 5, II_STAR),
)


def infinity_fiber_from_table(fr: Frame) -> KodairaFiber:
    for fa, fb, fiber in _INFINITY_TABLE:
        if fa(fr.alpha) and fb(fr.beta):
            return fiber
    raise ValueError(f"(alpha, beta) = ({fr.alpha}, {fr.beta}) lies outside the table")


# ---------------------------------------------------------------------------


def split_by_valuation(g: Poly, f: Poly) -> list[tuple[Poly, int | float]]:
    """Split squarefree monic ``g`` into pieces on which ``v(f)`` is constant."""
    if not f:
        return [(g, INF)]
    pieces = []
    rest, cur, level = g, f, 0
    while rest.degree > 0:
        h = gcd(rest, cur)
        low = rest.exact_div(h)
        if low.degree > 0:
            pieces.append((low, level))
        if h.degree <= 0:
            break
        rest, cur, level = h, cur.exact_div(h), level + 1
    return pieces


def refine_places(p: WeierstrassPair) -> list[Place]:
    """All finite places with ``v(Delta) > 0`` plus the place at infinity, in canonical order."""
    D = p.D
    if not D:
        raise NotEllipticError("4A^3 + 27B^2 = 0: not an elliptic surface")
    places = []
    for g, e in squarefree_decompose(D):
        for g4, v4 in split_by_valuation(g, p.A):
            for g6, v6 in split_by_valuation(g4, p.B):
                places.append(Place(g6, g6.degree, v4, v6, e))
    places.append(infinity_place(p))
    places.sort(key=Place.sort_key)
    return places


def infinity_place(p: WeierstrassPair) -> Place:
    k = frame(p).k
    A_inf, B_inf = infinity_model(p)
    D_inf = reverse_pad(p.D, 12 * k)
    return Place(None, 1, A_inf.ord0(), B_inf.ord0(), D_inf.ord0())


def place_valuations(p: WeierstrassPair, pi: Poly) -> tuple:
    """Recompute ``(v(c4), v(c6), v(Delta))`` at a finite cluster directly."""
    return valuation(p.A, pi), valuation(p.B, pi), valuation(p.D, pi)


@dataclass(frozen=True)
class ConfigEntry:
    fiber: KodairaFiber
    multiplicity: int
    place: Optional[Place] = None


@dataclass(frozen=True)
class Configuration:
    entries: tuple[ConfigEntry, ...]

    @classmethod
    def from_counts(cls, counts: dict[str, int]) -> "Configuration":
        return cls(tuple(ConfigEntry(parse_fiber(k), v) for k, v in counts.items()))

    def counts(self) -> dict[str, int]:
        c: Counter = Counter()
        for e in self.entries:
            c[e.fiber.name] += e.multiplicity
        return dict(c)

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        """Canonical multiset over the algebraic closure, e.g. ``(('I1', 3), ('III*', 1))``."""
        return tuple(sorted(self.counts().items(), key=lambda kv: (_type_order(kv[0]), kv[0])))

    def signature_string(self) -> str:
        return ",".join(f"{name}x{c}" for name, c in self.signature) or "smooth"

    def fibers(self) -> list[tuple[KodairaFiber, int]]:
        return [(e.fiber, e.multiplicity) for e in self.entries]

    def same_as(self, other: "Configuration") -> bool:
        return self.signature == other.signature


def _type_order(name: str):
    f = parse_fiber(name)
    return (f.euler, name)


def configuration(p: WeierstrassPair, places: Optional[list[Place]] = None) -> Configuration:
    if places is None:
        places = refine_places(p)
    entries = []
    for pl in places:
        fiber = classify_valuations(pl.v_c4, pl.v_c6, pl.v_disc)
        if fiber != I0:
            entries.append(ConfigEntry(fiber, pl.residue_degree, pl))
    return Configuration(tuple(entries))


def euler_number(c: Configuration) -> int:
    return sum(e.fiber.euler * e.multiplicity for e in c.entries)
