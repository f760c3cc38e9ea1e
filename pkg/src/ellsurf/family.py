"""Boxes of integer Weierstrass pairs, deterministic sampling, and density reports.

Pairs are handled as raw integer coefficient tuples ``(a_0..a_m, b_0..b_n)`` on
the hot path; a :class:`WeierstrassPair` is built only when a pair needs the
full fiber analysis.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

import numpy as np

from .kodaira import configuration, refine_places
from .mwlattice import TrivialSurfaceError, chi_of, rank_bound, trivial_lattice
from .qpoly import Poly, is_squarefree, mahler_measure
from .report import dumps, surface_report
from .weierstrass import (
    IN_U,
    NOT_IN_S,
    S_ONLY,
    WeierstrassPair,
    classify_membership,
    detect_trivial,
    frame_for,
)

log = logging.getLogger(__name__)

MAX_BOX = 10**9
MAHLER_TOL = 1e-10
_P = (1 << 61) - 1


@dataclass(frozen=True)
class BoxSpec:
    m: int
    n: int
    bound: Fraction
    measure: str = "naive"
    mode: str = "exhaustive"
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.bound <= 0:
            raise ValueError("bound must be positive")
        if self.measure not in ("naive", "mahler"):
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.mode == "exhaustive":
            if self.bound.denominator != 1:
                raise ValueError("exhaustive mode needs an integer bound")
            if self.size > MAX_BOX:
                raise ValueError(f"box of {self.size} tuples exceeds {MAX_BOX}")
        elif self.mode == "sample":
            if self.count < 1:
                raise ValueError("sample mode needs a positive count")
            if not 0 <= self.seed < 2**64:
                raise ValueError("seed must be a 64-bit unsigned integer")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def H(self) -> int:
        return math.floor(self.bound)

    @property
    def width(self) -> int:
        return self.m + self.n + 2

    @property
    def size(self) -> int:
        return (2 * self.H + 1) ** self.width

    @property
    def n_items(self) -> int:
        return self.size if self.mode == "exhaustive" else self.count


# ---------------------------------------------------------------------------
# streams of coefficient tuples


def box_tuple(spec: BoxSpec, index: int) -> tuple[int, ...]:
    """The ``index``-th tuple of the box in lexicographic order."""
    base = 2 * spec.H + 1
    out = []
    for _ in range(spec.width):
        index, r = divmod(index, base)
        out.append(r - spec.H)
    return tuple(reversed(out))


def draw(spec: BoxSpec, index: int) -> tuple[int, ...]:
    """Pair ``index`` of a sample: a pure function of ``(seed, index)``."""
    rng = np.random.default_rng([spec.seed, index])
    return tuple(int(x) for x in rng.integers(-spec.H, spec.H + 1, size=spec.width))


def raw_tuples(spec: BoxSpec, start: int = 0, stop: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    stop = spec.n_items if stop is None else stop
    if spec.mode == "sample":
        for i in range(start, stop):
            yield draw(spec, i)
    elif start == 0 and stop == spec.size:
        yield from itertools.product(range(-spec.H, spec.H + 1), repeat=spec.width)
    else:
        for i in range(start, stop):
            yield box_tuple(spec, i)


def split(spec: BoxSpec, coeffs: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return coeffs[: spec.m + 1], coeffs[spec.m + 1 :]


PASS, REJECT, BOUNDARY = "pass", "reject", "boundary"


def _cutoff_test(f: tuple[int, ...], cutoff: Fraction, tol: float) -> str:
    poly = Poly(f)
    if not poly:
        return PASS  # measure of the zero polynomial taken as 0
    mu = mahler_measure(poly, tol)
    c = float(cutoff)
    band = mu.error + 4 * np.finfo(float).eps * c
    if abs(mu.value - c) <= band:
        return BOUNDARY
    return PASS if mu.value < c else REJECT


def mahler_filter(spec: BoxSpec, coeffs: tuple[int, ...], tol: float = MAHLER_TOL) -> str:
    """``mu(A) < bound^2`` and ``mu(B) < bound^3``; near-ties are reported as boundary."""
    a, b = split(spec, coeffs)
    ra = _cutoff_test(a, spec.bound**2, tol)
    if ra == REJECT:
        return REJECT
    rb = _cutoff_test(b, spec.bound**3, tol)
    if rb == REJECT:
        return REJECT
    return BOUNDARY if BOUNDARY in (ra, rb) else PASS


def admitted(spec: BoxSpec, coeffs: tuple[int, ...]) -> str:
    if spec.measure == "naive":
        return PASS  # every box tuple has naive height <= bound
    return mahler_filter(spec, coeffs)


def _pairs(spec: BoxSpec) -> Iterator[WeierstrassPair]:
    for c in raw_tuples(spec):
        if admitted(spec, c) == PASS:
            a, b = split(spec, c)
            yield WeierstrassPair(Poly(a), Poly(b), spec.m, spec.n)


def enumerate_box(spec: BoxSpec) -> Iterator[WeierstrassPair]:
    """Every admitted integer pair of the box, lexicographically."""
    if spec.mode != "exhaustive":
        raise ValueError("enumerate_box needs an exhaustive spec")
    return _pairs(spec)


def sample_box(spec: BoxSpec) -> Iterator[WeierstrassPair]:
    if spec.mode != "sample":
        raise ValueError("sample_box needs a sample spec")
    return _pairs(spec)


# ---------------------------------------------------------------------------
# fast exact membership on integer tuples


def _conv(a, b) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def discriminant_poly(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    """Coefficients of ``4A^3 + 27B^2`` with trailing zeros stripped."""
    A3 = _conv(_conv(a, a), a)
    B2 = _conv(b, b)
    n = max(len(A3), len(B2))
    D = [0] * n
    for i, x in enumerate(A3):
        D[i] += 4 * x
    for i, y in enumerate(B2):
        D[i] += 27 * y
    while D and D[-1] == 0:
        D.pop()
    return D


def _gcd_degree_mod(f: list[int], g: list[int], p: int) -> int:
    f = [x % p for x in f]
    g = [x % p for x in g]
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    while g:
        inv = pow(g[-1], -1, p)
        dg = len(g) - 1
        while len(f) > dg:
            c = f[-1] * inv % p
            sh = len(f) - 1 - dg
            for j in range(dg):
                f[sh + j] = (f[sh + j] - c * g[j]) % p
            f.pop()
            while f and f[-1] == 0:
                f.pop()
        f, g = g, f
    return len(f) - 1


def squarefree_int(D: list[int]) -> bool:
    """Exact squarefreeness of an integer polynomial; a modular gcd settles the usual case."""
    if len(D) <= 1:
        return bool(D)
    if D[-1] % _P:
        Dp = [i * x for i, x in enumerate(D)][1:]
        if _gcd_degree_mod(D, Dp, _P) == 0:
            return True
    return is_squarefree(Poly(D))


def membership_status(a: tuple[int, ...], b: tuple[int, ...], m: int, n: int) -> str:
    """Same status as :func:`classify_membership`, on raw integer coefficients."""
    D = discriminant_poly(a, b)
    if not D:
        return NOT_IN_S
    if len(D) - 1 != max(3 * m, 2 * n):
        return S_ONLY
    return IN_U if squarefree_int(D) else S_ONLY


def _deg(f: tuple[int, ...]) -> int:
    for i in range(len(f) - 1, -1, -1):
        if f[i]:
            return i
    return -1


def maybe_trivial(a: tuple[int, ...], b: tuple[int, ...], s_tr: int) -> bool:
    """Degree prefilter: ``False`` rules out membership in Z^tr."""
    da, db = _deg(a), _deg(b)
    if da >= 0 and (da % 4 or da // 4 > s_tr):
        return False
    if db >= 0 and (db % 6 or db // 6 > s_tr):
        return False
    if da >= 0 and db >= 0 and da // 4 != db // 6:
        return False
    return True


# ---------------------------------------------------------------------------
# vectorized membership for plain integer boxes

_Q = 2147483647  # 2^31 - 1: residue products stay below 2^62
_CODES = (NOT_IN_S, S_ONLY, IN_U)


def _batch_conv(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros((x.shape[0], x.shape[1] + y.shape[1] - 1), dtype=np.int64)
    for i in range(x.shape[1]):
        for j in range(y.shape[1]):
            out[:, i + j] += x[:, i] * y[:, j]
    return out


def _batch_modinv(x: np.ndarray) -> np.ndarray:
    result = np.ones_like(x)
    base = x % _Q
    e = _Q - 2
    while e:
        if e & 1:
            result = result * base % _Q
        base = base * base % _Q
        e >>= 1
    return result


def _batch_det_nonzero(M: np.ndarray) -> np.ndarray:
    """Whether each square matrix in the batch has nonzero determinant mod ``_Q``."""
    M = M % _Q
    N, s, _ = M.shape
    ok = np.ones(N, dtype=bool)
    idx = np.arange(N)
    for col in range(s):
        sub = M[:, col:, col] != 0
        has = sub.any(axis=1)
        ok &= has
        piv = col + np.argmax(sub, axis=1)
        top = M[idx, col].copy()
        M[idx, col] = M[idx, piv]
        M[idx, piv] = top
        inv = _batch_modinv(np.where(has, M[:, col, col], 1))
        f = M[:, col + 1 :, col] * inv[:, None] % _Q
        M[:, col + 1 :, :] = (M[:, col + 1 :, :] - f[:, :, None] * M[:, None, col, :] % _Q) % _Q
    return ok


def _sylvester(D: np.ndarray, Dp: np.ndarray) -> np.ndarray:
    d = D.shape[1] - 1
    s = 2 * d - 1
    N = D.shape[0]
    M = np.zeros((N, s, s), dtype=np.int64)
    for r in range(d - 1):  # d-1 shifted copies of D (high to low)
        M[:, r, r : r + d + 1] = D[:, ::-1]
    for r in range(d):  # d shifted copies of D'
        M[:, d - 1 + r, r : r + d] = Dp[:, ::-1]
    return M


def batch_fits(m: int, n: int, H: int) -> bool:
    bound = 4 * (m + 1) ** 2 * H**3 + 27 * (n + 1) * H**2
    return bound < 2**62


def batch_membership(coeffs: np.ndarray, m: int, n: int) -> np.ndarray:
    """Status codes (0 not in S, 1 S only, 2 U) for rows ``(a_0..a_m, b_0..b_n)``."""
    a = coeffs[:, : m + 1].astype(np.int64)
    b = coeffs[:, m + 1 :].astype(np.int64)
    A3 = _batch_conv(_batch_conv(a, a), a)
    B2 = _batch_conv(b, b)
    top = max(3 * m, 2 * n)
    D = np.zeros((coeffs.shape[0], top + 1), dtype=np.int64)
    D[:, : A3.shape[1]] += 4 * A3
    D[:, : B2.shape[1]] += 27 * B2
    codes = np.ones(coeffs.shape[0], dtype=np.int8)
    codes[~D.any(axis=1)] = 0
    cand = np.nonzero((D[:, top] != 0) & (D[:, top] % _Q != 0))[0]
    if len(cand):
        Dc = D[cand] % _Q
        Dp = Dc[:, 1:] * np.arange(1, top + 1) % _Q
        good = _batch_det_nonzero(_sylvester(Dc, Dp))
        codes[cand[good]] = 2
    # rows with full degree that the modular test could not settle
    for i in np.nonzero((D[:, top] != 0) & (codes == 1))[0]:
        if squarefree_int([int(x) for x in D[i]]):
            codes[i] = 2
    return codes


def _batch_chunk(spec: BoxSpec, start: int, stop: int) -> "DensityReport":
    base = 2 * spec.H + 1
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(spec.width):
        idx, r = np.divmod(idx, base)
        cols.append(r - spec.H)
    arr = np.stack(cols[::-1], axis=1)
    codes = batch_membership(arr, spec.m, spec.n)
    rep = DensityReport()
    rep.total = len(codes)
    rep.not_in_S = int((codes == 0).sum())
    rep.S_only = int((codes == 1).sum())
    rep.in_U = int((codes == 2).sum())
    s_tr = frame_for(spec.m, spec.n).s_tr
    m = spec.m
    for i in np.nonzero(codes == 1)[0]:
        c = tuple(int(x) for x in arr[i])
        a, b = c[: m + 1], c[m + 1 :]
        if maybe_trivial(a, b, s_tr):
            if detect_trivial(WeierstrassPair(Poly(a), Poly(b), m, spec.n)) is not None:
                rep.in_Ztr += 1
    return rep


# ---------------------------------------------------------------------------
# density reports


@dataclass
class DensityReport:
    total: int = 0
    not_in_S: int = 0
    S_only: int = 0
    in_U: int = 0
    in_Ztr: int = 0
    trivial_other: int = 0  # minimal model has no singular fibers but the pair is outside Z^tr
    boundary: int = 0
    rejected: int = 0
    config_histogram: Counter = field(default_factory=Counter)
    u_config_histogram: Counter = field(default_factory=Counter)
    u_lattice_histogram: Counter = field(default_factory=Counter)
    rank_bound_histogram: Counter = field(default_factory=Counter)

    def __add__(self, other: "DensityReport") -> "DensityReport":
        out = DensityReport()
        for name in ("total", "not_in_S", "S_only", "in_U", "in_Ztr", "trivial_other", "boundary", "rejected"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        for name in ("config_histogram", "u_config_histogram", "u_lattice_histogram", "rank_bound_histogram"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def check(self) -> None:
        assert self.not_in_S + self.S_only + self.in_U == self.total
        assert self.in_Ztr <= self.total

    @property
    def fraction_not_U(self) -> float:
        return (self.total - self.in_U) / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "not_in_S": self.not_in_S,
            "S_only": self.S_only,
            "in_U": self.in_U,
            "in_Ztr": self.in_Ztr,
            "trivial_other": self.trivial_other,
            "boundary": self.boundary,
            "rejected": self.rejected,
            "config_histogram": dict(sorted(self.config_histogram.items())),
            "u_config_histogram": dict(sorted(self.u_config_histogram.items())),
            "u_lattice_histogram": {f"rank={r},det={d}": c for (r, d), c in sorted(self.u_lattice_histogram.items())},
            "rank_bound_histogram": {str(k): v for k, v in sorted(self.rank_bound_histogram.items())},
        }


def _tally(rep: DensityReport, p: WeierstrassPair, status: str, with_analysis: bool, maybe_tr: bool) -> None:
    rep.total += 1
    if status == NOT_IN_S:
        rep.not_in_S += 1
        return
    if status == IN_U:
        rep.in_U += 1
    else:
        rep.S_only += 1
    trivial = status == S_ONLY and maybe_tr and detect_trivial(p) is not None
    if trivial:
        rep.in_Ztr += 1
    if not with_analysis:
        return
    conf = configuration(p, refine_places(p))
    sig = conf.signature_string()
    rep.config_histogram[sig] += 1
    chi = chi_of(p, conf)
    if status == IN_U:
        lat = trivial_lattice(conf, chi)
        rep.u_config_histogram[sig] += 1
        rep.u_lattice_histogram[(lat.rank, lat.det_abs)] += 1
    if trivial:
        return
    if chi == 0:
        rep.trivial_other += 1
        return
    try:
        rep.rank_bound_histogram[rank_bound(p, conf)] += 1
    except TrivialSurfaceError:
        rep.trivial_other += 1


def density_report(pairs: Iterable[WeierstrassPair], with_analysis: bool = False) -> DensityReport:
    rep = DensityReport()
    for p in pairs:
        if all(c.denominator == 1 for c in p.A.coeffs + p.B.coeffs):
            a = tuple(int(c) for c in p.A.coeffs) or (0,)
            b = tuple(int(c) for c in p.B.coeffs) or (0,)
            status = membership_status(a, b, p.m, p.n)
        else:
            status = classify_membership(p).status
        _tally(rep, p, status, with_analysis, True)
    rep.check()
    return rep


def _chunk_report(args) -> tuple[DensityReport, list[str]]:
    spec, start, stop, with_analysis, records = args
    if (
        spec.mode == "exhaustive"
        and spec.measure == "naive"
        and not (with_analysis or records)
        and batch_fits(spec.m, spec.n, spec.H)
    ):
        return _batch_chunk(spec, start, stop), []
    rep = DensityReport()
    lines: list[str] = []
    s_tr = frame_for(spec.m, spec.n).s_tr
    m, n = spec.m, spec.n
    for c in raw_tuples(spec, start, stop):
        verdict = admitted(spec, c)
        if verdict != PASS:
            if verdict == BOUNDARY:
                rep.boundary += 1
            else:
                rep.rejected += 1
            continue
        a, b = c[: m + 1], c[m + 1 :]
        status = membership_status(a, b, m, n)
        maybe_tr = maybe_trivial(a, b, s_tr)
        need_pair = with_analysis or records or (status == S_ONLY and maybe_tr)
        if need_pair:
            p = WeierstrassPair(Poly(a), Poly(b), m, n)
            _tally(rep, p, status, with_analysis, maybe_tr)
            if records:
                lines.append(dumps(surface_report(p)))
        else:
            rep.total += 1
            if status == NOT_IN_S:
                rep.not_in_S += 1
            elif status == IN_U:
                rep.in_U += 1
            else:
                rep.S_only += 1
    return rep, lines


def run_density(
    spec: BoxSpec,
    with_analysis: bool = False,
    workers: int = 1,
    chunk: Optional[int] = None,
    records: bool = False,
) -> tuple[DensityReport, list[str]]:
    """Density report over a whole box or sample, optionally with per-pair JSON lines.

    The result does not depend on ``workers`` or ``chunk``: chunks are index
    ranges and partial reports merge commutatively.
    """
    N = spec.n_items
    if chunk is None:
        chunk = max(1, -(-N // max(1, 4 * workers)))
    jobs = [(spec, s, min(s + chunk, N), with_analysis, records) for s in range(0, N, chunk)]
    rep = DensityReport()
    lines: list[str] = []
    if workers <= 1:
        results = map(_chunk_report, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_chunk_report, jobs)
    try:
        for i, (part, part_lines) in enumerate(results):
            rep = rep + part
            lines.extend(part_lines)
            log.info("chunk %d/%d done", i + 1, len(jobs))
    finally:
        if workers > 1:
            pool.shutdown()
    rep.check()
    return rep, lines
