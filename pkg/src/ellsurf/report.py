"""JSON-ready report records for a single surface."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .kodaira import Place, configuration, euler_number, refine_places
from .mwlattice import (
    HeightResult,
    TorsionBound,
    TrivialSurfaceError,
    chi_of,
    rank_bound,
    trivial_lattice,
)
from .qpoly import INF, Poly, coefficient_strings
from .weierstrass import WeierstrassPair, classify_membership, detect_trivial, frame, invariants


def rat(x) -> str:
    return str(Fraction(x))


def val(v) -> Any:
    return "inf" if v == INF else int(v)


def poly_json(f: Poly) -> list[str]:
    return coefficient_strings(f)


def place_json(pl: Place) -> Any:
    return pl.label()


def dumps(doc: dict) -> str:
    """Canonical single-line JSON."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def surface_report(p: WeierstrassPair) -> dict:
    fr = frame(p)
    mem = classify_membership(p)
    doc: dict[str, Any] = {
        "input": {"A": poly_json(p.A), "B": poly_json(p.B), "m": p.m, "n": p.n},
        "frame": {"k": fr.k, "alpha": fr.alpha, "beta": fr.beta, "s_tr": fr.s_tr},
        "membership": {
            "status": mem.status,
            "failed": list(mem.failed),
            "deg_D": val(mem.deg_D) if mem.in_S else None,
            "expected_deg": mem.expected_deg,
            "trivial": None,
        },
        "invariants": None,
        "places": None,
        "configuration": None,
        "trivial_lattice": None,
        "rank_bound": None,
    }
    if not mem.in_S:
        return doc
    w = detect_trivial(p)
    if w is not None:
        doc["membership"]["trivial"] = {"lambda": rat(w.lam), "mu": rat(w.mu), "u": poly_json(w.u)}
    inv = invariants(p)
    doc["invariants"] = {
        "c4": poly_json(inv.c4),
        "c6": poly_json(inv.c6),
        "disc": poly_json(inv.disc),
        "D": poly_json(inv.D),
        "j_num": poly_json(inv.j_num),
        "j_den": poly_json(inv.j_den),
    }
    places = refine_places(p)
    conf = configuration(p, places)
    fibers = {e.place: e.fiber.name for e in conf.entries}
    doc["places"] = [
        {
            "place": place_json(pl),
            "degree": pl.residue_degree,
            "v_c4": val(pl.v_c4),
            "v_c6": val(pl.v_c6),
            "v_disc": val(pl.v_disc),
            "fiber": fibers.get(pl, "I0"),
        }
        for pl in places
    ]
    doc["configuration"] = [
        {"type": e.fiber.name, "multiplicity": e.multiplicity, "place": place_json(e.place)}
        for e in conf.entries
    ]
    chi = chi_of(p, conf)
    lat = trivial_lattice(conf, chi)
    doc["trivial_lattice"] = {
        "rank": lat.rank,
        "det": lat.det_abs,
        "summands": {lab: c for lab, c in lat.summands},
        "chi": chi,
        "euler_number": euler_number(conf),
    }
    try:
        doc["rank_bound"] = rank_bound(p, conf)
    except TrivialSurfaceError:
        doc["rank_bound"] = None
    return doc


def height_json(h: HeightResult) -> dict:
    return {
        "lower": rat(h.lower),
        "upper": rat(h.upper),
        "exact": h.exact,
        "po_intersection": rat(h.po_intersection),
        "chi": h.chi,
        "contributions": [
            {
                "place": place_json(c.place),
                "type": c.fiber.name,
                "count": c.count,
                "lower": rat(c.lower),
                "upper": rat(c.upper),
            }
            for c in h.contributions
        ],
    }


def torsion_json(tb: TorsionBound, t0: Optional[Fraction] = None) -> dict:
    return {
        "t0": rat(t0) if t0 is not None else None,
        "bound": tb.bound,
        "counts": {str(q): c for q, c in tb.counts},
        "skipped": list(tb.skipped),
    }
