"""Certify a rank-positive, torsion-free member of the j = 0 family B = h^2 - g^3.

With g = 2t^2 and h = t^3 + 1 the point (g, h) lies on y^2 = x^3 + B(t).  The
script prints the configuration, the height of (g, h), and the torsion bound
obtained by adding primes until the gcd of the point counts reaches 1.
"""
import argparse

from ellsurf.kodaira import configuration
from ellsurf.mwlattice import NoUsablePrime, Section, height, rank_bound, torsion_bound_detail
from ellsurf.qpoly import Poly, is_squarefree, parse_poly
from ellsurf.weierstrass import WeierstrassPair


def odd_primes(limit: int):
    for q in range(3, limit):
        if all(q % d for d in range(2, int(q**0.5) + 1)):
            yield q


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", default="2*t^2")
    ap.add_argument("--h", default="t^3 + 1")
    ap.add_argument("--t0", default="1")
    args = ap.parse_args()

    g, h = parse_poly(args.g), parse_poly(args.h)
    B = h**2 - g**3
    n = max(B.degree, 1)
    k = -(-n // 6)
    p = WeierstrassPair(Poly([]), B, 4 * k, 6 * k)
    print(f"B = {B}  (squarefree: {is_squarefree(B)}, frame (m, n) = ({p.m}, {p.n}))")
    print(f"configuration: {configuration(p).signature_string()}")
    print(f"rank bound: {rank_bound(p)}")
    hr = height(p, Section.of(g, h))
    print(f"height of (g, h): {hr.lower}" if hr.exact else f"height of (g, h) in [{hr.lower}, {hr.upper}]")

    used = []
    for q in odd_primes(1000):
        used.append(q)
        try:
            tb = torsion_bound_detail(p, args.t0, used)
        except (NoUsablePrime, ValueError):
            continue
        if tb.bound == 1:
            break
    print(f"point counts at t = {args.t0}: {dict(tb.counts)} (skipped {list(tb.skipped)})")
    print(f"torsion order divides {tb.bound}")


if __name__ == "__main__":
    main()
