"""Sample U-members of several frames and tabulate their fiber configurations.

For each frame the script reports how many sampled pairs landed in U, every
configuration seen among them, the trivial lattice, the rank bound, and the
configuration predicted from the frame alone.
"""
import argparse
import json
from collections import Counter

from ellsurf.family import BoxSpec, membership_status, raw_tuples
from ellsurf.kodaira import configuration, euler_number, infinity_fiber_from_table
from ellsurf.mwlattice import rank_bound, trivial_lattice
from ellsurf.qpoly import Poly
from ellsurf.weierstrass import IN_U, WeierstrassPair, frame_for


def frame_list(text: str) -> list[tuple[int, int]]:
    return [tuple(int(v) for v in item.split("x")) for item in text.split(",")]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=frame_list, default=frame_list("1x1,2x2,3x5,4x6,5x7"))
    ap.add_argument("--bound", type=int, default=10)
    ap.add_argument("--count", type=int, default=1200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for m, n in args.frames:
        fr = frame_for(m, n)
        spec = BoxSpec(m, n, args.bound, mode="sample", count=args.count, seed=args.seed)
        configs, lattices, bounds, eulers = Counter(), Counter(), Counter(), Counter()
        for c in raw_tuples(spec):
            a, b = c[: m + 1], c[m + 1 :]
            if membership_status(a, b, m, n) != IN_U:
                continue
            p = WeierstrassPair(Poly(a), Poly(b), m, n)
            conf = configuration(p)
            lat = trivial_lattice(conf, fr.k)
            configs[conf.signature_string()] += 1
            lattices[f"rank={lat.rank},det={lat.det_abs}"] += 1
            bounds[rank_bound(p, conf)] += 1
            eulers[euler_number(conf)] += 1
        predicted = f"I1x{max(3 * m, 2 * n)}"
        at_inf = infinity_fiber_from_table(fr)
        if at_inf.name != "I0":
            predicted += f",{at_inf.name}x1"
        print(
            json.dumps(
                {
                    "frame": [m, n],
                    "k": fr.k,
                    "alpha": fr.alpha,
                    "beta": fr.beta,
                    "in_U": sum(configs.values()),
                    "configurations": dict(configs),
                    "predicted": predicted,
                    "trivial_lattices": dict(lattices),
                    "rank_bounds": {str(k): v for k, v in bounds.items()},
                    "euler_numbers": {str(k): v for k, v in eulers.items()},
                }
            )
        )


if __name__ == "__main__":
    main()
