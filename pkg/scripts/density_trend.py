"""Exhaustive (1,1) boxes: how fast the complement of U thins out as H grows."""
import argparse
import json
import logging
import time

from ellsurf.family import BoxSpec, run_density


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--heights", type=lambda s: [int(x) for x in s.split(",")], default=[2, 5, 10, 20])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    rows = []
    for H in args.heights:
        start = time.perf_counter()
        rep, _ = run_density(BoxSpec(args.m, args.n, H), workers=args.workers)
        frac = rep.fraction_not_U
        rows.append(
            {
                "H": H,
                "total": rep.total,
                "not_in_S": rep.not_in_S,
                "S_only": rep.S_only,
                "in_U": rep.in_U,
                "in_Ztr": rep.in_Ztr,
                "fraction_not_U": round(frac, 6),
                "c_estimate": round(frac * H, 4),
                "seconds": round(time.perf_counter() - start, 2),
            }
        )
        print(json.dumps(rows[-1]))
    cs = [r["c_estimate"] for r in rows]
    print(json.dumps({"c_ratios": [round(b / a, 3) for a, b in zip(cs, cs[1:])]}))


if __name__ == "__main__":
    main()
