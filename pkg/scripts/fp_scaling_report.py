"""Print the Schatten-p ratio curve of the pinned diagonal-crossing run.

Alongside the measured maximum per ``p`` it prints ``p^2 / (p - 1)`` so the
growth near ``p = 1`` can be eyeballed; no constant is fitted.
"""

import argparse

from weaklip import harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--seed", type=int, default=33)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--function", default="abs")
    args = ap.parse_args()
    recs = harness.fp_scaling(args.dim, args.seed, args.trials, function=args.function)
    curve = harness.max_ratio_by_p(recs)
    print(f"{'p':>6} {'max ratio':>10} {'p^2/(p-1)':>10}")
    for p in sorted(curve):
        print(f"{p:>6} {curve[p]:>10.6f} {p * p / (p - 1):>10.3f}")


if __name__ == "__main__":
    main()
