"""Run the pinned operator-Lipschitz suite and summarise the weak ratios.

Writes every record as CSV (``--out``) and prints the per-dimension maxima.
"""

import argparse
import time
from collections import defaultdict

from weaklip import baselines, harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--dims", default="8,16,32,64")
    ap.add_argument("--out", help="CSV path for all records")
    args = ap.parse_args()
    dims = tuple(int(d) for d in args.dims.split(","))
    t = time.time()
    recs = harness.np_suite(dims=dims, trials=args.trials, seed=args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(harness.format_records(recs, "csv"))
    worst = defaultdict(float)
    for r in recs:
        if r.ratio is not None:
            key = (r.dim, r.function, r.experiment)
            worst[key] = max(worst[key], r.ratio)
    for (dim, fn, exp), v in sorted(worst.items()):
        print(f"dim={dim:<3} {fn:<17} {exp:<40} max ratio {v:.4f}")
    top = max(worst.values())
    gap = max(r.dilation_gap for r in recs if r.dilation_gap is not None)
    print(f"suite max {top:.6f} (frozen {baselines.NP_SUITE_MAX_RATIO:.6f}), "
          f"largest dilation gap {gap:.2e}, {time.time() - t:.1f} s")


if __name__ == "__main__":
    main()
