"""Trace-norm against weak-norm ratios as the dimension grows.

For each dimension prints the largest ``||f(X) - f(Y)||_1`` and
``||f(X) - f(Y)||_{1,inf}`` over trials, both divided by ``||X - Y||_1``.
"""

import argparse

from weaklip import funclib, harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ensemble", default="diagonal_crossing", choices=harness.KINDS)
    ap.add_argument("--function", default="abs")
    ap.add_argument("--dims", default="8,16,32,64,128")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    dims = [int(d) for d in args.dims.split(",")]
    rows = harness.contrast_report(args.ensemble, funclib.named(args.function), dims, args.trials, args.seed)
    print(f"{'dim':>5} {'trace ratio':>12} {'weak ratio':>12}")
    for r in rows:
        print(f"{r['dim']:>5} {r['s1']:>12.5f} {r['weak']:>12.5f}")


if __name__ == "__main__":
    main()
