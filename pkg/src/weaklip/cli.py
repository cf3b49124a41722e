"""Command-line entry point: ``weaklip <subcommand> [flags]``.

Exit status is 0 on success, 1 when an asserted check fails and 2 on a usage
error.  Flags may also come from a ``key=value`` file given by ``--config``;
flags on the command line win.
"""

import argparse
import math
import sys

import numpy as np

from . import baselines, czkernel, doi, fourier, funclib, harness
from .norms import singular_values, tensor_weighted, weak_from_values, weak_l1_weighted, field_sequence
from .spectral import random_hermitian

SUBCOMMANDS = (
    "identity-check", "np-ratio", "perturb-ratio", "fp-scaling", "contrast",
    "smoothing", "transference", "kernel-check", "tensor-check",
)
CONFIG_KEYS = ("seed", "trials", "dim", "function", "p", "ensemble", "out", "format", "tol", "dims")


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file mirroring the flags")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--dim", type=int)
    common.add_argument("--dims", help="comma-separated dimensions (contrast)")
    common.add_argument("--function")
    common.add_argument("--p", type=float)
    common.add_argument("--ensemble", choices=harness.KINDS)
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"))
    common.add_argument("--tol", type=float)
    parser = argparse.ArgumentParser(prog="weaklip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


DEFAULTS = {
    "identity-check": dict(seed=5, trials=200, dim=40, function="cycle", tol=1e-9),
    "np-ratio": dict(seed=1, trials=10, dim=16, function="abs", ensemble="gaussian_hermitian"),
    "perturb-ratio": dict(seed=21, trials=10, dim=16, function="abs", ensemble="diagonal_crossing", tol=1e-9),
    "fp-scaling": dict(seed=33, trials=10, dim=64, function="abs", ensemble="diagonal_crossing"),
    "contrast": dict(seed=7, trials=20, dims="8,16,32,64", function="abs", ensemble="diagonal_crossing"),
    "smoothing": dict(dim=1, tol=0.05),
    "transference": dict(seed=17, function="abs_shift"),
    "kernel-check": dict(tol=1.05),
    "tensor-check": dict(seed=3, trials=50, dim=6, tol=1e-3),
}


def read_config(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key = key.strip().lstrip("-").replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            out[key] = value.strip()
    return out


def _coerce(key, value):
    if key in ("seed", "trials", "dim"):
        return int(value)
    if key in ("p", "tol"):
        return float(value)
    return value


def resolve(args):
    cfg = read_config(args.config) if args.config else {}
    opts = dict(DEFAULTS[args.command])
    opts.update({"format": "csv"})
    opts.update({k: _coerce(k, v) for k, v in cfg.items()})
    opts.update({k: v for k, v in vars(args).items() if v is not None and k in CONFIG_KEYS})
    return opts


# -- subcommands -------------------------------------------------------------------

def cmd_identity_check(o):
    names = ("abs", "sin", "piecewise") if o["function"] == "cycle" else (o["function"],)
    recs = []
    for t in range(o["trials"]):
        rng = harness.trial_rng(o["seed"], t)
        f = funclib.named(names[t % len(names)])
        A, B = random_hermitian(o["dim"], rng), random_hermitian(o["dim"], rng)
        res = doi.commutator_identity_residual(A, B, f)
        tol = doi.identity_tolerance(A, B, f, o["tol"])
        recs.append(harness.ExperimentRecord("identity-check", o["seed"], t, o["dim"], f.name, None, res, tol))
    ok = all(r.lhs <= r.rhs for r in recs)
    return recs, ok


def _pairs(o):
    spec = harness.EnsembleSpec(o["ensemble"], o["dim"], o["seed"])
    for t in range(o["trials"]):
        yield t, harness.sample_trial(spec, t)


def cmd_np_ratio(o):
    f = funclib.named(o["function"])
    recs = [harness.np_commutator_ratio(A, B, f, "np-ratio", o["seed"], t) for t, (A, B) in _pairs(o)]
    ok = o.get("tol") is None or all(r.ratio is None or r.ratio <= o["tol"] for r in recs)
    return recs, ok


def cmd_perturb_ratio(o):
    f = funclib.named(o["function"])
    recs = [harness.np_perturbation_ratio(X, Y, f, "perturb-ratio", o["seed"], t) for t, (X, Y) in _pairs(o)]
    return recs, all(r.dilation_gap <= o["tol"] for r in recs)


def cmd_fp_scaling(o):
    ps = (o["p"],) if o.get("p") is not None else harness.DEFAULT_PS
    recs = harness.fp_scaling(o["dim"], o["seed"], o["trials"], ps, o["function"], o["ensemble"])
    bound = funclib.named(o["function"]).lipschitz_constant + 1e-9
    ok = all(r.ratio is None or r.ratio <= bound for r in recs if r.p == 2.0)
    return recs, ok


def cmd_contrast(o):
    f = funclib.named(o["function"])
    dims = [int(d) for d in str(o["dims"]).split(",")]
    rows = harness.contrast_report(o["ensemble"], f, dims, o["trials"], o["seed"])
    recs = []
    for row in rows:
        recs.append(harness.ExperimentRecord("contrast-s1", o["seed"], o["trials"], row["dim"], f.name, 1.0, row["s1"], 1.0))
        recs.append(harness.ExperimentRecord("contrast-weak", o["seed"], o["trials"], row["dim"], f.name, None, row["weak"], 1.0))
    if o.get("tol") is not None:
        ok = all(row["weak"] <= o["tol"] for row in rows)
    else:
        # only the pinned configuration has a frozen curve to regress against
        pinned = (o["seed"], o["trials"], o["ensemble"], f.name) == (7, 20, "diagonal_crossing", "abs")
        frozen = baselines.CONTRAST_WEAK
        ok = not pinned or all(row["weak"] <= frozen[row["dim"]] * (1 + 1e-9) for row in rows if row["dim"] in frozen)
    return recs, ok


def cmd_smoothing(o):
    d = o["dim"]
    ls = (1, 2, 4, 8, 16, 32)
    grid = fourier.grid_for_scale(max(ls), dim=d, spacing=1 / 8 if d == 1 else 1 / 4)
    if d == 1:
        mean_zero = [(1.0, (0.0, 1.0)), (-1.0, (1.0, 2.0))]
        positive = [(1.0, (0.0, 1.0))]
    else:
        mean_zero = [(1.0, ((0.0, 1.0), (0.0, 1.0))), (-1.0, ((1.0, 2.0), (0.0, 1.0)))]
        positive = [(1.0, ((0.0, 1.0), (0.0, 1.0)))]
    recs, ok = [], True
    for name, pieces in (("step", mean_zero), ("positive", positive)):
        f = fourier.step_field(grid, pieces)
        base = f.l1()
        norms = fourier.smoothing_norms(f, ls)
        for l, v in zip(ls, norms):
            recs.append(harness.ExperimentRecord("smoothing", 0, l, d, name, None, v, base))
        if name == "step":
            ok &= all(b <= a for a, b in zip(norms, norms[1:])) and norms[-1] / norms[0] <= o["tol"]
        else:
            ok &= all(abs(v - base) <= 1e-6 for v in norms)
    return recs, ok


def pinned_transference(seed=17, function="abs_shift", ls=(2, 4, 8)):
    rng = harness.trial_rng(seed, 0)
    V = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    A = np.diag([0.0, 1.0, 2.0])
    f = funclib.named(function)
    mult = czkernel.cut_symbol(czkernel.tan_symbol(), czkernel.cutoff_symbol(2, hole=0.5))
    return [fourier.transference_check(A, V, f, mult, l) for l in ls]


def cmd_transference(o):
    ls = (2, 4, 8)
    errs = pinned_transference(o["seed"], o["function"], ls)
    recs = []
    prev = None
    for l, e in zip(ls, errs):
        recs.append(harness.ExperimentRecord("transference", o["seed"], l, 3, o["function"], None, e, prev if prev else e))
        prev = e
    ok = all(b <= 0.5 * a for a, b in zip(errs, errs[1:]))
    return recs, ok


def tan_kernel_constants(r_min=0.1, r_max=10.0):
    g = czkernel.tan_symbol()
    return czkernel.cz_condition_check(czkernel.kernel_rings(g, r_min, r_max))


def cmd_kernel_check(o):
    c0, c1 = tan_kernel_constants()
    b0, b1 = baselines.TAN_KERNEL_C0, baselines.TAN_KERNEL_C1
    recs = [
        harness.ExperimentRecord("kernel-check", 0, 0, 2, "C0", None, c0, b0),
        harness.ExperimentRecord("kernel-check", 0, 1, 2, "C1", None, c1, b1),
    ]
    return recs, c0 <= b0 * o["tol"] and c1 <= b1 * o["tol"]


def tensor_sandwich(X, l, d=1, per_width=64):
    """``||X (x) G_l^{(x)d}||_{1,inf}`` with ``G_l`` sampled at spacing ``l / per_width`` on ``[-8l, 8l)``."""
    grid = fourier.Grid(d, 8.0 * l, 16 * per_width)
    g = fourier.gaussian_density(l, grid)
    mu = singular_values(X)
    return weak_l1_weighted(tensor_weighted(mu, field_sequence(g.values, grid.cell))), weak_from_values(mu)


def cmd_tensor_check(o):
    lower = math.exp(-1) / math.sqrt(math.pi)
    recs, ok = [], True
    for t in range(o["trials"]):
        rng = harness.trial_rng(o["seed"], t)
        X = rng.standard_normal((o["dim"], o["dim"])) + 1j * rng.standard_normal((o["dim"], o["dim"]))
        X /= weak_from_values(singular_values(X))
        vals = []
        for l in (1, 3, 10):
            w, ref = tensor_sandwich(X, l)
            vals.append(w)
            recs.append(harness.ExperimentRecord("tensor-check", o["seed"], t, o["dim"], f"G_{l}", None, w, ref))
            ok &= lower * ref - o["tol"] <= w <= ref + o["tol"]
        ok &= max(vals) - min(vals) <= o["tol"]
    return recs, ok


HANDLERS = {
    "identity-check": cmd_identity_check,
    "np-ratio": cmd_np_ratio,
    "perturb-ratio": cmd_perturb_ratio,
    "fp-scaling": cmd_fp_scaling,
    "contrast": cmd_contrast,
    "smoothing": cmd_smoothing,
    "transference": cmd_transference,
    "kernel-check": cmd_kernel_check,
    "tensor-check": cmd_tensor_check,
}


def run_cli(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        opts = resolve(args)
        records, ok = HANDLERS[args.command](opts)
    except (ValueError, OSError) as exc:
        print(f"weaklip {args.command}: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    text = harness.format_records(records, opts["format"])
    if opts.get("out"):
        with open(opts["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not ok:
        print(f"weaklip {args.command}: check failed", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
