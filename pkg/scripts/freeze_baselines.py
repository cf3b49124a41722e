"""Recompute every pinned first-run value and rewrite ``weaklip/baselines.py``.

Run once after an intentional numerical change; the test suite compares
against the frozen numbers, so regenerating them hides regressions.
"""

import argparse
import pathlib
import time

from weaklip import cli, czkernel, doi, fourier, funclib, harness
from weaklip.spectral import random_hermitian

TARGET = pathlib.Path(__file__).resolve().parents[1] / "src" / "weaklip" / "baselines.py"
HEADER = '"""Frozen first-run values, regenerated by ``scripts/freeze_baselines.py``."""\n\n'


def compute():
    out = {}
    tan = czkernel.tan_symbol()
    out["TAN_INTERTWINING_ERRORS"] = {l: fourier.intertwining_error(tan.homogeneous, (1, 0), l) for l in (1, 2, 4, 8, 16, 32)}
    out["TRANSFERENCE_ERRORS"] = dict(zip((2, 4, 8), cli.pinned_transference(ls=(2, 4, 8))))
    out["TAN_KERNEL_C0"], out["TAN_KERNEL_C1"] = cli.tan_kernel_constants()
    out["CUTOFF_KERNEL_L1"] = {m: czkernel.cutoff_kernel_l1(m) for m in (2, 4, 8, 16)}
    rng = harness.trial_rng(11, 0)
    A, B = random_hermitian(12, rng), random_hermitian(12, rng)
    out["DISCRETIZATION_C"] = max(
        n * doi.discretization_error(A, B, funclib.ABS, n) for n in (1, 2, 4, 8, 16, 32, 64, 128, 256, 1024)
    )
    recs = harness.np_suite()
    out["NP_SUITE_MAX_RATIO"] = max(r.ratio for r in recs if r.ratio is not None)
    rows = harness.contrast_report("diagonal_crossing", funclib.named("abs"), (8, 16, 32, 64), 20, seed=7)
    out["CONTRAST_WEAK"] = {r["dim"]: r["weak"] for r in rows}
    out["CONTRAST_S1"] = {r["dim"]: r["s1"] for r in rows}
    out["FP_MAX_RATIO"] = harness.max_ratio_by_p(harness.fp_scaling())
    return out


def render(values):
    lines = [HEADER.rstrip("\n"), ""]
    for key, v in values.items():
        if isinstance(v, dict):
            lines.append(f"{key} = {{")
            lines += [f"    {k!r}: {float(x)!r}," for k, x in v.items()]
            lines.append("}")
        else:
            lines.append(f"{key} = {float(v)!r}")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dry-run", action="store_true", help="print instead of writing")
    args = ap.parse_args()
    t = time.time()
    text = render(compute())
    if args.dry_run:
        print(text)
    else:
        TARGET.write_text(text, encoding="utf-8")
        print(f"wrote {TARGET} in {time.time() - t:.1f} s")


if __name__ == "__main__":
    main()
