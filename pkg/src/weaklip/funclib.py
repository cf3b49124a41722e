"""Real Lipschitz functions with exact or certified Lipschitz constants."""

import csv
import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

CHECK_PAIRS = 10_000
CHECK_RTOL = 1e-12


@dataclass(frozen=True)
class LipschitzFn:
    """A vectorised real rule together with a bound on ``||f'||_inf``.

    Construction samples ``CHECK_PAIRS`` random pairs and refuses a rule whose
    difference quotients exceed the declared constant.
    """

    name: str
    rule: Callable = field(repr=False)
    lipschitz_constant: float
    params: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.lipschitz_constant >= 0:
            raise ValueError(f"{self.name}: Lipschitz constant must be >= 0")
        rng = np.random.default_rng(0x5EED)
        scale = np.concatenate([np.full(CHECK_PAIRS // 2, 1.0), np.full(CHECK_PAIRS - CHECK_PAIRS // 2, 50.0)])
        a = rng.uniform(-1, 1, CHECK_PAIRS) * scale
        b = rng.uniform(-1, 1, CHECK_PAIRS) * scale
        fa, fb = self(a), self(b)
        lhs = np.abs(fa - fb)
        rhs = self.lipschitz_constant * np.abs(a - b)
        slack = CHECK_RTOL * (rhs + np.abs(fa) + np.abs(fb)) + 1e-300
        if not np.all(np.isfinite(lhs)) or np.any(lhs > rhs + slack):
            k = int(np.argmax(lhs - rhs))
            raise ValueError(
                f"{self.name}: |f(a)-f(b)| exceeds {self.lipschitz_constant}|a-b| "
                f"at a={float(a[k])!r}, b={float(b[k])!r}"
            )

    def __call__(self, t):
        out = self.rule(np.asarray(t, dtype=float))
        return out if np.ndim(out) else float(out)


def _piecewise_rule(breakpoints, slopes):
    b = np.asarray(breakpoints, dtype=float)
    s = np.asarray(slopes, dtype=float)
    # values at the breakpoints, anchored by f(b[0]) = 0
    knots = np.concatenate([[0.0], np.cumsum(s[1:-1] * np.diff(b))])

    def rule(t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(b, t, side="right")
        left = np.maximum(idx - 1, 0)
        return np.where(idx == 0, s[0] * (t - b[0]), knots[left] + s[idx] * (t - b[left]))

    return rule


def piecewise_linear(breakpoints, slopes):
    """Continuous piecewise-linear function with ``f(breakpoints[0]) = 0``.

    ``slopes[i]`` is the slope left of ``breakpoints[i]``; the final entry is
    the slope to the right of the last breakpoint.
    """
    b = np.asarray(breakpoints, dtype=float)
    s = np.asarray(slopes, dtype=float)
    if b.ndim != 1 or len(b) == 0:
        raise ValueError("need at least one breakpoint")
    if len(s) != len(b) + 1:
        raise ValueError(f"need {len(b) + 1} slopes for {len(b)} breakpoints, got {len(s)}")
    if np.any(np.diff(b) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    if not (np.all(np.isfinite(b)) and np.all(np.isfinite(s))):
        raise ValueError("breakpoints and slopes must be finite")
    return LipschitzFn(
        "piecewise_linear",
        _piecewise_rule(b, s),
        float(np.abs(s).max()),
        params={"breakpoints": tuple(b), "slopes": tuple(s)},
    )


def soft_abs(eps):
    if not eps > 0:
        raise ValueError("soft_abs needs eps > 0")
    return LipschitzFn(f"soft_abs({eps:g})", lambda t: np.sqrt(t * t + eps * eps), 1.0, {"eps": eps})


def scaled(f, a, b):
    """``t -> a * f(b * t)`` with constant ``|a b| L_f``."""
    return LipschitzFn(
        f"{a:g}*{f.name}({b:g}t)",
        lambda t: a * f.rule(b * t),
        abs(a * b) * f.lipschitz_constant,
        {"f": f, "a": a, "b": b},
    )


IDENTITY = LipschitzFn("identity", lambda t: t * 1.0, 1.0)
ABS = LipschitzFn("abs", np.abs, 1.0)
SIN = LipschitzFn("sin", np.sin, 1.0)


def catalog(name, **params):
    if name == "identity":
        return IDENTITY
    if name == "abs":
        return ABS
    if name == "sin":
        return SIN
    if name == "soft_abs":
        return soft_abs(params.get("eps", 0.1))
    if name == "piecewise_linear":
        return piecewise_linear(params["breakpoints"], params["slopes"])
    if name == "scaled":
        return scaled(params["f"], params.get("a", 1.0), params.get("b", 1.0))
    raise ValueError(f"unknown function {name!r}")


# Named instances used by experiments and the command line.
NAMED = {
    "identity": lambda: IDENTITY,
    "abs": lambda: ABS,
    "sin": lambda: SIN,
    "soft_abs": lambda: soft_abs(0.1),
    # zigzag with kinks at -1/2, 0, 1/2
    "piecewise": lambda: piecewise_linear((-0.5, 0.0, 0.5), (-1.0, 1.0, -1.0, 1.0)),
    # |t - 1|
    "abs_shift": lambda: piecewise_linear((1.0,), (-1.0, 1.0)),
}
NAMED["piecewise_linear"] = NAMED["piecewise"]


def named(name):
    try:
        return NAMED[name]()
    except KeyError:
        raise ValueError(f"unknown function {name!r}; choose from {sorted(NAMED)}") from None


def custom(name, rule, declared_bound, interval=(-10.0, 10.0), samples=10_001):
    """Wrap a user rule; the sampled certificate must not exceed the declared bound."""
    fn = LipschitzFn(name, rule, float(declared_bound))
    est = estimate_constant(fn, interval, samples)
    if est > declared_bound * (1 + 1e-9):
        raise ValueError(f"{name}: sampled slope {est:.6g} exceeds declared bound {declared_bound}")
    return fn


def rescale(f, n):
    """``t -> n f(t/n)``; the Lipschitz constant is unchanged."""
    if not n > 0:
        raise ValueError("rescale needs n > 0")
    return LipschitzFn(f"{f.name}[n={n:g}]", lambda t: n * f.rule(t / n), f.lipschitz_constant, {"f": f, "n": n})


def estimate_constant(f, interval, samples):
    """Largest difference quotient over a uniform sample of ``interval``.

    On a sorted grid every chord slope is a convex combination of consecutive
    slopes, so consecutive pairs already give the maximum over all pairs.
    """
    lo, hi = map(float, interval)
    if not hi > lo:
        raise ValueError(f"degenerate interval {interval!r}")
    if samples < 2:
        raise ValueError("need at least two samples")
    t = np.linspace(lo, hi, int(samples))
    v = np.asarray(f(t), dtype=float)
    return float(np.max(np.abs(np.diff(v)) / np.diff(t)))


# -- CSV for piecewise-linear functions --------------------------------------

def format_piecewise_csv(f):
    b, s = f.params["breakpoints"], f.params["slopes"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["breakpoint", "left_slope"])
    for bk, sl in zip(b, s):
        w.writerow([repr(float(bk)), repr(float(sl))])
    w.writerow(["", repr(float(s[-1]))])
    return buf.getvalue()


def parse_piecewise_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["breakpoint", "left_slope"]:
        raise ValueError("missing 'breakpoint,left_slope' header")
    body = rows[1:]
    if not body or body[-1][0] != "":
        raise ValueError("missing trailing slope row")
    b = [float(r[0]) for r in body[:-1]]
    s = [float(r[1]) for r in body]
    return piecewise_linear(b, s)
