"""Seeded ensembles and end-to-end inequality experiments.

No universal constant is asserted anywhere: experiments record empirical
ratios, and regressions are judged against frozen baselines
(:mod:`weaklip.baselines`).
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import funclib
from .doi import dilation_reduce
from .norms import schatten_from_values, singular_values, weak_from_values
from .spectral import apply_function, commutator, hermitian_eig, random_hermitian

KINDS = ("gaussian_hermitian", "diagonal_crossing", "low_rank_perturbation")
DEFAULT_PS = (1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0)
FIELDS = ("experiment", "seed", "trial", "dim", "function", "p", "lhs", "rhs", "ratio")


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    dim: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble {self.kind!r}; choose from {KINDS}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.kind == "low_rank_perturbation" and self.params.get("rank", 1) >= self.dim:
            raise ValueError(f"rank {self.params.get('rank', 1)} must be below dim {self.dim}")


def trial_rng(seed, trial):
    """Independent stream for one trial; does not depend on evaluation order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def _gue(n, rng, scale=1.0):
    return scale * random_hermitian(n, rng)


def _crossing_pair(n, rng, twist=0.5):
    x = np.sort(rng.uniform(-1.0, 1.0, n))
    gaps = np.diff(x)
    top = gaps.mean() if n > 1 else 1.0
    y = x + rng.uniform(0.0, 1.0, n) * np.concatenate([gaps, [top]])
    D = hermitian_eig(_gue(n, rng, 1.0 / math.sqrt(n)))
    W = D.vectors @ np.diag(np.exp(1j * twist * D.eigenvalues)) @ D.vectors.conj().T
    X = np.diag(x).astype(complex)
    Y = W @ np.diag(y) @ W.conj().T
    return X, 0.5 * (Y + Y.conj().T)


def _low_rank_pair(n, rng, rank=1, scale=1.0):
    X = _gue(n, rng, 1.0 / math.sqrt(n))
    bump = np.zeros((n, n), dtype=complex)
    for _ in range(rank):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        bump += scale * rng.uniform(-1.0, 1.0) * np.outer(v, v.conj())
    return X, X + bump


def sample_trial(spec, trial):
    rng = trial_rng(spec.seed, trial)
    p = spec.params
    if spec.kind == "gaussian_hermitian":
        s = p.get("scale", 1.0)
        return _gue(spec.dim, rng, s), _gue(spec.dim, rng, s)
    if spec.kind == "diagonal_crossing":
        return _crossing_pair(spec.dim, rng, p.get("twist", 0.5))
    return _low_rank_pair(spec.dim, rng, p.get("rank", 1), p.get("scale", 1.0))


def sample_ensemble(spec, count, start=0):
    """``count`` matrix pairs for trials ``start, start+1, ...``.

    ``gaussian_hermitian`` gives two independent Hermitian matrices with
    standard complex normal entries before symmetrisation;
    ``diagonal_crossing`` gives ``(diag(x), W diag(y) W*)`` with interlacing
    ``x < y`` and ``W`` a small random rotation; ``low_rank_perturbation``
    gives ``(X, X + rank-r bump)``.
    """
    return [sample_trial(spec, t) for t in range(start, start + count)]


@dataclass
class ExperimentRecord:
    experiment: str
    seed: int
    trial: int
    dim: int
    function: str
    p: Optional[float]
    lhs: float
    rhs: float
    ratio: Optional[float] = None
    dilation_gap: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        self.ratio = self.lhs / self.rhs if self.rhs > 0 else None

    def row(self):
        return {k: getattr(self, k) for k in FIELDS}


def np_commutator_ratio(A, B, f, experiment="np-commutator", seed=0, trial=0):
    """``||[f(A), B]||_{1,inf}`` against ``||f'|| ||[A, B]||_1``."""
    D = hermitian_eig(A)
    lhs = weak_from_values(singular_values(commutator(apply_function(f, D), B)))
    rhs = f.lipschitz_constant * schatten_from_values(singular_values(commutator(A, B)), 1)
    return ExperimentRecord(experiment, seed, trial, len(D.eigenvalues), f.name, None, lhs, rhs)


def np_perturbation_ratio(X, Y, f, experiment="np-perturbation", seed=0, trial=0):
    """``||f(X) - f(Y)||_{1,inf}`` against ``||f'|| ||X - Y||_1``.

    Also runs the commutator form on ``dilation_reduce(X, Y)``; both sides
    double there, and ``dilation_gap`` is the absolute difference of ratios.
    """
    fX = apply_function(f, hermitian_eig(X))
    fY = apply_function(f, hermitian_eig(Y))
    lhs = weak_from_values(singular_values(fX - fY))
    rhs = f.lipschitz_constant * schatten_from_values(singular_values(np.asarray(X) - np.asarray(Y)), 1)
    rec = ExperimentRecord(experiment, seed, trial, len(fX), f.name, None, lhs, rhs)
    A, B = dilation_reduce(X, Y)
    twin = np_commutator_ratio(A, B, f)
    if rec.ratio is None or twin.ratio is None:
        rec.dilation_gap = abs(twin.lhs - 2 * lhs) + abs(twin.rhs - 2 * rhs)
    else:
        rec.dilation_gap = abs(twin.ratio - rec.ratio)
    return rec


def fp_values(X, Y, f):
    fX = apply_function(f, hermitian_eig(X))
    fY = apply_function(f, hermitian_eig(Y))
    return singular_values(fX - fY), singular_values(np.asarray(X) - np.asarray(Y))


def fp_ratio(X, Y, f, p, experiment="fp-scaling", seed=0, trial=0, values=None):
    """``||f(X) - f(Y)||_p / ||X - Y||_p`` for ``p > 1``."""
    if not p > 1:
        raise ValueError("p must exceed 1; use the weak/trace experiments for p = 1")
    top, bottom = fp_values(X, Y, f) if values is None else values
    lhs = schatten_from_values(top, p)
    rhs = schatten_from_values(bottom, p)
    return ExperimentRecord(experiment, seed, trial, len(top), f.name, float(p), lhs, rhs)


# -- pinned suites -------------------------------------------------------------

def np_suite(dims=(8, 16, 32, 64), functions=("abs", "piecewise"), trials=200, seed=2024):
    """Trial ``t`` uses ensemble ``KINDS[t % 3]``: commutator ratio on the
    Gaussian pair, perturbation ratio (with dilation check) otherwise."""
    records = []
    for dim in dims:
        for name in functions:
            f = funclib.named(name)
            for t in range(trials):
                kind = KINDS[t % len(KINDS)]
                X, Y = sample_trial(EnsembleSpec(kind, dim, seed), t)
                if kind == "gaussian_hermitian":
                    records.append(np_commutator_ratio(X, Y, f, "np-commutator", seed, t))
                else:
                    records.append(np_perturbation_ratio(X, Y, f, f"np-perturbation/{kind}", seed, t))
    return records


def fp_scaling(dim=64, seed=33, trials=10, ps=DEFAULT_PS, function="abs", kind="diagonal_crossing"):
    f = funclib.named(function)
    spec = EnsembleSpec(kind, dim, seed)
    records = []
    for t in range(trials):
        X, Y = sample_trial(spec, t)
        values = fp_values(X, Y, f)
        records += [fp_ratio(X, Y, f, p, seed=seed, trial=t, values=values) for p in ps]
    return records


def max_ratio_by_p(records):
    out = {}
    for r in records:
        if r.ratio is not None:
            out[r.p] = max(out.get(r.p, 0.0), r.ratio)
    return out


def contrast_report(kind, f, dims, trials, seed=7):
    """Per dimension, the largest S_1 ratio and the largest weak ratio.

    Both ratios are normalised by ``||f'||``.  Returns a list of dicts with
    keys ``dim``, ``s1``, ``weak``.
    """
    dims = list(dims)
    if dims != sorted(dims):
        raise ValueError("dims must be ascending")
    rows = []
    for dim in dims:
        spec = EnsembleSpec(kind, dim, seed)
        s1 = weak = 0.0
        for t in range(trials):
            X, Y = sample_trial(spec, t)
            top, bottom = fp_values(X, Y, f)
            denom = f.lipschitz_constant * schatten_from_values(bottom, 1)
            if denom > 0:
                s1 = max(s1, schatten_from_values(top, 1) / denom)
                weak = max(weak, weak_from_values(top) / denom)
        rows.append({"dim": dim, "s1": s1, "weak": weak})
    return rows


# -- report emission -------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def format_records(records, fmt="csv"):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FIELDS)
        for r in records:
            w.writerow([_cell(v) for v in r.row().values()])
        return buf.getvalue()
    if fmt == "jsonl":
        return "".join(json.dumps(r.row()) + "\n" for r in records)
    raise ValueError(f"unknown format {fmt!r}")


def parse_records_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for r in rows:
        out.append(ExperimentRecord(
            r["experiment"], int(r["seed"]), int(r["trial"]), int(r["dim"]), r["function"],
            float(r["p"]) if r["p"] else None, float(r["lhs"]), float(r["rhs"]),
        ))
    return out
