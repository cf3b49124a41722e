import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weaklip import funclib, harness
from weaklip.harness import (
    DEFAULT_PS,
    FIELDS,
    KINDS,
    EnsembleSpec,
    ExperimentRecord,
    contrast_report,
    format_records,
    fp_ratio,
    fp_scaling,
    max_ratio_by_p,
    np_commutator_ratio,
    np_perturbation_ratio,
    parse_records_csv,
    sample_ensemble,
)
from weaklip.spectral import hermitian_eig, random_hermitian

seeds = st.integers(0, 2**64 - 1)


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("wishart", 4, 0)
    with pytest.raises(ValueError):
        EnsembleSpec("gaussian_hermitian", 0, 0)
    with pytest.raises(ValueError):
        EnsembleSpec("gaussian_hermitian", 4, -1)
    with pytest.raises(ValueError, match="rank"):
        EnsembleSpec("low_rank_perturbation", 4, 0, {"rank": 4})


@pytest.mark.parametrize("kind", KINDS)
def test_sampling_is_deterministic(kind):
    spec = EnsembleSpec(kind, 6, 99)
    a, b = sample_ensemble(spec, 3), sample_ensemble(spec, 3)
    for (x1, y1), (x2, y2) in zip(a, b):
        assert np.array_equal(x1, x2) and np.array_equal(y1, y2)
    assert sample_ensemble(spec, 0) == []
    # a trial does not depend on which trials were drawn before it
    assert np.array_equal(sample_ensemble(spec, 1, start=2)[0][0], a[2][0])


def test_gaussian_trace_band():
    spec = EnsembleSpec("gaussian_hermitian", 8, 1)
    traces = np.array([np.trace(x).real for x, _ in sample_ensemble(spec, 10_000)])
    # diagonal entries are N(0, 1), so the trace of an 8x8 draw has variance 8
    sigma = math.sqrt(8 / traces.size)
    assert abs(traces.mean()) <= 3 * sigma
    assert traces.var() == pytest.approx(8, rel=0.05)


def test_crossing_spectra_interlace():
    for x, y in sample_ensemble(EnsembleSpec("diagonal_crossing", 10, 4), 5):
        lx, ly = np.diag(x).real, hermitian_eig(y).eigenvalues
        assert np.all(lx <= ly + 1e-12)
        assert np.all(ly[:-1] <= lx[1:] + 1e-12)


def test_low_rank_difference_rank():
    for x, y in sample_ensemble(EnsembleSpec("low_rank_perturbation", 9, 5, {"rank": 2}), 4):
        s = np.linalg.svd(y - x, compute_uv=False)
        assert np.sum(s > 1e-10 * s[0]) <= 2


def test_record_ratio_rules():
    r = ExperimentRecord("e", 0, 0, 2, "abs", None, 1.0, 4.0)
    assert r.ratio == 0.25
    assert ExperimentRecord("e", 0, 0, 2, "abs", None, 0.0, 0.0).ratio is None


def test_commutator_ratio_examples():
    rng = np.random.default_rng(3)
    A, B = random_hermitian(6, rng), random_hermitian(6, rng)
    assert np_commutator_ratio(A, B, funclib.IDENTITY).ratio <= 1 + 1e-9
    r = np_commutator_ratio(A, np.eye(6), funclib.ABS)
    assert r.lhs == 0 and r.rhs == 0 and r.ratio is None


def test_perturbation_examples():
    rng = np.random.default_rng(4)
    X = random_hermitian(6, rng)
    assert np_perturbation_ratio(X, random_hermitian(6, rng), funclib.IDENTITY).ratio <= 1 + 1e-9
    P = X @ X + np.eye(6)
    r = np_perturbation_ratio(P, P + 0.01 * np.eye(6), funclib.ABS)
    assert r.ratio <= 1 + 1e-9
    r = np_perturbation_ratio(X, X, funclib.ABS)
    assert r.ratio is None and r.dilation_gap <= 1e-12


def test_dilation_consistency_seed21():
    for kind in KINDS[1:]:
        for X, Y in sample_ensemble(EnsembleSpec(kind, 16, 21), 10):
            assert np_perturbation_ratio(X, Y, funclib.ABS).dilation_gap <= 1e-9


def test_fp_examples():
    rng = np.random.default_rng(8)
    X, Y = random_hermitian(8, rng), random_hermitian(8, rng)
    assert fp_ratio(X, Y, funclib.IDENTITY, 3.0).ratio == pytest.approx(1, rel=1e-12)
    for name in ("abs", "sin", "piecewise"):
        f = funclib.named(name)
        assert fp_ratio(X, Y, f, 2.0).ratio <= f.lipschitz_constant + 1e-9
    with pytest.raises(ValueError):
        fp_ratio(X, Y, funclib.ABS, 1.0)


def test_fp_scaling_pinned():
    recs = fp_scaling()
    assert len(recs) == 10 * len(DEFAULT_PS)
    curve = max_ratio_by_p(recs)
    assert curve[1.05] >= curve[2.0]
    assert all(r.ratio <= 1 + 1e-9 for r in recs if r.p == 2.0)


def test_contrast_examples():
    rows = contrast_report("low_rank_perturbation", funclib.IDENTITY, (4, 8), 3)
    # rank-one differences: weak and trace norms coincide
    for row in rows:
        assert row["s1"] == pytest.approx(1, rel=1e-12) and row["weak"] == pytest.approx(1, rel=1e-12)
    assert len(contrast_report("diagonal_crossing", funclib.ABS, (2,), 1)) == 1
    with pytest.raises(ValueError):
        contrast_report("diagonal_crossing", funclib.ABS, (8, 4), 1)


def test_contrast_identity_general_ensemble():
    for row in contrast_report("gaussian_hermitian", funclib.IDENTITY, (4, 8), 3):
        assert row["s1"] == pytest.approx(1, rel=1e-12) and row["weak"] <= 1 + 1e-12


@given(seeds, st.sampled_from(KINDS), st.sampled_from(["identity", "abs", "piecewise"]))
def test_rows_nonnegative_and_identity_bounded(seed, kind, name):
    f = funclib.named(name)
    X, Y = harness.sample_trial(EnsembleSpec(kind, 5, seed), 0)
    for rec in (np_commutator_ratio(X, Y, f), np_perturbation_ratio(X, Y, f)):
        assert rec.lhs >= 0 and rec.rhs >= 0
        if name == "identity" and rec.ratio is not None:
            assert rec.ratio <= 1 + 1e-9
        if rec.dilation_gap is not None:
            assert rec.dilation_gap <= 1e-9


def test_csv_and_jsonl_emission():
    recs = [
        ExperimentRecord("a", 1, 0, 3, "abs", None, 0.5, 2.0),
        ExperimentRecord("b", 1, 1, 3, "abs", 1.5, np.float64(0.0), 0.0),
    ]
    text = format_records(recs, "csv")
    lines = text.split("\n")
    assert lines[0] == ",".join(FIELDS)
    assert lines[1] == "a,1,0,3,abs,,0.5,2.0,0.25"
    assert lines[2] == "b,1,1,3,abs,1.5,0.0,0.0,"
    back = parse_records_csv(text)
    assert [r.row() for r in back] == [r.row() for r in recs]
    objs = [json.loads(ln) for ln in format_records(recs, "jsonl").splitlines()]
    assert list(objs[0]) == list(FIELDS) and objs[0]["p"] is None and objs[1]["ratio"] is None
    with pytest.raises(ValueError):
        format_records(recs, "xml")
