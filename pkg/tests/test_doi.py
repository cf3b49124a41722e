import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_matrix
from oracles import projection_sum_doi
from weaklip import baselines, funclib
from weaklip.doi import (
    SchurSymbol,
    build_symbol,
    cluster_labels,
    commutator_identity_residual,
    dilation_reduce,
    discretization_error,
    discretize_spectrum,
    discretized_decomposition,
    divided_difference,
    divided_difference_matrix,
    doi_apply,
    identity_tolerance,
    step_symbol,
)
from weaklip.harness import trial_rng
from weaklip.norms import schatten_norm, singular_values, weak_l1_quasinorm
from weaklip.spectral import apply_function, commutator, hermitian_eig, random_hermitian, random_unitary

SQUARE = funclib.custom("square", lambda t: t * t, 200.0, interval=(-100, 100))
seeds = st.integers(0, 2**32 - 1)


def test_divided_difference_examples():
    assert divided_difference(funclib.ABS, 2.5, 2.5) == 0.0
    assert divided_difference(funclib.IDENTITY, 7, 3) == 1.0
    assert divided_difference(funclib.ABS, 1, -1) == 0.0
    assert divided_difference(SQUARE, 2, 1) == 3.0


def test_divided_difference_matrix_zero_diagonal():
    x = np.array([-1.0, 0.0, 2.0, 2.0])
    m = divided_difference_matrix(funclib.SIN, x)
    assert np.all(m[[0, 1, 2, 3, 2, 3], [0, 1, 2, 3, 3, 2]] == 0)
    assert m[0, 2] == pytest.approx((np.sin(-1) - np.sin(2)) / -3)


def test_symbol_examples():
    D = hermitian_eig(np.diag([0.0, 1.0, 3.0]))
    np.testing.assert_array_equal(build_symbol(funclib.IDENTITY, D).values, 1 - np.eye(3))
    np.testing.assert_array_equal(build_symbol(funclib.ABS, hermitian_eig(np.diag([-1.0, 1.0]))).values, 0)
    np.testing.assert_array_equal(build_symbol(funclib.ABS, hermitian_eig(np.diag([0.0, 1.0]))).values, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        build_symbol(funclib.ABS, D, cluster_tol=-1)


def test_clusters_constant_symbol():
    lam = np.array([0.0, 1e-12, 2e-12, 1.0, 1.0 + 5e-13, 3.0])
    D = hermitian_eig(np.diag(lam))
    S = build_symbol(funclib.SIN, D)
    labels = cluster_labels(D.eigenvalues, S.cluster_tol)
    assert list(labels) == [0, 0, 0, 1, 1, 2]
    for i in range(6):
        for j in range(6):
            same = labels == labels[i]
            assert np.all(S.values[same][:, labels == labels[j]] == S.values[i, j])


def test_doi_examples():
    D = hermitian_eig(np.diag([0.0, 1.0]))
    V = np.array([[1, 2], [3, 4]], dtype=complex)
    np.testing.assert_array_equal(doi_apply(D, build_symbol(funclib.IDENTITY, D), V), [[0, 2], [3, 0]])
    A = random_hermitian(4, np.random.default_rng(2))
    D = hermitian_eig(A)
    W = random_matrix(4, np.random.default_rng(3))
    np.testing.assert_allclose(doi_apply(D, SchurSymbol(np.ones((4, 4)), 0.0), W), W, atol=1e-13)
    with pytest.raises(ValueError):
        doi_apply(D, SchurSymbol(np.ones((3, 3)), 0.0), W)


def test_doi_seed11_projection_sum():
    rng = np.random.default_rng(11)
    A, V = random_hermitian(3, rng), random_matrix(3, rng)
    D = hermitian_eig(A)
    f = funclib.SIN
    got = doi_apply(D, build_symbol(f, D), V)
    want = projection_sum_doi(lambda a, b: divided_difference(f, a, b), D.eigenvalues, D.vectors, V)
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_identity_examples():
    rng = np.random.default_rng(1)
    A, B = random_hermitian(10, rng), random_hermitian(10, rng)
    assert commutator_identity_residual(A, B, funclib.IDENTITY) <= identity_tolerance(A, B, funclib.IDENTITY, 1e-12)
    assert commutator_identity_residual(A, np.eye(10), funclib.ABS) == 0.0


def test_identity_seed5_against_projection_sums():
    rng = np.random.default_rng(5)
    A, B = random_hermitian(40, rng), random_hermitian(40, rng)
    f = funclib.ABS
    tol = identity_tolerance(A, B, f)
    assert commutator_identity_residual(A, B, f) <= tol
    # both sides rebuilt from eigenprojections, independent of the Schur path
    w, U = np.linalg.eigh(A)
    lhs = projection_sum_doi(lambda a, b: divided_difference(f, a, b), w, U, A @ B - B @ A)
    fa = U @ np.diag(np.abs(w)) @ U.conj().T
    assert np.linalg.norm(lhs - (fa @ B - B @ fa)) <= tol


@given(st.sampled_from([4, 8, 16]), st.sampled_from(["abs", "sin", "piecewise"]), seeds)
def test_identity_property(n, name, seed):
    rng = np.random.default_rng(seed)
    A, B = random_hermitian(n, rng), random_hermitian(n, rng)
    f = funclib.named(name)
    assert commutator_identity_residual(A, B, f) <= identity_tolerance(A, B, f)


@given(st.integers(1, 12), st.sampled_from(["abs", "sin", "piecewise", "soft_abs"]), seeds)
def test_schur_bound(n, name, seed):
    rng = np.random.default_rng(seed)
    A, V = random_hermitian(n, rng), random_matrix(n, rng)
    f = funclib.named(name)
    D = hermitian_eig(A)
    S = build_symbol(f, D)
    assert np.abs(S.values).max() <= f.lipschitz_constant
    assert np.linalg.norm(doi_apply(D, S, V)) <= f.lipschitz_constant * np.linalg.norm(V) * (1 + 1e-12)


@given(seeds)
def test_degenerate_basis_independence(seed):
    rng = np.random.default_rng(seed)
    lam = np.array([-1.0, -1.0, -1.0, 0.5, 2.0, 2.0])
    Q = random_unitary(6, rng)
    A = Q @ np.diag(lam) @ Q.conj().T
    D = hermitian_eig(A)
    # rotate each degenerate eigenspace by its own random unitary
    U = D.vectors.copy()
    for block in (slice(0, 3), slice(4, 6)):
        k = U[:, block].shape[1]
        U[:, block] = U[:, block] @ random_unitary(k, rng)
    D2 = type(D)(D.eigenvalues, U)
    V = random_matrix(6, rng)
    f = funclib.SIN
    out1 = doi_apply(D, build_symbol(f, D), V)
    out2 = doi_apply(D2, build_symbol(f, D2), V)
    assert np.abs(out1 - out2).max() <= 1e-9


@given(st.integers(1, 10), seeds)
def test_self_adjointness_transport(n, seed):
    rng = np.random.default_rng(seed)
    A, V = random_hermitian(n, rng), random_hermitian(n, rng)
    D = hermitian_eig(A)
    out = doi_apply(D, build_symbol(funclib.named("piecewise"), D), V)
    assert np.abs(out - out.conj().T).max() <= 1e-10


def test_discretize_examples():
    np.testing.assert_allclose(discretize_spectrum(np.diag([0.3, 0.7]), 2), np.diag([0.0, 0.5]), atol=1e-15)
    A = np.diag([-2.0, 0.0, 3.0]).astype(complex)
    np.testing.assert_array_equal(discretize_spectrum(A, 1), A)
    with pytest.raises(ValueError):
        discretize_spectrum(A, 0)
    with pytest.raises(ValueError):
        discretize_spectrum(A, 1.5)


def test_discretize_random_64():
    A = random_hermitian(20, np.random.default_rng(64))
    D = hermitian_eig(A)
    Dn = discretized_decomposition(D, 64)
    shift = D.eigenvalues - Dn.eigenvalues
    assert np.all(shift >= 0) and np.all(shift < 1 / 64)
    np.testing.assert_array_equal(64 * Dn.eigenvalues, np.round(64 * Dn.eigenvalues))
    assert np.linalg.norm(Dn.reconstruct() - A, 2) <= 1 / 64 + 1e-12


def test_discretize_snaps_grid_points():
    # 0.3 * 10 rounds to 2.9999999999999996 without the snap
    Dn = discretized_decomposition(hermitian_eig(np.diag([0.3, 0.7])), 10)
    np.testing.assert_allclose(Dn.eigenvalues, [0.3, 0.7])


@given(st.integers(1, 200), seeds)
def test_step_symbol_is_symbol_of_discretized(n, seed):
    # xi_n on A equals f[1] on A_n, the identity the discretization step relies on
    rng = np.random.default_rng(seed)
    A, V = random_hermitian(6, rng), random_matrix(6, rng)
    D = hermitian_eig(A)
    f = funclib.ABS
    Dn = discretized_decomposition(D, n)
    lhs = doi_apply(D, step_symbol(f, D, n), V)
    rhs = doi_apply(Dn, build_symbol(f, Dn, 0.0), V)
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + np.abs(V).max())


def test_discretization_envelope():
    rng = trial_rng(11, 0)
    A, B = random_hermitian(12, rng), random_hermitian(12, rng)
    f = funclib.ABS
    scaled = [n * discretization_error(A, B, f, n) for n in (1, 2, 4, 8, 16, 32, 64, 128, 256, 1024)]
    bound = 2 * np.linalg.norm(B, 2) * np.sqrt(12)
    assert max(scaled) <= bound
    assert max(scaled) <= baselines.DISCRETIZATION_C * (1 + 1e-9)


def test_dilation_examples():
    X = random_hermitian(3, np.random.default_rng(0))
    A, B = dilation_reduce(X, X)
    assert np.all(commutator(A, B) == 0)
    v = np.array([1.0, 1j, 0.0]) / np.sqrt(2)
    Y = X - 0.7 * np.outer(v, v.conj())
    A, B = dilation_reduce(X, Y)
    np.testing.assert_allclose(singular_values(commutator(A, B))[:3], [0.7, 0.7, 0], atol=1e-12)
    with pytest.raises(ValueError):
        dilation_reduce(np.eye(2), np.eye(3))


def test_dilation_seed13_doubling():
    rng = np.random.default_rng(13)
    X, Y = random_hermitian(7, rng), random_hermitian(7, rng)
    A, B = dilation_reduce(X, Y)
    f = funclib.ABS
    C = commutator(A, B)
    assert schatten_norm(C, 1) == pytest.approx(2 * schatten_norm(X - Y, 1), rel=1e-10)
    fAB = commutator(apply_function(f, hermitian_eig(A)), B)
    diff = apply_function(f, hermitian_eig(X)) - apply_function(f, hermitian_eig(Y))
    assert weak_l1_quasinorm(fAB) == pytest.approx(2 * weak_l1_quasinorm(diff), rel=1e-10)
