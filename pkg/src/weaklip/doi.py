"""Double operator integrals as Schur multipliers in an eigenbasis.

For ``A = sum_i lambda_i P_i`` the transformer ``T_xi(V) = sum xi(lambda_i,
lambda_j) P_i V P_j`` is entrywise multiplication by ``xi(lambda_i,
lambda_j)`` after moving ``V`` to the eigenbasis.  The divided difference
uses the convention ``f[1](lambda, lambda) = 0``; in finite dimensions this
is harmless because ``[A, B]`` vanishes on equal-eigenvalue blocks.
"""

from dataclasses import dataclass

import numpy as np

from .spectral import SpectralDecomposition, apply_function, as_hermitian, as_matrix, commutator, hermitian_eig

CLUSTER_RTOL = 1e-9


def divided_difference(f, lam, mu):
    if lam == mu:
        return 0.0
    return (f(lam) - f(mu)) / (lam - mu)


def divided_difference_matrix(f, x, y=None):
    """``f[1](x_i, y_j)`` on a grid, zero where ``x_i == y_j``."""
    x = np.asarray(x, dtype=float)
    y = x if y is None else np.asarray(y, dtype=float)
    num = np.subtract.outer(f(x), f(y))
    den = np.subtract.outer(x, y)
    same = den == 0
    return np.where(same, 0.0, num / np.where(same, 1.0, den))


def default_cluster_tol(eigenvalues):
    lam = np.asarray(eigenvalues)
    return CLUSTER_RTOL * float(lam.max() - lam.min()) if lam.size else 0.0


def cluster_labels(eigenvalues, tol):
    """Chain-cluster ascending eigenvalues: a gap larger than ``tol`` starts a new cluster."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        return np.zeros(0, dtype=int)
    return np.concatenate([[0], np.cumsum(np.diff(lam) > tol)])


@dataclass(frozen=True)
class SchurSymbol:
    values: np.ndarray
    cluster_tol: float


def build_symbol(f, D, cluster_tol=None):
    """Divided-difference symbol on the spectrum of ``D``.

    Eigenvalues closer than ``cluster_tol`` (default ``1e-9`` times the
    spectral diameter) are replaced by their cluster mean, so the symbol is
    exactly constant on degenerate blocks and never evaluates a quotient
    with a tiny denominator.
    """
    lam = D.eigenvalues
    tol = default_cluster_tol(lam) if cluster_tol is None else float(cluster_tol)
    if tol < 0:
        raise ValueError("cluster_tol must be >= 0")
    labels = cluster_labels(lam, tol)
    counts = np.bincount(labels)
    means = np.bincount(labels, weights=lam) / counts
    rep = means[labels]
    xi = divided_difference_matrix(f, rep)
    xi[labels[:, None] == labels[None, :]] = 0.0
    bound = getattr(f, "lipschitz_constant", None)
    if bound is not None:
        # only rounding can push a quotient past the Lipschitz bound
        xi = np.clip(xi, -bound, bound)
    return SchurSymbol(xi, tol)


def doi_apply(D, S, V):
    """``U (S o (U* V U)) U*``."""
    v = as_matrix(V)
    if v.shape != (D.n, D.n) or S.values.shape != (D.n, D.n):
        raise ValueError(f"dimension mismatch: V {v.shape}, symbol {S.values.shape}, n={D.n}")
    return D.from_eigenbasis(S.values * D.to_eigenbasis(v))


def commutator_identity_residual(A, B, f, cluster_tol=None):
    """``|| T_{f[1]}^{A,A}([A,B]) - [f(A),B] ||_F``."""
    a = as_hermitian(A)
    D = hermitian_eig(a)
    lhs = doi_apply(D, build_symbol(f, D, cluster_tol), commutator(a, B))
    rhs = commutator(apply_function(f, D), B)
    return float(np.linalg.norm(lhs - rhs))


def identity_tolerance(A, B, f, rtol=1e-9):
    """Scale used to judge a commutator-identity residual."""
    return rtol * (1 + f.lipschitz_constant) * (1 + np.linalg.norm(A)) * (1 + np.linalg.norm(B))


def discretized_decomposition(D, n):
    """Same eigenvectors, eigenvalues moved down to the grid ``Z / n``.

    ``n * lambda`` within a few ulps of an integer is snapped to it first so
    that exactly representable grid points are fixed.
    """
    if not (n >= 1 and float(n).is_integer()):
        raise ValueError("n must be a positive integer")
    x = n * D.eigenvalues
    near = np.rint(x)
    snap = np.abs(x - near) <= 64 * np.finfo(float).eps * np.maximum(1.0, np.abs(x))
    k = np.where(snap, near, np.floor(x))
    return SpectralDecomposition(k / n, D.vectors)


def discretize_spectrum(A, n):
    return discretized_decomposition(hermitian_eig(A), n).reconstruct()


def discretization_error(A, B, f, n):
    """``|| T_{f[1]}^{A_n, A_n}([A_n, B]) - [f(A), B] ||_F`` with ``A_n`` floored to ``Z / n``.

    Bounded by ``2 ||f'|| ||B|| sqrt(dim) / n`` plus the identity residual.
    """
    a = as_hermitian(A)
    D = hermitian_eig(a)
    Dn = discretized_decomposition(D, n)
    an = Dn.reconstruct()
    lhs = doi_apply(Dn, build_symbol(f, Dn, 0.0), commutator(an, B))
    return float(np.linalg.norm(lhs - commutator(apply_function(f, D), B)))


def step_symbol(f, D, n):
    """Symbol of ``xi_n(t, s) = f[1](floor(nt)/n, floor(ns)/n)`` on the spectrum of ``D``."""
    grid = discretized_decomposition(D, n).eigenvalues
    return SchurSymbol(divided_difference_matrix(f, grid), 0.0)


def dilation_reduce(X, Y):
    """``A = diag(X, Y)`` and the swap ``B = [[0, 1], [1, 0]]``.

    Then ``[A, B] = [[0, X - Y], [Y - X, 0]]`` and
    ``[f(A), B] = [[0, f(X) - f(Y)], [f(Y) - f(X), 0]]``.
    """
    x, y = as_hermitian(X), as_hermitian(Y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    n = x.shape[0]
    z = np.zeros((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    return np.block([[x, z], [z, y]]), np.block([[z, eye], [eye, z]])
