"""Singular value sequences, Schatten norms and the weak-(1, inf) quasi-norm.

Two traces are supported: the counting measure on matrix singular values,
and positive cell weights for sampled densities (``WeightedSeq``).  For a
nonincreasing step function the supremum of ``t * mu(t)`` is attained at a
right endpoint of a constancy interval, so every scan below is a single pass
over cumulative weights.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .spectral import as_matrix, hermitian_eig, is_hermitian


def singular_values(M):
    """Singular values of ``M`` in nonincreasing order.

    Hermitian and anti-Hermitian input (differences ``f(X) - f(Y)`` and
    commutators of Hermitian matrices) is handled through ``|eig|``, which
    avoids squaring.  Otherwise the Jacobi eigenvectors ``v_i`` of ``M*M``
    give ``sigma_i = ||M v_i||``.
    """
    a = as_matrix(M)
    if is_hermitian(a):
        s = np.abs(hermitian_eig(a).eigenvalues)
    elif is_hermitian(1j * a):
        s = np.abs(hermitian_eig(1j * a).eigenvalues)
    else:
        gram = a.conj().T @ a
        D = hermitian_eig(0.5 * (gram + gram.conj().T))
        s = np.linalg.norm(a @ D.vectors, axis=0)
    return np.sort(s)[::-1]


def schatten_from_values(mu, p):
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    mu = np.asarray(mu, dtype=float)
    if mu.size == 0:
        return 0.0
    top = mu.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((mu / top) ** p) ** (1.0 / p))


def schatten_norm(M, p):
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    return schatten_from_values(singular_values(M), p)


def weak_from_values(mu):
    """``max_k (k+1) mu_k`` for a nonincreasing sequence."""
    mu = np.asarray(mu, dtype=float)
    if mu.size == 0:
        return 0.0
    return float(np.max(np.arange(1, mu.size + 1) * mu))


def weak_l1_quasinorm(M):
    return weak_from_values(singular_values(M))


@dataclass(frozen=True)
class WeightedSeq:
    """Canonical step rearrangement: values strictly decreasing, weights > 0."""

    values: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_pairs(cls, values, weights):
        v = np.asarray(values, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if w.size == 1 and v.size > 1:
            w = np.full(v.size, w[0])
        if v.shape != w.shape:
            raise ValueError("values and weights differ in length")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(w))):
            raise ValueError("values and weights must be finite")
        if np.any(v < 0):
            raise ValueError("values must be nonnegative")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if v.size == 0:
            return cls(v, w)
        order = np.argsort(-v, kind="stable")
        v, w = v[order], w[order]
        starts = np.flatnonzero(np.concatenate([[True], v[1:] != v[:-1]]))
        return cls(v[starts], np.add.reduceat(w, starts))

    @property
    def total_weight(self):
        return float(self.weights.sum())

    def __len__(self):
        return len(self.values)


def weak_l1_weighted(S):
    if len(S) == 0:
        return 0.0
    return float(np.max(np.cumsum(S.weights) * S.values))


def distribution_function(S, s):
    """Total weight carried by values strictly above ``s``."""
    return float(S.weights[S.values > s].sum())


def tensor_weighted(M, density):
    """Rearrangement of ``M (x) g`` for a sampled density ``g``.

    ``M`` may be a matrix or an already computed singular value sequence.
    """
    mu = np.asarray(M, dtype=float) if np.ndim(M) == 1 else singular_values(M)
    mu = mu[mu > 0]  # zero singular values carry no mass in the rearrangement
    values = np.multiply.outer(mu, density.values)
    weights = np.broadcast_to(density.weights, values.shape)
    return WeightedSeq.from_pairs(values, weights)


def counting_sequence(mu):
    mu = np.asarray(mu, dtype=float)
    return WeightedSeq.from_pairs(mu, np.ones_like(mu))


def field_sequence(values, cell_measure):
    """Rearrangement of ``|values|`` sampled on cells of equal measure."""
    return WeightedSeq.from_pairs(np.abs(np.asarray(values)).ravel(), cell_measure)


def format_sequence_csv(S):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "weight"])
    for v, wt in zip(S.values, S.weights):
        w.writerow([repr(float(v)), repr(float(wt))])
    return buf.getvalue()


def parse_sequence_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["value", "weight"]:
        raise ValueError("missing 'value,weight' header")
    body = [r for r in rows[1:] if r]
    return WeightedSeq.from_pairs([float(r[0]) for r in body], [float(r[1]) for r in body])
