"""Dense Hermitian matrices: eigendecomposition and functional calculus.

Matrices are plain ``numpy`` arrays.  Validation helpers turn arbitrary input
into finite square complex arrays and reject non-Hermitian data with a
diagnostic that names the worst entry pair.
"""

from dataclasses import dataclass

import numpy as np

from ._jacobi import jacobi_sweeps

HERM_TOL = 1e-12
EIG_TOL = 1e-13
MAX_SWEEPS = 30


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


def as_matrix(M):
    """Return ``M`` as a finite square complex128 array."""
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitian_defect(M):
    """Largest ``|M[i,j] - conj(M[j,i])|`` and the pair where it occurs."""
    a = as_matrix(M)
    gap = np.abs(a - a.conj().T)
    i, j = np.unravel_index(np.argmax(gap), gap.shape)
    return float(gap[i, j]), (int(i), int(j))


def as_hermitian(M, tol=HERM_TOL):
    """Validate Hermitian input and return its exactly Hermitian part."""
    a = as_matrix(M)
    defect, (i, j) = hermitian_defect(a)
    scale = tol * (1.0 + np.abs(a).max())
    if defect > scale:
        raise NotHermitianError(
            f"entries ({i},{j}) and ({j},{i}) are not conjugate: "
            f"|a_ij - conj(a_ji)| = {defect:.3e} > {scale:.3e}"
        )
    return 0.5 * (a + a.conj().T)


def is_hermitian(M, tol=HERM_TOL):
    a = as_matrix(M)
    return hermitian_defect(a)[0] <= tol * (1.0 + np.abs(a).max())


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = U diag(eigenvalues) U*`` with ascending eigenvalues."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def n(self):
        return len(self.eigenvalues)

    def reconstruct(self, values=None):
        lam = self.eigenvalues if values is None else np.asarray(values)
        U = self.vectors
        out = (U * lam) @ U.conj().T
        return 0.5 * (out + out.conj().T)

    def to_eigenbasis(self, V):
        U = self.vectors
        return U.conj().T @ V @ U

    def from_eigenbasis(self, W):
        U = self.vectors
        return U @ W @ U.conj().T


def hermitian_eig(A, tol=EIG_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``tol * ||A||_F``.  Raises :class:`ConvergenceError` (carrying the
    residual) if ``max_sweeps`` sweeps do not get there.
    """
    a = as_hermitian(A).copy()
    n = a.shape[0]
    vt = np.eye(n, dtype=np.complex128)
    threshold = tol * np.linalg.norm(a)
    sweeps, residual = jacobi_sweeps(a, vt, threshold, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e} > {threshold:.3e})",
            residual,
        )
    lam = a.diagonal().real.copy()
    order = np.argsort(lam, kind="stable")
    return SpectralDecomposition(lam[order], np.ascontiguousarray(vt.T[:, order]))


def apply_function(f, D):
    """``f(A) = U diag(f(lambda)) U*`` for a real-valued rule ``f``."""
    lam = D.eigenvalues
    values = np.asarray(f(lam), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        raise ValueError(f"function is not finite at eigenvalue {lam[np.argmax(bad)]!r}")
    return D.reconstruct(values)


def commutator(A, B):
    a, b = as_matrix(A), as_matrix(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def random_unitary(n, rng):
    """Haar unitary via QR with the phase correction of the R diagonal."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d / np.abs(d))


# -- plain-text matrix format -------------------------------------------------

def _format_entry(z):
    sign = "-" if (z.imag < 0 or (z.imag == 0 and np.signbit(z.imag))) else "+"
    return f"{float(z.real)!r}{sign}{float(abs(z.imag))!r}j"


def format_matrix(M):
    a = as_matrix(M)
    lines = [str(a.shape[0])]
    lines += [" ".join(_format_entry(z) for z in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    n = int(lines[0])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for k, ln in enumerate(lines[1:]):
        tokens = ln.split(" ")
        if len(tokens) != n:
            raise ValueError(f"row {k} has {len(tokens)} entries, expected {n}")
        rows.append([complex(t) for t in tokens])
    return as_matrix(rows)


def save_matrix(path, M):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(M))


def load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())
