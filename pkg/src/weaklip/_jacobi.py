"""Cyclic Jacobi kernel for complex Hermitian matrices (numba-compiled)."""

import numpy as np
from numba import njit


@njit(cache=True)
def off_norm(a):
    """Frobenius norm of the strictly off-diagonal part of a Hermitian matrix."""
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j].real ** 2 + a[i, j].imag ** 2
    return np.sqrt(2.0 * s)


@njit(cache=True)
def jacobi_sweeps(a, vt, tol, max_sweeps):
    """Run row-cyclic Jacobi sweeps in place.

    ``a`` is overwritten by a (numerically) diagonal matrix and ``vt`` by the
    transpose of the accumulated unitary.  Only rows are touched explicitly;
    the Hermitian mirror is written from them, which keeps memory access
    contiguous.  Returns ``(sweeps, residual)``; ``sweeps == -1`` signals
    that the cap was hit before the off-diagonal mass dropped below ``tol``.
    """
    n = a.shape[0]
    off = off_norm(a)
    for sweep in range(max_sweeps + 1):
        off = off_norm(a)
        if off <= tol:
            return sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                cph = ph.conjugate()
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sph = s * ph
                cph_c = c * ph
                for k in range(n):
                    if k == p or k == q:
                        continue
                    apk = a[p, k]
                    aqk = a[q, k]
                    npk = c * apk - sph * aqk
                    nqk = s * apk + cph_c * aqk
                    a[p, k] = npk
                    a[q, k] = nqk
                    a[k, p] = npk.conjugate()
                    a[k, q] = nqk.conjugate()
                a[p, p] = a[p, p].real - t * mag
                a[q, q] = a[q, q].real + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
                scph = s * cph
                ccph = c * cph
                for k in range(n):
                    vp = vt[p, k]
                    vq = vt[q, k]
                    vt[p, k] = c * vp - scph * vq
                    vt[q, k] = s * vp + ccph * vq
    return -1, off
