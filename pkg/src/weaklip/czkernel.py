"""Homogeneous symbols on R^2, their kernels, and Calderon-Zygmund checks.

A degree-zero homogeneous ``g`` is determined by its circle profile
``g(e^{i theta}) = sum_k alpha_k e^{ik theta}``.  Away from the origin its
kernel (with the ``alpha_0`` delta removed) is

    K(z) = h(Arg z) / |z|^2,   h(theta) = sum_{k != 0} |k| / (2 pi i^k) alpha_k e^{ik theta}.

This closed form corresponds to ``K(z) = (2 pi)^-2 int g(w) e^{-i<w,z>} dw``.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .fourier import Grid, GridField, fourier_transform

QUARTER = math.pi / 4


@dataclass(frozen=True)
class CircleSymbol:
    """Fourier coefficients ``alpha_k`` for ``|k| <= k_max``.

    ``profile``, when present, is the exact angular rule; evaluation prefers
    it over the truncated series.  ``delta`` is ``alpha_0``, the weight of
    the delta removed from the kernel.
    """

    coefficients: np.ndarray  # index k + k_max
    k_max: int
    real: bool = False
    profile: Optional[Callable] = field(default=None, repr=False, compare=False)
    truncation_residual: float = 0.0

    def __post_init__(self):
        if self.coefficients.shape != (2 * self.k_max + 1,):
            raise ValueError("coefficient array must have length 2 k_max + 1")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("coefficients must be finite")

    @property
    def ks(self):
        return np.arange(-self.k_max, self.k_max + 1)

    def alpha(self, k):
        return complex(self.coefficients[k + self.k_max]) if abs(k) <= self.k_max else 0j

    @property
    def delta(self):
        return self.alpha(0)

    def decay_certificate(self, power=3):
        """``max_k |alpha_k| (1 + |k|)^power``."""
        return float(np.max(np.abs(self.coefficients) * (1.0 + np.abs(self.ks)) ** power))

    def series(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for k, a in zip(self.ks, self.coefficients):
            if a != 0:
                out += a * np.exp(1j * k * theta)
        return out.real if self.real else out

    def __call__(self, theta):
        return self.profile(theta) if self.profile is not None else self.series(theta)

    def homogeneous(self, x, y):
        """Degree-zero extension ``g(x, y) = g(e^{i atan2(y, x)})``; zero at the origin."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = self(np.arctan2(y, x))
        return np.where((x == 0) & (y == 0), 0.0, out)


def symbol_from_samples(values, k_max, real=None, profile=None):
    """Coefficients from samples at ``theta_j = 2 pi j / M``, ``M >= 4 k_max``."""
    v = np.asarray(values)
    m = v.size
    if m < 4 * k_max:
        raise ValueError(f"{m} samples cannot resolve k_max={k_max} (need >= {4 * k_max})")
    if real is None:
        real = bool(np.isrealobj(v) or np.all(v.imag == 0))
    c = np.fft.fft(v) / m
    ks = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    coeffs = np.zeros(2 * k_max + 1, dtype=complex)
    keep = np.abs(ks) <= k_max
    coeffs[ks[keep] + k_max] = c[keep]
    residual = float(np.sqrt(np.sum(np.abs(c[~keep]) ** 2)))
    if real:
        # enforce alpha_{-k} = conj(alpha_k) exactly
        coeffs = 0.5 * (coeffs + coeffs[::-1].conj())
    return CircleSymbol(coeffs, k_max, real, profile, residual)


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, flat to all orders at both ends."""
    x = np.asarray(x, dtype=float)
    a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
    b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def tan_profile(delta):
    """``tan`` on ``|theta| <= pi/4`` and ``|theta - pi| <= pi/4``, ``cot`` in the middle of the
    remaining arcs, blended by :func:`smooth_step` over width ``delta`` next to the tan arcs.

    Both pieces have period ``pi`` and the result is odd, so its circle mean vanishes.
    """

    def profile(theta):
        theta = np.asarray(theta, dtype=float)
        u = np.mod(theta + QUARTER, math.pi) - QUARTER  # in [-pi/4, 3pi/4)
        on_tan = u <= QUARTER
        # distance into the bridge arc measured from its nearer end
        d = np.where(u < math.pi / 2, u - QUARTER, 3 * QUARTER - u)
        w = smooth_step(d / delta)
        safe = np.where(on_tan, 0.0, u)
        tan_u = np.tan(np.where(on_tan | (w < 1), u, 0.0))
        cot_u = np.cos(safe) / np.where(on_tan, 1.0, np.sin(safe))
        bridge = (1 - w) * tan_u + w * cot_u
        return np.where(on_tan, np.tan(u), bridge)

    return profile


def tan_symbol(delta=math.pi / 16, k_max=64, samples=8192):
    if not 0 < delta < QUARTER:
        raise ValueError(f"taper width must lie in (0, pi/4), got {delta}")
    base = tan_profile(delta)
    theta = 2 * math.pi * np.arange(samples) / samples
    values = base(theta)
    mean = float(np.mean(values))
    if abs(mean) <= 64 * np.finfo(float).eps * np.abs(values).max():
        # the construction is odd, so the mean vanishes; do not smear rounding onto the arcs
        mean = 0.0

    def profile(t):
        return base(t) - mean

    return symbol_from_samples(profile(theta), k_max, real=True, profile=profile)


def symbol_divided_difference_identity(g, f, radius, margin=1e-3):
    """``max |g(i - j, f(i) - f(j)) - f[1](i, j)|`` over integers ``|i|, |j| <= radius``, ``i != j``.

    Every evaluated direction must sit strictly inside the tan arcs, i.e.
    ``|f(i) - f(j)| <= (1 - margin) |i - j|``.
    """
    n = np.arange(-radius, radius + 1)
    i, j = np.meshgrid(n, n, indexing="ij")
    off = i != j
    i, j = i[off].astype(float), j[off].astype(float)
    dx, dy = i - j, np.asarray(f(i), dtype=float) - np.asarray(f(j), dtype=float)
    bad = np.abs(dy) > (1 - margin) * np.abs(dx)
    if bad.any():
        k = int(np.argmax(bad))
        raise ValueError(f"pair (i={int(i[k])}, j={int(j[k])}) has slope {dy[k] / dx[k]:.6g} outside the tan arcs")
    return float(np.max(np.abs(g.homogeneous(dx, dy) - dy / dx)))


# -- kernels ------------------------------------------------------------------

def kernel_coefficients(g):
    """Coefficients of ``h``: ``|k| / (2 pi i^k) alpha_k``, zero at ``k = 0``."""
    ks = g.ks
    return np.abs(ks) / (2 * math.pi) * (-1j) ** (ks % 4) * g.coefficients


def kernel_tail_bound(g, power=4):
    """Bound on ``sup |h|`` lost to truncation when ``|alpha_k| <= C (1+|k|)^-power``."""
    c = g.decay_certificate(power)
    tail = sum(k / (1.0 + k) ** power for k in range(g.k_max + 1, 20 * g.k_max + 1000))
    return 2 * c * tail / (2 * math.pi)


def kernel_values(g, x, y):
    """``K(z) = h(Arg z) / |z|^2`` with a fixed summation order over ``k``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    z = np.exp(1j * np.arctan2(y, x))
    hk = kernel_coefficients(g)
    out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    power = np.ones_like(out)
    # k = 0 .. k_max, then k = -1 .. -k_max
    for k in range(0, g.k_max + 1):
        if k:
            power = power * z
            out += hk[k + g.k_max] * power
    power = np.ones_like(out)
    zc = z.conj()
    for k in range(1, g.k_max + 1):
        power = power * zc
        out += hk[-k + g.k_max] * power
    return out / np.where(r2 > 0, r2, np.inf)


@dataclass(frozen=True)
class AnnulusKernel:
    """Kernel sampled on a square grid; ``mask`` marks ``r_min <= |z| <= r_max``.

    Values are filled in down to ``r_min / 2`` so centred differences at the
    inner edge see genuine neighbours.
    """

    field: GridField
    mask: np.ndarray
    r_min: float
    r_max: float


def kernel_from_symbol(g, r_min, r_max, spacing=None, tol=None):
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if tol is not None:
        bound = kernel_tail_bound(g)
        if bound > tol:
            raise ValueError(f"coefficient decay only guarantees {bound:.3g} > requested {tol:.3g}")
    h = r_min / 16 if spacing is None else spacing
    n = 2 * math.ceil((r_max + 2 * h) / h)
    grid = Grid(2, n * h / 2, n)
    x, y = grid.mesh()
    r = np.hypot(x, y)
    inside = r >= r_min / 2
    vals = np.where(inside, kernel_values(g, np.where(inside, x, 1.0), y), 0.0)
    return AnnulusKernel(GridField(grid, vals), (r >= r_min) & (r <= r_max), r_min, r_max)


def kernel_rings(g, r_min, r_max, ratio=2.0):
    """Cover ``r_min <= |z| <= r_max`` by rings ``[r, ratio r]``, each with spacing ``r / 16``."""
    rings, r = [], r_min
    while r < r_max:
        outer = min(r * ratio, r_max)
        rings.append(kernel_from_symbol(g, r, outer))
        r = outer
    return rings


def cz_condition_check(K):
    """``(max |z|^2 |K|, max |z|^3 |grad K|)`` over the annulus mask(s)."""
    if isinstance(K, AnnulusKernel):
        K = [K]
    c0 = c1 = 0.0
    for ring in K:
        grid = ring.field.grid
        h = grid.spacing
        if h > ring.r_min / 16 * (1 + 1e-12):
            raise ValueError(f"spacing {h:g} is coarser than r_min/16 = {ring.r_min / 16:g}")
        v = ring.field.values
        x, y = grid.mesh()
        r = np.hypot(x, y)
        dx = np.zeros_like(v)
        dy = np.zeros_like(v)
        dx[1:-1, :] = (v[2:, :] - v[:-2, :]) / (2 * h)
        dy[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2 * h)
        m = ring.mask.copy()
        m[[0, -1], :] = False
        m[:, [0, -1]] = False
        c0 = max(c0, float(np.max(r[ring.mask] ** 2 * np.abs(v[ring.mask]))))
        grad = np.sqrt(np.abs(dx[m]) ** 2 + np.abs(dy[m]) ** 2)
        c1 = max(c1, float(np.max(r[m] ** 3 * grad)))
    return c0, c1


def kernel_by_dft(g, radius, n, window=None):
    """Independent route to ``K``: 2-D DFT of the windowed homogeneous symbol.

    The frequency box is ``[-radius, radius)^2`` with ``n`` points per axis;
    ``window(|w|)`` regularises the non-decaying symbol.  Returns the spatial
    grid and ``K`` on it (origin at index ``n // 2``).
    """
    fgrid = Grid(2, radius, n)
    w1, w2 = fgrid.mesh()
    rho = np.hypot(w1, w2)
    win = np.ones_like(rho) if window is None else window(rho)
    sym = GridField(fgrid, (g.homogeneous(w1, w2) * win).astype(complex))
    # int g(w) e^{-i<w,z>} dw sampled at z in (pi / radius) Z^2
    vals = np.fft.fftshift(fourier_transform(sym)) / (2 * math.pi) ** 2
    zstep = math.pi / radius
    zgrid = Grid(2, zstep * n / 2, n)
    return zgrid, vals


# -- Schwartz cutoffs -----------------------------------------------------------

def bump(t):
    """Smooth even bump: 1 on ``|t| <= 1``, 0 on ``|t| >= 2``."""
    return smooth_step(2.0 - np.abs(np.asarray(t, dtype=float)))


def box_bump(x, y):
    return bump(x) * bump(y)


@dataclass(frozen=True)
class CutoffSymbol:
    """``phi(w) = Psi(w / (3m)) (1 - Psi(w / hole))`` with ``Psi = bump (x) bump``.

    Zero where ``max(|w1|, |w2|) < hole``, one where that max lies in
    ``[2 hole, 3m]``, zero once it reaches ``6m``.  The default
    ``hole = 1 / (3m)`` gives ``phi = 1`` whenever ``|w|`` is in ``(1/m, m)``.
    """

    m: float
    hole: Optional[float] = None

    @property
    def inner(self):
        return 1.0 / (3 * self.m) if self.hole is None else self.hole

    def __call__(self, w1, w2):
        outer = box_bump(np.asarray(w1) / (3 * self.m), np.asarray(w2) / (3 * self.m))
        inner = box_bump(np.asarray(w1) / self.inner, np.asarray(w2) / self.inner)
        return outer * (1.0 - inner)

    def sample(self, grid):
        return self(*grid.frequency_mesh())


def cutoff_symbol(m, hole=None):
    if not m > 0:
        raise ValueError("m must be positive")
    return CutoffSymbol(float(m), hole)


def cut_symbol(g, cutoff):
    """Multiplier ``w -> g(w) phi(w)`` for use with ``multiplier_apply``."""

    def symbol(w1, w2):
        return g.homogeneous(w1, w2) * cutoff(w1, w2)

    return symbol


def _bump_kernel(x, nodes=4001):
    """``(2 pi)^-1 int bump(w) e^{iwx} dw`` by the trapezoid rule on [-2, 2]."""
    w = np.linspace(0.0, 2.0, nodes)
    wt = np.full(nodes, w[1] - w[0])
    wt[[0, -1]] *= 0.5
    b = bump(w) * wt
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    for s in range(0, x.size, 2048):
        xs = x.ravel()[s:s + 2048]
        out.ravel()[s:s + 2048] = np.cos(np.multiply.outer(xs, w)) @ b
    return out / math.pi


def cutoff_kernel_l1(m, reach=80.0, step=0.05):
    """``||F^-1 phi_m||_1`` for the default-hole cutoff.

    ``phi_m = Psi(w/(3m)) - Psi(3m w)`` exactly (the inner bump sits where the
    outer one is 1), so the kernel is a difference of two dilated tensor
    kernels.  After rescaling, ``int |kappa(y) - eps^2 kappa(eps y)| dy`` with
    ``kappa = k (x) k``, ``eps = 1/(9 m^2)`` is summed on a two-scale tensor grid.
    """
    eps = 1.0 / (9.0 * m * m)
    fine = np.arange(-reach, reach + step / 2, step)
    coarse = np.arange(-reach / eps, reach / eps + step / (2 * eps), step / eps)
    coarse = coarse[np.abs(coarse) > reach]
    nodes = np.sort(np.concatenate([fine, coarse]))
    wt = np.zeros_like(nodes)
    gaps = np.diff(nodes)
    wt[:-1] += gaps / 2
    wt[1:] += gaps / 2
    # beyond ``reach`` the unscaled kernel is below quadrature noise; evaluating it
    # there would only alias the trapezoid rule
    k1 = np.where(np.abs(nodes) <= reach, _bump_kernel(np.clip(nodes, -reach, reach)), 0.0)
    k2 = eps * _bump_kernel(eps * nodes)
    total = 0.0
    for s in range(0, nodes.size, 512):
        block = np.multiply.outer(k1[s:s + 512], k1) - np.multiply.outer(k2[s:s + 512], k2)
        total += float((np.abs(block) * wt[s:s + 512, None] * wt[None, :]).sum())
    return total


# -- CSV -------------------------------------------------------------------------

def format_symbol_csv(g):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re", "im"])
    for k, a in zip(g.ks, g.coefficients):
        w.writerow([int(k), repr(float(a.real)), repr(float(a.imag))])
    return buf.getvalue()


def parse_symbol_csv(text, real=None):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["k", "re", "im"]:
        raise ValueError("missing 'k,re,im' header")
    entries = {int(r[0]): complex(float(r[1]), float(r[2])) for r in rows[1:] if r}
    k_max = max(abs(k) for k in entries)
    coeffs = np.zeros(2 * k_max + 1, dtype=complex)
    for k, a in entries.items():
        coeffs[k + k_max] = a
    if real is None:
        real = bool(np.allclose(coeffs, coeffs[::-1].conj(), rtol=0, atol=0))
    return CircleSymbol(coeffs, k_max, real)
