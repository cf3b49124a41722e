"""Periodic-grid stand-ins for Gaussian smoothing and Fourier multipliers.

A ``Grid`` samples the torus ``[-L, L)^d`` at ``N`` points per axis, with the
origin at index ``N // 2``.  Frequencies live on the lattice ``(pi / L) Z^d``
in FFT order.  Multipliers follow ``g(nabla) e_k = g(k) e_k`` with
``nabla = -i d/dx``.  Gaussians are only sampled on grids with ``L >= 8 l``,
where the wrapped tail is far below every tolerance used here.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .doi import divided_difference
from .spectral import as_matrix, hermitian_eig

log = logging.getLogger(__name__)

TAIL_FACTOR = 8.0


@dataclass(frozen=True)
class Grid:
    dim: int
    half_width: float
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("grid dimension must be 1 or 2")
        if self.n <= 0 or self.n % 2:
            raise ValueError(f"samples per axis must be a positive even integer, got {self.n}")
        if not self.half_width > 0:
            raise ValueError("half width must be positive")

    @property
    def spacing(self):
        return 2.0 * self.half_width / self.n

    @property
    def cell(self):
        return self.spacing ** self.dim

    @property
    def axis(self):
        return -self.half_width + self.spacing * np.arange(self.n)

    @property
    def shape(self):
        return (self.n,) * self.dim

    def mesh(self):
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij")

    @property
    def frequency_axis(self):
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def frequency_mesh(self):
        return np.meshgrid(*([self.frequency_axis] * self.dim), indexing="ij")


def grid_for_scale(l, dim=1, spacing=1 / 8):
    """Smallest grid with ``L >= 8 l`` whose frequency lattice contains ``Z^d``."""
    q = math.ceil(TAIL_FACTOR * l / math.pi)
    half = math.pi * q
    n = 2 * math.ceil(half / spacing)
    return Grid(dim, half, n)


@dataclass(frozen=True)
class GridField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid field has non-finite values")

    def l1(self):
        return float(np.abs(self.values).sum() * self.grid.cell)

    def l2(self):
        return float(np.sqrt((np.abs(self.values) ** 2).sum() * self.grid.cell))

    def mass(self):
        return complex(self.values.sum() * self.grid.cell)

    def __sub__(self, other):
        _same_grid(self, other)
        return GridField(self.grid, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GridField):
            _same_grid(self, other)
            return GridField(self.grid, self.values * other.values)
        return GridField(self.grid, self.values * other)

    __rmul__ = __mul__


def _same_grid(f, g):
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")


def gaussian_1d(l, s):
    return np.exp(-((s / l) ** 2)) / (l * np.sqrt(np.pi))


def gaussian_density(l, grid):
    """``G_l(s) = exp(-(s/l)^2) / (l sqrt(pi))``, tensor power on 2-D grids."""
    if not l > 0:
        raise ValueError("Gaussian width must be positive")
    if grid.half_width < TAIL_FACTOR * l:
        raise ValueError(
            f"half width {grid.half_width:g} < {TAIL_FACTOR:g} l = {TAIL_FACTOR * l:g}: "
            "the periodised Gaussian would wrap around"
        )
    g = gaussian_1d(l, grid.axis)
    values = g if grid.dim == 1 else np.multiply.outer(g, g)
    return GridField(grid, values.astype(complex))


def plane_wave(k, grid):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.size != grid.dim:
        raise ValueError(f"frequency has {k.size} components for a {grid.dim}-d grid")
    phase = sum(kj * xj for kj, xj in zip(k, grid.mesh()))
    return GridField(grid, np.exp(1j * phase))


def delta(grid):
    """Unit mass in the origin cell."""
    v = np.zeros(grid.shape, dtype=complex)
    v[(grid.n // 2,) * grid.dim] = 1.0 / grid.cell
    return GridField(grid, v)


def convolve(f, g):
    """Periodic convolution scaled by the cell measure."""
    _same_grid(f, g)
    out = np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(np.fft.ifftshift(g.values)))
    return GridField(f.grid, out * f.grid.cell)


def fourier_transform(f):
    """``int f(x) exp(-i w.x) dx`` on the frequency lattice, FFT order."""
    return np.fft.fftn(np.fft.ifftshift(f.values)) * f.grid.cell


def sample_symbol(symbol, grid):
    if callable(symbol):
        s = np.asarray(symbol(*grid.frequency_mesh()), dtype=complex)
        return np.broadcast_to(s, grid.shape)
    s = np.asarray(symbol, dtype=complex)
    if s.shape != grid.shape:
        raise ValueError(f"symbol shape {s.shape} does not match grid {grid.shape}")
    return s


def multiplier_apply(symbol, x):
    """``g(nabla) x``: scale every DFT coefficient by the symbol at its frequency."""
    s = sample_symbol(symbol, x.grid)
    if not np.all(np.isfinite(s)):
        raise ValueError("symbol has non-finite values")
    return GridField(x.grid, np.fft.ifftn(s * np.fft.fftn(x.values)))


def snap_to_lattice(k, grid):
    """Nearest lattice frequency and the Euclidean snap distance."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    step = np.pi / grid.half_width
    snapped = np.rint(k / step) * step
    return snapped, float(np.linalg.norm(snapped - k))


def _symbol_at(symbol, k):
    return complex(np.asarray(symbol(*[np.asarray(kj, dtype=float) for kj in k])))


def intertwining_error(symbol, k, l, grid=None):
    """``|| g(nabla)(G_l e_k) - g(k) G_l e_k ||_1`` on a periodic grid.

    ``k`` is snapped to the frequency lattice (distance logged).  Without an
    explicit grid one is built by :func:`grid_for_scale` with spacing 1/8 in
    one dimension and 1/4 in two.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if grid is None:
        grid = grid_for_scale(l, dim=k.size, spacing=1 / 8 if k.size == 1 else 1 / 4)
    k, dist = snap_to_lattice(k, grid)
    if dist > 0:
        log.info("intertwining_error: k snapped to %s (distance %.3g)", k, dist)
    u = gaussian_density(l, grid) * plane_wave(k, grid)
    return (multiplier_apply(symbol, u) - _symbol_at(symbol, k) * u).l1()


def integer_spectrum(D, tol=1e-9):
    lam = D.eigenvalues
    near = np.rint(lam)
    if np.any(np.abs(lam - near) > tol * np.maximum(1.0, np.abs(lam))):
        raise ValueError(f"spectrum is not integer: {lam}")
    return near


def transference_check(A, V, f, multiplier, l, grid=None, chunk=1 << 16):
    """Grid version of the transference limit for integer-spectrum ``A``.

    With ``u = sum_j p_j (x) e_(j, f(j))`` the two sides are

        (1 (x) m(nabla)) (u (V (x) G_l^2) u*)   and   u (T_{f[1]}(V) (x) G_l^2) u*,

    matrix-valued fields whose ``(a, b)`` entry in the eigenbasis of ``A`` is
    ``V_ab`` times a scalar field attached to the frequency
    ``(i - j, f(i) - f(j))``.  Returns ``sum_t ||difference(t)||_1 h^2``.
    ``multiplier`` is the full symbol (homogeneous part times cutoff).
    """
    if f.lipschitz_constant > 1 + 1e-12:
        raise ValueError(f"need ||f'|| <= 1, got {f.lipschitz_constant}; rescale first")
    D = hermitian_eig(A)
    spec = integer_spectrum(D)
    W = D.to_eigenbasis(as_matrix(V))
    if grid is None:
        grid = grid_for_scale(l, dim=2, spacing=1 / 4)
    g = gaussian_density(l, grid)
    levels = np.unique(spec)
    index = {j: n for n, j in enumerate(levels)}
    fields = np.empty((len(levels), len(levels)) + grid.shape, dtype=complex)
    for a, i in enumerate(levels):
        for b, j in enumerate(levels):
            k, dist = snap_to_lattice((i - j, f(i) - f(j)), grid)
            if dist > 0:
                log.info("transference_check: frequency for (%d,%d) snapped by %.3g", i, j, dist)
            u = g * plane_wave(k, grid)
            xi = divided_difference(f, float(i), float(j))
            fields[a, b] = (multiplier_apply(multiplier, u) - xi * u).values
    pos = np.array([index[j] for j in spec])
    flat = fields.reshape(len(levels), len(levels), -1)[pos][:, pos]
    total = 0.0
    npts = flat.shape[-1]
    for start in range(0, npts, chunk):
        block = np.moveaxis(flat[:, :, start:start + chunk], -1, 0) * W
        total += np.linalg.svd(block, compute_uv=False).sum()
    return float(total * grid.cell)


# -- step functions for the smoothing experiments ----------------------------

def cell_average(grid, a, b):
    """Fraction of each cell ``[x - h/2, x + h/2)`` covered by ``[a, b]``."""
    x, h = grid.axis, grid.spacing
    lo = np.maximum(x - h / 2, a)
    hi = np.minimum(x + h / 2, b)
    return np.clip(hi - lo, 0.0, None) / h


def step_field(grid, pieces):
    """Cell-averaged step function.

    ``pieces`` lists ``(coefficient, box)``; a box is ``(a, b)`` in one
    dimension and ``((a1, b1), (a2, b2))`` in two.
    """
    v = np.zeros(grid.shape)
    for coef, box in pieces:
        if grid.dim == 1:
            v += coef * cell_average(grid, *box)
        else:
            v += coef * np.multiply.outer(cell_average(grid, *box[0]), cell_average(grid, *box[1]))
    return GridField(grid, v.astype(complex))


def smoothing_norms(f, ls):
    """``||f * G_l||_1`` for each ``l``, all on the grid of ``f``."""
    return [convolve(f, gaussian_density(l, f.grid)).l1() for l in ls]


# -- CSV ---------------------------------------------------------------------

def format_field_csv(f):
    g = f.grid
    lines = [f"{g.dim},{float(g.half_width)!r},{g.n}"]
    lines += [f"{float(z.real)!r},{float(z.imag)!r}" for z in f.values.ravel()]
    return "\n".join(lines) + "\n"


def parse_field_csv(text):
    lines = [ln for ln in text.split("\n") if ln]
    dim, half, n = lines[0].split(",")
    grid = Grid(int(dim), float(half), int(n))
    vals = np.array([complex(float(r), float(i)) for r, i in (ln.split(",") for ln in lines[1:])])
    if vals.size != grid.n ** grid.dim:
        raise ValueError(f"expected {grid.n ** grid.dim} rows, found {vals.size}")
    return GridField(grid, vals.reshape(grid.shape))
