"""Admissible initial data, the smooth mollifier, and data-dependent constants.

Builders return fields in the grid's native representation (the reduced
v = r*u on radial3d lattices).  Data never needs compact support; the
Gaussian family is the default, the compactly supported bump and the
mean-zero ricker profile cover the remaining presets.

``seed_constants`` evaluates the explicit constants that bound the
decay-weighted norms along a run: the initial energy E0, the weighted
data constant I0, and the derived I1, I2, I3, I00.  The I2 formula uses
the conservative 2/V0 prefactor.
"""

from dataclasses import dataclass

import numpy as np
import scipy.ndimage

from .coefficients import DampingCoefficient, damping_on_grid
from .fields import Grid, ScalarField


def _center_offsets(grid: Grid, center):
    if np.isscalar(center):
        if grid.mode == "radial3d":
            return grid.axis - float(center)
        center = (float(center),) * grid.dimension
    if grid.mode == "radial3d":
        raise ValueError("radial3d data takes a scalar radial center")
    if len(center) != grid.dimension:
        raise ValueError("center length must match the grid dimension")
    return [c - float(ci) for c, ci in zip(grid.coords(), center)]


def _dist_sq(grid: Grid, center):
    off = _center_offsets(grid, center)
    if grid.mode == "radial3d":
        return off**2
    return sum(o**2 for o in off)


def _as_field(grid: Grid, profile: np.ndarray) -> ScalarField:
    # radial3d stores v = r*u with pinned endpoints
    if grid.mode == "radial3d":
        v = grid.axis * profile
        v[0] = 0.0
        v[-1] = 0.0
        return ScalarField(grid, v)
    return ScalarField(grid, profile)


def make_gaussian(grid: Grid, amplitude: float, center=0.0,
                  width: float = 1.0) -> ScalarField:
    if not width > 0:
        raise ValueError("width must be positive")
    r2 = _dist_sq(grid, center)
    return _as_field(grid, amplitude * np.exp(-r2 / (2.0 * width**2)))


def bump_profile(t):
    """g(t) = exp(-1/(1-t^2)) for |t| < 1, zero beyond.

    Composed with t = |x|^2/R^2 this is the compactly supported smooth
    core used for data, the mollifier kernel, and test functions; its
    value at the center is exp(-1).
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def bump_profile_d(t):
    """First derivative g'(t) = g(t) * (-2t)/(1-t^2)^2."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1.0
    tm = t[m]
    w = 1.0 - tm**2
    out[m] = np.exp(-1.0 / w) * (-2.0 * tm) / w**2
    return out


def bump_profile_dd(t):
    """Second derivative of g."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1.0
    tm = t[m]
    w = 1.0 - tm**2
    out[m] = np.exp(-1.0 / w) * (4.0 * tm**2 / w**4 - 2.0 / w**2 - 8.0 * tm**2 / w**3)
    return out


def make_bump(grid: Grid, radius: float, amplitude: float = 1.0,
              center=0.0) -> ScalarField:
    """Smooth compactly supported profile, zero for |x - center| >= radius."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    s = _dist_sq(grid, center) / radius**2
    return _as_field(grid, amplitude * bump_profile(s))


def make_ricker(grid: Grid, amplitude: float, sigma: float = 1.0,
                center=0.0) -> ScalarField:
    """Mean-zero profile: A*(1 - r^2/(n sigma^2)) exp(-r^2/(2 sigma^2)).

    The n-dependent normalization makes the continuum integral vanish in
    the grid's own dimension.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    n = grid.dimension
    r2 = _dist_sq(grid, center)
    prof = amplitude * (1.0 - r2 / (n * sigma**2)) * np.exp(-r2 / (2.0 * sigma**2))
    return _as_field(grid, prof)


def make_mode(grid: Grid, index: int, amplitude: float,
              phase: float = 0.0) -> ScalarField:
    """Single periodic Fourier mode cos(index*pi*x/L + phase) (1-D periodic only)."""
    if grid.mode != "periodic" or grid.dimension != 1:
        raise ValueError("mode data requires a 1-D periodic grid")
    k = index * np.pi / grid.half_extent
    return ScalarField(grid, amplitude * np.cos(k * grid.axis + phase))


def zero_field(grid: Grid) -> ScalarField:
    return ScalarField(grid, np.zeros(grid.shape))


def mollify(f: ScalarField, eps: float) -> ScalarField:
    """Convolve with the compact smooth kernel of support radius eps.

    The discrete kernel is normalized to unit mass, so the output L^2
    norm never exceeds the input's and periodic convolution preserves
    the total integral.  Tensor grids only.
    """
    grid = f.grid
    if grid.mode == "radial3d":
        raise ValueError("mollify is defined on tensor grids")
    h = grid.spacing
    if eps < 2.0 * h:
        raise ValueError(f"eps={eps} not resolvable: need eps >= 2h = {2*h}")
    reach = int(np.ceil(eps / h))
    offsets = np.arange(-reach, reach + 1) * h
    axes = np.meshgrid(*([offsets] * grid.dimension), indexing="ij")
    r2 = sum(a**2 for a in axes) / eps**2
    kernel = bump_profile(r2)
    kernel /= kernel.sum()
    if grid.mode == "periodic":
        full = np.zeros(grid.shape)
        idx = np.meshgrid(*([np.arange(-reach, reach + 1)] * grid.dimension),
                          indexing="ij")
        full[tuple(i % grid.points_per_axis for i in idx)] = kernel
        conv = np.real(np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(full)))
    else:
        conv = scipy.ndimage.convolve(f.values, kernel, mode="constant", cval=0.0)
    return ScalarField(grid, conv)


@dataclass(frozen=True)
class InitialData:
    u0: ScalarField
    u1: ScalarField
    gamma: float
    norm_u0: float          # ||u0||
    grad_u0: float          # ||grad u0||
    norm_u1: float          # ||u1||
    l1_u1: float            # ||u1||_{1,gamma}
    l1_au0: float           # ||a u0||_{1,gamma}
    norm_au0: float         # ||a u0||
    pair_u1_u0: float       # (u1, u0)
    total_integral: float   # int (a u0 + u1) dx
    int_a_u0_sq: float      # int a |u0|^2 dx


def compute_norms(u0: ScalarField, u1: ScalarField, a: DampingCoefficient,
                  gamma: float = 0.0) -> InitialData:
    grid = u0.grid
    if u1.grid != grid:
        raise ValueError("u0 and u1 live on different grids")
    av = damping_on_grid(a, grid)
    au0 = av * u0.values
    data = InitialData(
        u0=u0,
        u1=u1,
        gamma=gamma,
        norm_u0=np.sqrt(grid.integrate_product(u0.values, u0.values)),
        grad_u0=np.sqrt(grid.grad_dot(u0.values, u0.values)),
        norm_u1=np.sqrt(grid.integrate_product(u1.values, u1.values)),
        l1_u1=grid.integrate_weighted_abs(u1.values, gamma),
        l1_au0=grid.integrate_weighted_abs(au0, gamma),
        norm_au0=np.sqrt(grid.integrate_product(au0, au0)),
        pair_u1_u0=grid.integrate_product(u1.values, u0.values),
        total_integral=grid.integrate(au0 + u1.values),
        int_a_u0_sq=grid.integrate_product(av * u0.values, u0.values),
    )
    if not all(np.isfinite(v) for v in
               (data.norm_u0, data.grad_u0, data.norm_u1, data.l1_u1,
                data.l1_au0, data.norm_au0, data.pair_u1_u0,
                data.total_integral, data.int_a_u0_sq)):
        raise ValueError("non-finite integrand in data norms")
    # discrete Cauchy-Schwarz: int a|u0|^2 <= ||a u0|| * ||u0||
    bridge = data.norm_au0 * data.norm_u0
    if data.int_a_u0_sq > bridge * (1.0 + 1e-12) + 1e-300:
        raise AssertionError("Cauchy-Schwarz bridge violated by quadrature")
    return data


@dataclass(frozen=True)
class SeedConstants:
    E0: float
    I0_sq: float
    I1_sq: float
    I2_sq: float
    I3_sq: float
    I00_sq: float
    epsilon: float
    C_prop21: float

    def as_dict(self) -> dict:
        return {
            "E0": self.E0, "I0_sq": self.I0_sq, "I1_sq": self.I1_sq,
            "I2_sq": self.I2_sq, "I3_sq": self.I3_sq, "I00_sq": self.I00_sq,
            "epsilon": self.epsilon, "C_prop21": self.C_prop21,
        }


def seed_constants(data: InitialData, V0: float, eps: float = None,
                   C_prop21: float = 1.0) -> SeedConstants:
    if eps is None:
        eps = V0 / 2.0
    if not 0.0 < eps < V0:
        raise ValueError(f"epsilon must lie in (0, V0): got {eps}, V0={V0}")
    E0 = 0.5 * (data.norm_u1**2 + data.grad_u0**2)
    I0_sq = data.l1_au0**2 + data.norm_au0**2 + data.l1_u1**2 + data.norm_u1**2
    I1_sq = E0 * (1.0 + 1.0 / V0 + 1.0 / (2.0 * eps)) + 0.5 * data.pair_u1_u0
    if I1_sq < -1e-12 * max(E0, 1.0):
        raise ValueError("data pairing too negative: I1^2 < 0")
    common = (data.pair_u1_u0 + 0.5 * data.int_a_u0_sq
              + 0.5 * C_prop21 * I0_sq + I1_sq / eps)
    I2_sq = E0 + (2.0 / V0) * (E0 + I1_sq) + common
    I3_sq = 2.0 / (V0 - eps) * (common + (E0 + I1_sq) / V0)
    I00_sq = (data.norm_u0**2 + data.grad_u0**2 + data.l1_au0**2
              + data.norm_au0**2 + data.norm_u1**2 + data.l1_u1**2)
    return SeedConstants(E0=E0, I0_sq=I0_sq, I1_sq=I1_sq, I2_sq=I2_sq,
                         I3_sq=I3_sq, I00_sq=I00_sq, epsilon=eps,
                         C_prop21=C_prop21)
