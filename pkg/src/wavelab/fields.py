"""Computational domain, nodal scalar fields, and discrete operators.

Three grid modes on a truncated domain of half-extent L:

* ``box_dirichlet`` -- tensor lattice on [-L, L]^n, Laplacian closed with
  zero ghost values outside the box.
* ``periodic``      -- tensor lattice on [-L, L) with wrap-around.
* ``radial3d``      -- 1-D lattice on r in [0, L] carrying the reduced
  variable v(r) = r*u(r) of a radially symmetric 3-D field; both
  endpoints are pinned to zero (regularity at r=0, Dirichlet truncation
  at r=L).  Integrals carry the 4*pi solid-angle factor and the extra
  r-weight where the integrand is first power in the field, so reported
  quantities approximate the true 3-D ones.

The gradient forms are built on grid edges (forward differences with
zero ghosts on boxes) so that (-laplacian(f), f) == grad_norm_sq(f)
holds to rounding.  Every multiplier identity tracked downstream leans
on that exactness.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

FOUR_PI = 4.0 * np.pi

MODES = ("box_dirichlet", "periodic", "radial3d")


@dataclass(frozen=True)
class Grid:
    dimension: int
    mode: str
    half_extent: float
    points_per_axis: int

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown grid mode {self.mode!r}")
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2, or 3")
        if self.mode == "radial3d" and self.dimension != 3:
            raise ValueError("radial3d grids carry n=3 semantics")
        if not self.half_extent > 0:
            raise ValueError("half_extent must be positive")
        if self.points_per_axis < 8:
            raise ValueError("points_per_axis must be >= 8")

    @property
    def spacing(self) -> float:
        L, N = self.half_extent, self.points_per_axis
        if self.mode == "box_dirichlet":
            return 2.0 * L / (N - 1)
        if self.mode == "periodic":
            return 2.0 * L / N
        return L / (N - 1)

    @property
    def shape(self) -> tuple:
        if self.mode == "radial3d":
            return (self.points_per_axis,)
        return (self.points_per_axis,) * self.dimension

    @property
    def node_count(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def axis(self) -> np.ndarray:
        """Nodal coordinates along one axis (the radial lattice for radial3d)."""
        L, N = self.half_extent, self.points_per_axis
        if self.mode == "box_dirichlet":
            return np.linspace(-L, L, N)
        if self.mode == "periodic":
            return -L + self.spacing * np.arange(N)
        return np.linspace(0.0, L, N)

    def coords(self):
        """Meshgrid coordinate arrays, one per axis."""
        if self.mode == "radial3d":
            return (self.axis,)
        return np.meshgrid(*([self.axis] * self.dimension), indexing="ij")

    @cached_property
    def _radius(self) -> np.ndarray:
        if self.mode == "radial3d":
            return self.axis
        return np.sqrt(sum(c**2 for c in self.coords()))

    def radius(self) -> np.ndarray:
        return self._radius

    # -- array-level quadrature ------------------------------------------

    def integrate_product(self, f: np.ndarray, g: np.ndarray) -> float:
        """Quadrature of f*g dx (L^2 pairing)."""
        if self.mode == "radial3d":
            return FOUR_PI * float(np.trapezoid(f * g, dx=self.spacing))
        return float(np.sum(f * g)) * self.spacing**self.dimension

    def integrate(self, f: np.ndarray) -> float:
        """Quadrature of f dx (first power: radial picks up the r-weight)."""
        if self.mode == "radial3d":
            return FOUR_PI * float(np.trapezoid(self.axis * f, dx=self.spacing))
        return float(np.sum(f)) * self.spacing**self.dimension

    def integrate_weighted_abs(self, f: np.ndarray, gamma: float) -> float:
        """Quadrature of (1+|x|)^gamma * |f| dx."""
        w = (1.0 + self.radius()) ** gamma if gamma != 0.0 else 1.0
        if self.mode == "radial3d":
            return FOUR_PI * float(
                np.trapezoid(w * self.axis * np.abs(f), dx=self.spacing))
        return float(np.sum(w * np.abs(f))) * self.spacing**self.dimension

    def grad_dot(self, f: np.ndarray, g: np.ndarray) -> float:
        """Edge-based gradient pairing; grad_dot(f, f) is the grad norm squared."""
        h = self.spacing
        if self.mode == "radial3d":
            return FOUR_PI * float(np.sum(np.diff(f) * np.diff(g))) / h
        total = 0.0
        for ax in range(self.dimension):
            if self.mode == "periodic":
                df = np.roll(f, -1, axis=ax) - f
                dg = np.roll(g, -1, axis=ax) - g
            else:
                df = np.diff(f, axis=ax, prepend=0.0, append=0.0)
                dg = np.diff(g, axis=ax, prepend=0.0, append=0.0)
            total += float(np.sum(df * dg))
        return total * h ** (self.dimension - 2)

    def laplacian_array(self, f: np.ndarray) -> np.ndarray:
        if self.mode == "radial3d":
            raise ValueError("radial3d grids never form the Laplacian explicitly")
        h2 = self.spacing**2
        out = np.zeros_like(f)
        for ax in range(self.dimension):
            if self.mode == "periodic":
                out += (np.roll(f, 1, axis=ax) + np.roll(f, -1, axis=ax)) - 2.0 * f
            else:
                out += (_shift(f, -1, ax) + _shift(f, 1, ax)) - 2.0 * f
        return out / h2

    def boundary_mask(self, shell_width: float) -> np.ndarray:
        if self.mode == "periodic":
            raise ValueError("periodic grids have no boundary")
        if self.mode == "radial3d":
            return self.axis >= self.half_extent - shell_width
        dist = self.half_extent - np.max(
            np.stack([np.abs(c) for c in self.coords()]), axis=0)
        return dist <= shell_width


def _shift(f, offset, axis):
    out = np.zeros_like(f)
    src = [slice(None)] * f.ndim
    dst = [slice(None)] * f.ndim
    if offset == 1:
        src[axis] = slice(1, None)
        dst[axis] = slice(None, -1)
    else:
        src[axis] = slice(None, -1)
        dst[axis] = slice(1, None)
    out[tuple(dst)] = f[tuple(src)]
    return out


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError("field shape does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())


def laplacian(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid, f.grid.laplacian_array(f.values))


def inner_product(f: ScalarField, g: ScalarField) -> float:
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return f.grid.integrate_product(f.values, g.values)


def grad_norm_sq(f: ScalarField) -> float:
    return f.grid.grad_dot(f.values, f.values)


def boundary_activity(f: ScalarField, shell_width: float) -> float:
    """Max |f| within shell_width of the boundary (truncation monitor)."""
    mask = f.grid.boundary_mask(shell_width)
    if not mask.any():
        return 0.0
    return float(np.abs(f.values[mask]).max())


def field_to_csv(f: ScalarField, path) -> None:
    grid = f.grid
    if grid.mode == "radial3d":
        header = "r,value"
        cols = [grid.axis, f.values]
    else:
        header = ",".join(f"x{i+1}" for i in range(grid.dimension)) + ",value"
        cols = [c.ravel() for c in grid.coords()] + [f.values.ravel()]
    data = np.column_stack(cols)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in data:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
