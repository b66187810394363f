"""Damping coefficients a(x) and their bounded cutoff approximations.

Coefficient families are a closed enumeration (constant, polynomial,
exponential) so that the uniform lower bound V0 is checkable and values
are exactly reproducible in tests.  All families are radial: evaluation
takes the radius ``r = |x|``.

The cutoff coefficient equals a(x) inside radius m, the floor V0 outside
radius m+1, and blends linearly across the unit annulus in between, so
``V0 <= a_m <= a`` everywhere, a_m is continuous, and a_m(x) -> a(x)
pointwise as m grows (exact once m >= |x|).
"""

from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("constant", "polynomial", "exponential")


@dataclass(frozen=True)
class DampingCoefficient:
    """Unbounded (or constant) damping coefficient with floor V0 > 0."""

    family: str
    V0: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown damping family {self.family!r}")
        if not self.V0 > 0:
            raise ValueError("V0 must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")

    def eval_radius(self, r):
        """Evaluate a at radius r (scalar or ndarray)."""
        r = np.asarray(r, dtype=float)
        if self.family == "constant":
            return np.full_like(r, self.V0)
        if self.family == "polynomial":
            return (1.0 + r**2) ** (self.alpha / 2.0)
        return np.exp(r)

    def __call__(self, x):
        """Evaluate a at a point (scalar in 1-D or coordinate sequence)."""
        return self.eval_radius(_radius(x))


@dataclass(frozen=True)
class CutoffDamping:
    """Bounded approximation of ``base``: equal inside radius m, V0 outside m+1."""

    base: DampingCoefficient
    m: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("cutoff radius m must be positive")

    @property
    def V0(self) -> float:
        return self.base.V0

    def eval_radius(self, r):
        r = np.asarray(r, dtype=float)
        a = self.base.eval_radius(r)
        v0 = self.base.V0
        ramp = np.clip((self.m + 1.0) - r, 0.0, 1.0)
        return np.where(r <= self.m, a, v0 + ramp * (a - v0))

    def __call__(self, x):
        return self.eval_radius(_radius(x))


def _radius(x):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return np.abs(arr)
    return np.sqrt(np.sum(arr**2, axis=-1))


def eval_damping(coeff: DampingCoefficient, x) -> float:
    return float(coeff(x))


def eval_cutoff(cd: CutoffDamping, x) -> float:
    return float(cd(x))


def damping_on_grid(coeff, grid) -> np.ndarray:
    """Nodal coefficient values (works for both plain and cutoff coefficients)."""
    return coeff.eval_radius(grid.radius())


@dataclass
class AssumptionReport:
    passed: bool
    min_value: float
    V0: float
    violations: list = field(default_factory=list)


def verify_assumption_A(coeff: DampingCoefficient, grid,
                        max_listed: int = 20) -> AssumptionReport:
    """Check the declared floor: min over grid nodes of a >= V0*(1 - 1e-12)."""
    values = damping_on_grid(coeff, grid)
    floor = coeff.V0 * (1.0 - 1e-12)
    bad = np.argwhere(values < floor)
    violations = []
    if bad.size:
        radii = grid.radius()
        for idx in bad[:max_listed]:
            key = tuple(int(i) for i in idx)
            violations.append({"index": key, "radius": float(radii[key]),
                               "value": float(values[key])})
    return AssumptionReport(
        passed=bad.size == 0,
        min_value=float(values.min()),
        V0=coeff.V0,
        violations=violations,
    )


def cutoff_pointwise_convergence(coeff: DampingCoefficient, xs, ms):
    """Table of |a_m(x) - a(x)| for each point in xs and each cutoff radius in ms.

    ms must be increasing; for fixed x the error column is nonincreasing
    and exactly zero once m >= |x|.
    """
    ms = list(ms)
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("ms must be strictly increasing")
    rows = []
    for x in xs:
        r = float(_radius(x))
        exact = float(coeff.eval_radius(r))
        errors = [abs(float(CutoffDamping(coeff, m).eval_radius(r)) - exact)
                  for m in ms]
        rows.append({"x": x, "radius": r, "a": exact, "errors": errors})
    return {"ms": ms, "rows": rows}
