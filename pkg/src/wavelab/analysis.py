"""Decay-rate fits, bound certificates, and cutoff-convergence studies."""

from dataclasses import dataclass

import numpy as np

from .functionals import RunHistory


@dataclass(frozen=True)
class DecayFit:
    t_lo: float
    t_hi: float
    slope: float
    intercept: float
    r_squared: float
    samples: int


def fit_decay_series(t: np.ndarray, q: np.ndarray, window) -> DecayFit:
    """Least-squares line of log(q) against log(1+t) on the window."""
    t_lo, t_hi = float(window[0]), float(window[1])
    if not t_hi > t_lo or t_lo < 1.0:
        raise ValueError("window must satisfy t_hi > t_lo >= 1")
    mask = (t >= t_lo) & (t <= t_hi)
    if mask.sum() < 10:
        raise ValueError(f"window holds {int(mask.sum())} records; need >= 10")
    qs = q[mask]
    if np.any(qs <= 0.0):
        raise ValueError("quantity must be positive on the fit window")
    x = np.log1p(t[mask])
    y = np.log(qs)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(t_lo=t_lo, t_hi=t_hi, slope=float(slope),
                    intercept=float(intercept), r_squared=r2,
                    samples=int(mask.sum()))


_QUANTITIES = {"energy": "energy", "l2": "l2_sq"}


def fit_decay(history: RunHistory, quantity: str, window) -> DecayFit:
    if quantity not in _QUANTITIES:
        raise ValueError(f"quantity must be one of {sorted(_QUANTITIES)}")
    return fit_decay_series(history.times,
                            history.column(_QUANTITIES[quantity]), window)


@dataclass(frozen=True)
class BoundCertificate:
    quantity: str
    sup_ratio: float
    t_at_sup: float
    horizon: float
    passed: bool
    times: np.ndarray
    ratios: np.ndarray


def bound_certificate(history: RunHistory, quantity: str) -> BoundCertificate:
    """Weighted-norm ratio curve against the matching seed constant.

    energy: (1+t)^2 E(t) / I2^2;  l2: (1+t) ||u||^2 / I3^2.  Passes when
    the sup over [1, T] is attained no later than T/2 (the curve has
    stopped growing, the desk-scale surrogate for boundedness).
    """
    if quantity not in _QUANTITIES:
        raise ValueError(f"quantity must be one of {sorted(_QUANTITIES)}")
    seeds = history.seeds
    if seeds is None:
        raise ValueError("bound certificates need seed constants")
    t = history.times
    values = history.column(_QUANTITIES[quantity])
    denom = seeds.I2_sq if quantity == "energy" else seeds.I3_sq
    weight = (1.0 + t) ** 2 if quantity == "energy" else (1.0 + t)
    if denom <= 0.0:
        if np.max(np.abs(values), initial=0.0) > 0.0:
            raise ValueError(f"nonpositive bound constant for {quantity}")
        ratios = np.zeros_like(values)
    else:
        ratios = weight * values / denom
    horizon = float(t[-1]) if len(t) else 0.0
    window = t >= 1.0
    if not window.any():
        window = np.ones_like(t, dtype=bool)
    masked = np.where(window, ratios, -np.inf)
    i = int(np.argmax(masked))
    sup_ratio = float(ratios[i])
    t_at_sup = float(t[i])
    return BoundCertificate(
        quantity=quantity, sup_ratio=sup_ratio, t_at_sup=t_at_sup,
        horizon=horizon, passed=bool(t_at_sup <= horizon / 2.0),
        times=t, ratios=ratios,
    )


def m_convergence_study(histories: dict, reference: RunHistory) -> list:
    """sup-in-time L2 distance to the reference run, per cutoff radius.

    Rows are {"m": m, "sup_error": sup_t ||u_m - u_ref|| / max_t ||u_ref||},
    nonincreasing in m and exactly zero once the cutoff covers the grid.
    """
    if reference.snapshots is None:
        raise ValueError("m-convergence needs stored snapshots")
    grid = reference.grid
    ref_times = [t for t, _ in reference.snapshots]
    ref_norm = max(
        np.sqrt(grid.integrate_product(u, u)) for _, u in reference.snapshots)
    if ref_norm == 0.0:
        ref_norm = 1.0
    rows = []
    for m in sorted(histories):
        hist = histories[m]
        if hist.grid != grid:
            raise ValueError("m-sweep members must share one grid")
        if hist.snapshots is None or [t for t, _ in hist.snapshots] != ref_times:
            raise ValueError("m-sweep members must share record times")
        sup_err = max(
            np.sqrt(grid.integrate_product(u - uref, u - uref))
            for (_, u), (_, uref) in zip(hist.snapshots, reference.snapshots))
        rows.append({"m": m, "sup_error": sup_err / ref_norm})
    return rows


def uniformity_check(sup_ratios, tolerance: float = 1.25) -> dict:
    """Uniform-boundedness surrogate across a cutoff sweep: max/min <= tol."""
    values = list(sup_ratios.values()) if isinstance(sup_ratios, dict) \
        else list(sup_ratios)
    if len(values) < 3:
        raise ValueError("uniformity check needs at least 3 sweep members")
    hi, lo = max(values), min(values)
    if hi == 0.0:
        return {"passed": True, "max": 0.0, "min": 0.0, "spread": 1.0,
                "tolerance": tolerance}
    spread = hi / lo if lo > 0 else float("inf")
    return {"passed": bool(spread <= tolerance), "max": hi, "min": lo,
            "spread": spread, "tolerance": tolerance}
