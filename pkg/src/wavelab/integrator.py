"""Leapfrog time stepping that is stable under arbitrarily large damping.

The damping term is discretized implicitly at the midpoint,

    (u_next - 2u + u_prev)/dt^2 = lap_h(u) - a(x)*(u_next - u_prev)/(2 dt),

so the update divides by the diagonal factor 1 + a*dt/2 >= 1: the step
is well posed for any positive a and the time-step restriction stays the
undamped CFL bound dt <= h/sqrt(n).  Multiplying the scheme by the
midpoint velocity gives an exact discrete dissipation identity for the
staggered energy

    E_{k+1/2} = 0.5*||(u_{k+1}-u_k)/dt||^2 + 0.5*(grad u_{k+1}, grad u_k),

which run_until asserts per step; any increase beyond rounding aborts.

The Fourier-mode oracle (exact_mode_solution) solves the constant-
coefficient modal ODE y'' + V0 y' + k^2 y = 0 in closed form and is the
validation target for the periodic single-mode runs.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import damping_on_grid
from .fields import Grid, ScalarField
from .functionals import Recorder, RunHistory
from .initial_data import InitialData


class BlowUpError(RuntimeError):
    def __init__(self, step_index, norm, bound):
        super().__init__(
            f"solution norm {norm:.3e} exceeded guard {bound:.3e} "
            f"at step {step_index}: misconfigured run")
        self.step_index = step_index


class DissipationError(RuntimeError):
    pass


@dataclass
class CflReport:
    ok: bool
    dt: float
    dt_max: float


def cfl_check(grid: Grid, dt: float) -> CflReport:
    """Undamped leapfrog bound dt <= h/sqrt(n); damping never tightens it."""
    dt_max = grid.spacing / np.sqrt(grid.dimension)
    return CflReport(ok=dt <= dt_max * (1.0 + 1e-12), dt=dt, dt_max=dt_max)


def _scheme_laplacian(grid: Grid, arr: np.ndarray) -> np.ndarray:
    if grid.mode != "radial3d":
        return grid.laplacian_array(arr)
    out = np.zeros_like(arr)
    out[1:-1] = (arr[2:] - 2.0 * arr[1:-1] + arr[:-2]) / grid.spacing**2
    return out


@dataclass
class WaveState:
    grid: Grid
    u_curr: np.ndarray
    u_prev: np.ndarray
    w_accum: np.ndarray
    damping_values: np.ndarray
    damping: object
    dt: float
    t: float = 0.0
    k: int = 0

    def __post_init__(self):
        mode = self.grid.mode
        dim = 1 if mode == "radial3d" else self.grid.dimension
        self._kernel = kernels.STEP_TABLE[(mode, dim)]
        self._had = self.damping_values * (self.dt / 2.0)
        self._q = (self.dt / self.grid.spacing) ** 2
        self._scratch = np.empty_like(self.u_curr)

    def field(self) -> ScalarField:
        return ScalarField(self.grid, self.u_curr)


def init_state(data: InitialData, damping, dt: float) -> WaveState:
    """Start from (u0, u1) with the second-order ghost level

    u_prev = u0 - dt*u1 + (dt^2/2) * (lap_h(u0) - a*u1).
    """
    grid = data.u0.grid
    if not dt > 0:
        raise ValueError("dt must be positive")
    rep = cfl_check(grid, dt)
    if not rep.ok:
        raise ValueError(f"CFL violation: dt={dt} > dt_max={rep.dt_max}")
    a = damping_on_grid(damping, grid)
    u0 = data.u0.values
    u1 = data.u1.values
    u_prev = u0 - dt * u1 + (dt**2 / 2.0) * (_scheme_laplacian(grid, u0) - a * u1)
    if grid.mode == "radial3d":
        u_prev[0] = 0.0
        u_prev[-1] = 0.0
    return WaveState(
        grid=grid,
        u_curr=u0.copy(),
        u_prev=u_prev,
        w_accum=np.zeros_like(u0),
        damping_values=a,
        damping=damping,
        dt=dt,
    )


def _compute_next(state: WaveState) -> np.ndarray:
    state._kernel(state.u_prev, state.u_curr, state._scratch,
                  state._q, state._had)
    return state._scratch


def _rotate(state: WaveState) -> None:
    # scratch holds u_next; the old u_prev buffer becomes the next scratch
    state.w_accum += (state.dt / 2.0) * (state.u_curr + state._scratch)
    state.u_prev, state.u_curr, state._scratch = \
        state.u_curr, state._scratch, state.u_prev
    state.k += 1
    state.t = state.k * state.dt


def step(state: WaveState) -> WaveState:
    """Advance one level in place (trapezoid accumulation of W included)."""
    u_next = _compute_next(state)
    if not np.all(np.isfinite(u_next)):
        raise FloatingPointError(f"non-finite values at step {state.k + 1}")
    _rotate(state)
    return state


def total_energy(state: WaveState) -> float:
    """0.5*||centered velocity||^2 + 0.5*||grad u||^2 via a trial step."""
    u_next = _compute_next(state)
    vel = (u_next - state.u_prev) / (2.0 * state.dt)
    grid = state.grid
    return 0.5 * grid.integrate_product(vel, vel) \
        + 0.5 * grid.grad_dot(state.u_curr, state.u_curr)


def exact_mode_solution(k_abs: float, V0: float, t: float,
                        u0_hat=1.0, u1_hat=0.0) -> complex:
    """Closed-form solution of y'' + V0*y' + k^2*y = 0 at time t."""
    if k_abs < 0:
        raise ValueError("k_abs must be nonnegative")
    y0 = complex(u0_hat)
    y1 = complex(u1_hat)
    disc = V0 * V0 - 4.0 * k_abs * k_abs
    if disc > 0:
        s = disc**0.5
        rp = (-V0 + s) / 2.0
        rm = (-V0 - s) / 2.0
        A = (y1 - rm * y0) / (rp - rm)
        return A * cmath.exp(rp * t) + (y0 - A) * cmath.exp(rm * t)
    if disc == 0:
        r = -V0 / 2.0
        return (y0 + (y1 - r * y0) * t) * cmath.exp(r * t)
    om = (-disc) ** 0.5 / 2.0
    decay = cmath.exp(-V0 * t / 2.0)
    return decay * (y0 * cmath.cos(om * t)
                    + (y1 + V0 * y0 / 2.0) / om * cmath.sin(om * t))


def run_until(state: WaveState, T: float, record_every: int = 1,
              recorder: Recorder = None, keep_snapshots: bool = True,
              blowup_guard: float = None,
              check_dissipation: bool = True) -> RunHistory:
    """Iterate the scheme to time T, recording every record_every steps.

    Records land at t_k = k*dt using the centered velocity; the final
    level K = round(T/dt) is always recorded.  The staggered energy is
    monitored at every step.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if record_every * state.dt > 0.1 * (1.0 + 1e-12):
        raise ValueError(
            f"record spacing {record_every * state.dt:.4g} too coarse: "
            "record_every*dt must be <= 0.1")
    if recorder is None:
        recorder = Recorder(state.grid, state.damping_values)
    grid = state.grid
    dt = state.dt
    n_steps = int(round(T / dt))
    snapshots = [] if keep_snapshots else None
    stag_prev = None
    stag_init = None
    max_rel_increase = 0.0
    for k in range(n_steps + 1):
        u_next = _compute_next(state)
        if check_dissipation:
            dvel = (u_next - state.u_curr) / dt
            stag = 0.5 * grid.integrate_product(dvel, dvel) \
                + 0.5 * grid.grad_dot(u_next, state.u_curr)
            if stag_init is None:
                stag_init = stag
            if stag_prev is not None:
                scale = max(abs(stag_init), 1e-300)
                max_rel_increase = max(max_rel_increase,
                                       (stag - stag_prev) / scale)
            stag_prev = stag
        if k % record_every == 0 or k == n_steps:
            if not np.all(np.isfinite(u_next)):
                raise FloatingPointError(f"non-finite values at step {k}")
            rec = recorder.record(state.t, state.u_prev, state.u_curr,
                                  u_next, state.w_accum, dt)
            if blowup_guard is not None and rec.l2_sq > blowup_guard**2:
                raise BlowUpError(k, np.sqrt(rec.l2_sq), blowup_guard)
            if keep_snapshots:
                snapshots.append((state.t, state.u_curr.copy()))
        if k == n_steps:
            break
        _rotate(state)
    return recorder.history(
        snapshots=snapshots,
        max_energy_increase=max_rel_increase,
        initial_staggered_energy=stag_init if stag_init is not None else 0.0,
    )
