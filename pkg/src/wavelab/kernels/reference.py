"""Pure-numpy fallback for the compiled step kernels.

Expression grouping mirrors ``_core.pyx`` term by term so the two
backends produce bit-identical updates.
"""

import numpy as np


def _finish(u_prev, u_curr, out, q, had, lap):
    np.copyto(out, ((2.0 * u_curr - u_prev) + q * lap + had * u_prev) / (1.0 + had))


def _shift_zero(u, offset, axis):
    # neighbor lookup with zero ghost values outside the box
    out = np.zeros_like(u)
    src = [slice(None)] * u.ndim
    dst = [slice(None)] * u.ndim
    if offset == 1:
        src[axis] = slice(1, None)
        dst[axis] = slice(None, -1)
    else:
        src[axis] = slice(None, -1)
        dst[axis] = slice(1, None)
    out[tuple(dst)] = u[tuple(src)]
    return out


def step_periodic_1d(u_prev, u_curr, out, q, had):
    lap = (np.roll(u_curr, 1) + np.roll(u_curr, -1)) - 2.0 * u_curr
    _finish(u_prev, u_curr, out, q, had, lap)


def step_box_1d(u_prev, u_curr, out, q, had):
    lap = (_shift_zero(u_curr, -1, 0) + _shift_zero(u_curr, 1, 0)) - 2.0 * u_curr
    _finish(u_prev, u_curr, out, q, had, lap)


def step_radial_1d(u_prev, u_curr, out, q, had):
    lap = (_shift_zero(u_curr, -1, 0) + _shift_zero(u_curr, 1, 0)) - 2.0 * u_curr
    _finish(u_prev, u_curr, out, q, had, lap)
    out[0] = 0.0
    out[-1] = 0.0


def step_periodic_2d(u_prev, u_curr, out, q, had):
    lap = ((np.roll(u_curr, 1, 0) + np.roll(u_curr, -1, 0)) - 2.0 * u_curr) \
        + ((np.roll(u_curr, 1, 1) + np.roll(u_curr, -1, 1)) - 2.0 * u_curr)
    _finish(u_prev, u_curr, out, q, had, lap)


def step_box_2d(u_prev, u_curr, out, q, had):
    lap = ((_shift_zero(u_curr, -1, 0) + _shift_zero(u_curr, 1, 0)) - 2.0 * u_curr) \
        + ((_shift_zero(u_curr, -1, 1) + _shift_zero(u_curr, 1, 1)) - 2.0 * u_curr)
    _finish(u_prev, u_curr, out, q, had, lap)


def step_periodic_3d(u_prev, u_curr, out, q, had):
    lap = ((np.roll(u_curr, 1, 0) + np.roll(u_curr, -1, 0)) - 2.0 * u_curr) \
        + ((np.roll(u_curr, 1, 1) + np.roll(u_curr, -1, 1)) - 2.0 * u_curr) \
        + ((np.roll(u_curr, 1, 2) + np.roll(u_curr, -1, 2)) - 2.0 * u_curr)
    _finish(u_prev, u_curr, out, q, had, lap)


def step_box_3d(u_prev, u_curr, out, q, had):
    lap = (((_shift_zero(u_curr, -1, 0) + _shift_zero(u_curr, 1, 0)) - 2.0 * u_curr)
           + ((_shift_zero(u_curr, -1, 1) + _shift_zero(u_curr, 1, 1)) - 2.0 * u_curr)) \
        + ((_shift_zero(u_curr, -1, 2) + _shift_zero(u_curr, 1, 2)) - 2.0 * u_curr)
    _finish(u_prev, u_curr, out, q, had, lap)
