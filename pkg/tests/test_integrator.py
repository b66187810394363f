import cmath

import numpy as np
import pytest

from wavelab.coefficients import CutoffDamping, DampingCoefficient
from wavelab.fields import Grid, ScalarField
from wavelab.initial_data import compute_norms, make_gaussian, make_mode, zero_field
from wavelab.integrator import (
    BlowUpError,
    cfl_check,
    exact_mode_solution,
    init_state,
    run_until,
    step,
    total_energy,
)

CONST1 = DampingCoefficient("constant", V0=1.0)


def _data(grid, u0, u1, a=CONST1):
    return compute_norms(u0, u1, a)


def test_cfl_1d():
    grid = Grid(1, "box_dirichlet", 8.0, 161)  # h = 0.1
    rep = cfl_check(grid, 0.05)
    assert rep.ok and rep.dt_max == pytest.approx(0.1, rel=1e-14)
    assert not cfl_check(grid, 0.11).ok


def test_cfl_2d():
    grid = Grid(2, "box_dirichlet", 8.0, 161)
    assert cfl_check(grid, 0.0).ok  # trivially stable
    assert cfl_check(grid, 0.1).dt_max == pytest.approx(0.1 / np.sqrt(2.0),
                                                        rel=1e-14)


def test_init_zero_data(line_box):
    st = init_state(_data(line_box, zero_field(line_box),
                          zero_field(line_box)), CONST1, dt=0.05)
    assert np.all(st.u_curr == 0.0)
    assert np.all(st.u_prev == 0.0)
    assert np.all(st.w_accum == 0.0)
    assert st.t == 0.0 and st.k == 0


def test_init_stationary_start(line_periodic):
    # constant u0 on a periodic grid: lap u0 = 0 and u1 = 0 -> u_prev == u0
    u0 = ScalarField(line_periodic, np.full(line_periodic.shape, 2.0))
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    np.testing.assert_array_equal(st.u_prev, st.u_curr)


def test_init_velocity_only_ghost_formula(line_periodic):
    # u0 = 0: u_prev = -dt*g - (dt^2/2) a g exactly
    g = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    a = DampingCoefficient("constant", V0=2.0)
    dt = 0.05
    st = init_state(_data(line_periodic, zero_field(line_periodic), g, a),
                    a, dt=dt)
    expected = -dt * g.values - (dt**2 / 2.0) * 2.0 * g.values
    np.testing.assert_allclose(st.u_prev, expected, rtol=1e-14)


def test_init_rejects_cfl_violation(line_box):
    with pytest.raises(ValueError):
        init_state(_data(line_box, zero_field(line_box),
                         zero_field(line_box)), CONST1, dt=1.0)


def test_step_zero_state(line_box):
    st = init_state(_data(line_box, zero_field(line_box),
                          zero_field(line_box)), CONST1, dt=0.05)
    step(step(st))
    assert np.all(st.u_curr == 0.0)
    assert st.k == 2
    assert st.t == pytest.approx(0.1)


def test_step_huge_damping_freezes_motion(line_periodic, rng):
    # a -> infinity with u_prev == u_curr: the update leaves u unchanged
    big = DampingCoefficient("constant", V0=1e12)
    vals = rng.normal(size=line_periodic.shape)
    u0 = ScalarField(line_periodic, vals)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic), big),
                    big, dt=0.05)
    # force equal levels, then step
    st.u_prev = st.u_curr.copy()
    step(st)
    np.testing.assert_allclose(st.u_curr, vals, atol=1e-9)


def test_w_accumulator_is_exact_trapezoid(line_periodic, rng):
    # parallel accumulation with the same increments must match bitwise
    u0 = ScalarField(line_periodic, rng.normal(size=line_periodic.shape))
    u1 = ScalarField(line_periodic, rng.normal(size=line_periodic.shape))
    st = init_state(_data(line_periodic, u0, u1), CONST1, dt=0.05)
    w_manual = np.zeros(line_periodic.shape)
    for _ in range(5):
        u_before = st.u_curr.copy()
        step(st)
        w_manual += (st.dt / 2.0) * (u_before + st.u_curr)
        np.testing.assert_array_equal(st.w_accum, w_manual)


def test_radial_endpoints_stay_pinned(radial):
    u0 = make_gaussian(radial, 1.0, 0.0, 1.0)
    u1 = make_gaussian(radial, 0.5, 0.0, 1.5)
    a = DampingCoefficient("exponential", V0=1.0)
    st = init_state(_data(radial, u0, u1, a), a, dt=radial.spacing / 2.0)
    for _ in range(50):
        step(st)
    assert st.u_curr[0] == 0.0 and st.u_curr[-1] == 0.0
    assert st.u_prev[0] == 0.0 and st.u_prev[-1] == 0.0


@pytest.mark.parametrize("k_abs,V0,t,expected", [
    (1.0, 0.0, np.pi, -1.0),                      # pure cosine
    (1.0, 2.0, 1.0, 2.0 * np.exp(-1.0)),          # critical damping
])
def test_exact_mode_values(k_abs, V0, t, expected):
    assert exact_mode_solution(k_abs, V0, t) == pytest.approx(expected,
                                                              rel=1e-14)


def test_exact_mode_zero_data():
    for t in (0.0, 1.0, 10.0):
        assert exact_mode_solution(1.0, 2.0, t, 0.0, 0.0) == 0.0


def test_exact_mode_overdamped_limit():
    # k=0: y' ' + V0 y' = 0 -> y = y0 + y1 (1 - e^{-V0 t})/V0
    V0, t = 2.0, 1.3
    got = exact_mode_solution(0.0, V0, t, 1.0, 1.0)
    expected = 1.0 + (1.0 - cmath.exp(-V0 * t)) / V0
    assert got == pytest.approx(expected, rel=1e-12)


def _oracle_error(dt, N=64, T=1.0):
    grid = Grid(1, "periodic", np.pi, N)
    a = DampingCoefficient("constant", V0=2.0)
    u0 = make_mode(grid, 1, 1.0)
    st = init_state(_data(grid, u0, zero_field(grid), a), a, dt=dt)
    n = int(round(T / dt))
    for _ in range(n):
        step(st)
    kh = np.sqrt((2.0 - 2.0 * np.cos(grid.spacing)) / grid.spacing**2)
    y = exact_mode_solution(kh, 2.0, T).real
    exact = y * np.cos(grid.axis)
    return np.linalg.norm(st.u_curr - exact) / np.linalg.norm(exact)


def test_second_order_against_mode_oracle():
    e1 = _oracle_error(2e-3)
    e2 = _oracle_error(1e-3)
    assert 3.5 <= e1 / e2 <= 4.5


def test_unconditional_stability_huge_exponential_damping():
    # 1-D box, a = e^{|x|} up to ~1.6e5, at the undamped CFL step
    grid = Grid(1, "box_dirichlet", 12.0, 241)
    a = DampingCoefficient("exponential", V0=1.0)
    u0 = make_gaussian(grid, 1.0, 0.0, 1.0)
    data = _data(grid, u0, zero_field(grid), a)
    st = init_state(data, a, dt=grid.spacing)
    hist = run_until(st, T=5.0, record_every=1, keep_snapshots=False)
    assert np.all(np.isfinite(st.u_curr))
    assert hist.max_energy_increase <= 1e-12


def test_run_until_t_zero(line_periodic):
    u0 = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    hist = run_until(st, T=0.0)
    assert len(hist.records) == 1
    assert hist.records[0].t == 0.0


def test_run_until_single_step(line_periodic):
    u0 = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    hist = run_until(st, T=0.05, record_every=1)
    assert len(hist.records) == 2


def test_run_until_zero_data(line_periodic):
    st = init_state(_data(line_periodic, zero_field(line_periodic),
                          zero_field(line_periodic)), CONST1, dt=0.05)
    hist = run_until(st, T=1.0, record_every=1)
    assert all(r.energy == 0.0 for r in hist.records)


def test_run_until_rejects_coarse_records(line_periodic):
    u0 = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    with pytest.raises(ValueError):
        run_until(st, T=1.0, record_every=3)  # 0.15 > 0.1


def test_blowup_guard_raises(line_periodic):
    u0 = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    with pytest.raises(BlowUpError):
        run_until(st, T=1.0, record_every=1, blowup_guard=1e-6)


def test_total_energy_matches_definition(line_periodic):
    u0 = make_gaussian(line_periodic, 1.0, 0.0, 1.0)
    st = init_state(_data(line_periodic, u0, zero_field(line_periodic)),
                    CONST1, dt=0.05)
    e = total_energy(st)
    hist = run_until(st, T=0.0)
    assert e == pytest.approx(hist.records[0].energy, rel=1e-14)


def test_cutoff_coefficient_accepted(line_box):
    base = DampingCoefficient("exponential", V0=1.0)
    cd = CutoffDamping(base, m=4.0)
    u0 = make_gaussian(line_box, 1.0, 0.0, 1.0)
    st = init_state(_data(line_box, u0, zero_field(line_box), base), cd,
                    dt=0.05)
    step(st)
    assert np.all(np.isfinite(st.u_curr))
    assert st.damping_values.max() <= np.exp(5.0)  # capped by the cutoff
