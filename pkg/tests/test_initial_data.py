import numpy as np
import pytest
from scipy.integrate import quad

from wavelab.coefficients import DampingCoefficient
from wavelab.fields import Grid, ScalarField, inner_product
from wavelab.initial_data import (
    InitialData,
    compute_norms,
    make_bump,
    make_gaussian,
    make_mode,
    make_ricker,
    mollify,
    seed_constants,
    zero_field,
)

E_INV = 0.36787944117144233  # exp(-1)


def test_gaussian_zero_amplitude(line_box):
    f = make_gaussian(line_box, amplitude=0.0)
    assert np.all(f.values == 0.0)


def test_gaussian_peak_value(line_box):
    f = make_gaussian(line_box, amplitude=1.0, center=0.0, width=1.0)
    assert f.values.max() == 1.0


def test_gaussian_l2_oracle():
    grid = Grid(1, "box_dirichlet", 8.0, 3201)
    f = make_gaussian(grid, 1.0, 0.0, 1.0)
    oracle = quad(lambda x: np.exp(-x * x), -8, 8)[0]
    assert inner_product(f, f) == pytest.approx(oracle, abs=1e-6)


def test_gaussian_rejects_bad_width(line_box):
    with pytest.raises(ValueError):
        make_gaussian(line_box, 1.0, 0.0, width=0.0)


def test_bump_support_and_center(line_box):
    f = make_bump(line_box, radius=3.0)
    x = line_box.axis
    assert f.values[np.abs(x) >= 3.0].max() == 0.0
    assert f.values[np.argmin(np.abs(x))] == pytest.approx(E_INV, rel=1e-15)
    # well outside the support
    assert f.values[np.abs(x) >= 6.0].max() == 0.0


def test_bump_on_radial_is_reduced(radial):
    f = make_bump(radial, radius=3.0)
    assert f.values[0] == 0.0
    assert f.values[-1] == 0.0
    r = radial.axis
    inside = (r > 0) & (r < 3.0)
    # stored field is r * u(r)
    assert np.all(f.values[inside] > 0.0)


def test_mollify_preserves_constants(line_periodic):
    f = ScalarField(line_periodic, np.ones(line_periodic.shape))
    out = mollify(f, eps=0.5)
    np.testing.assert_allclose(out.values, 1.0, rtol=1e-12)


def test_mollify_zero(line_periodic):
    out = mollify(zero_field(line_periodic), eps=0.5)
    assert np.all(out.values == 0.0)


def test_mollify_is_l2_contraction(line_periodic):
    vals = np.zeros(line_periodic.shape)
    vals[10] = 1.0
    f = ScalarField(line_periodic, vals)
    out = mollify(f, eps=0.7)
    assert inner_product(out, out) <= inner_product(f, f)
    # direct-convolution cross-check: smoothing a spike spreads it
    assert 0 < out.values.max() < 1.0


def test_mollify_preserves_mean_on_periodic(line_periodic, rng):
    f = ScalarField(line_periodic, rng.normal(size=line_periodic.shape))
    out = mollify(f, eps=0.6)
    assert np.sum(out.values) == pytest.approx(np.sum(f.values), rel=1e-12)


def test_mollify_rejects_unresolvable_eps(line_periodic):
    with pytest.raises(ValueError):
        mollify(zero_field(line_periodic), eps=0.5 * line_periodic.spacing)


def test_mollify_box_contraction(line_box, rng):
    f = ScalarField(line_box, rng.normal(size=line_box.shape))
    out = mollify(f, eps=0.5)
    assert inner_product(out, out) <= inner_product(f, f) * (1 + 1e-12)


def test_ricker_mean_zero_1d(line_box):
    # sigma must leave the tail inside the box for the balance to survive
    # truncation: at sigma=1 the tail beyond |x|=8 is ~1e-13
    f = make_ricker(line_box, amplitude=1.0, sigma=1.0)
    assert abs(line_box.integrate(f.values)) < 1e-10


def test_ricker_mean_zero_2d():
    grid = Grid(2, "box_dirichlet", 12.0, 97)
    f = make_ricker(grid, amplitude=2.0, sigma=1.5)
    assert abs(grid.integrate(f.values)) < 1e-10


def test_mode_requires_periodic(line_box):
    with pytest.raises(ValueError):
        make_mode(line_box, 1, 1.0)


def test_compute_norms_zero_data(line_box):
    a = DampingCoefficient("constant", V0=1.0)
    data = compute_norms(zero_field(line_box), zero_field(line_box), a)
    assert data.norm_u0 == data.norm_u1 == data.l1_au0 == 0.0
    assert data.pair_u1_u0 == data.total_integral == 0.0


def test_compute_norms_l1_exponential_profile():
    grid = Grid(1, "box_dirichlet", 20.0, 20001)
    u1 = ScalarField(grid, np.exp(-np.abs(grid.axis)))
    a = DampingCoefficient("constant", V0=1.0)
    data = compute_norms(zero_field(grid), u1, a, gamma=0.0)
    assert data.l1_u1 == pytest.approx(2.0, abs=1e-6)


def test_compute_norms_constant_damping_identity(line_box):
    a = DampingCoefficient("constant", V0=1.0)
    u0 = make_gaussian(line_box, 1.3, 0.0, 1.0)
    data = compute_norms(u0, zero_field(line_box), a)
    assert data.norm_au0 == pytest.approx(data.norm_u0, rel=1e-14)


def test_cauchy_schwarz_bridge_holds(line_box):
    a = DampingCoefficient("exponential", V0=1.0)
    u0 = make_gaussian(line_box, 1.0, 0.5, 0.8)
    data = compute_norms(u0, zero_field(line_box), a)
    assert data.int_a_u0_sq <= data.norm_au0 * data.norm_u0 * (1 + 1e-12)


def _synthetic(norm_u1=0.0, grad_u0=0.0, pair=0.0, **kw):
    grid = Grid(1, "box_dirichlet", 1.0, 8)
    z = zero_field(grid)
    defaults = dict(u0=z, u1=z, gamma=0.0, norm_u0=0.0, grad_u0=grad_u0,
                    norm_u1=norm_u1, l1_u1=0.0, l1_au0=0.0, norm_au0=0.0,
                    pair_u1_u0=pair, total_integral=0.0, int_a_u0_sq=0.0)
    defaults.update(kw)
    return InitialData(**defaults)


def test_seed_constants_zero_data():
    seeds = seed_constants(_synthetic(), V0=1.0)
    assert seeds.E0 == 0.0
    assert seeds.I0_sq == seeds.I1_sq == seeds.I2_sq == seeds.I3_sq == 0.0
    assert seeds.I00_sq == 0.0


def test_seed_constants_energy_arithmetic():
    # ||u1||^2 = 2, ||grad u0||^2 = 4 -> E0 = 3
    seeds = seed_constants(
        _synthetic(norm_u1=np.sqrt(2.0), grad_u0=2.0), V0=1.0)
    assert seeds.E0 == pytest.approx(3.0, rel=1e-15)


def test_seed_constants_i1_formula():
    # V0=1, eps=0.5, E0=3, (u1,u0)=0 -> I1^2 = 3*(1 + 1 + 1) = 9
    seeds = seed_constants(
        _synthetic(norm_u1=np.sqrt(2.0), grad_u0=2.0), V0=1.0, eps=0.5)
    assert seeds.I1_sq == pytest.approx(9.0, rel=1e-15)


def test_seed_constants_epsilon_domain():
    with pytest.raises(ValueError):
        seed_constants(_synthetic(), V0=1.0, eps=1.5)
    with pytest.raises(ValueError):
        seed_constants(_synthetic(), V0=1.0, eps=0.0)


def test_seed_constants_monotone_in_v0_and_c(line_box):
    a = DampingCoefficient("polynomial", V0=1.0, alpha=1.0)
    u0 = make_gaussian(line_box, 1.0, 0.0, 1.0)
    u1 = make_gaussian(line_box, 0.5, 0.0, 1.5)
    data = compute_norms(u0, u1, a)
    lo = seed_constants(data, V0=1.0, eps=0.25, C_prop21=0.5)
    hi_v0 = seed_constants(data, V0=2.0, eps=0.25, C_prop21=0.5)
    hi_c = seed_constants(data, V0=1.0, eps=0.25, C_prop21=1.0)
    assert hi_v0.I2_sq <= lo.I2_sq
    assert hi_v0.I3_sq <= lo.I3_sq
    assert hi_c.I2_sq >= lo.I2_sq
    assert hi_c.I3_sq >= lo.I3_sq


def test_seed_constants_i00(line_box):
    a = DampingCoefficient("constant", V0=1.0)
    u0 = make_gaussian(line_box, 1.0, 0.0, 1.0)
    data = compute_norms(u0, zero_field(line_box), a)
    seeds = seed_constants(data, V0=1.0)
    expected = (data.norm_u0**2 + data.grad_u0**2 + data.l1_au0**2
                + data.norm_au0**2)
    assert seeds.I00_sq == pytest.approx(expected, rel=1e-14)
