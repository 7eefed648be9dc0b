import numpy as np
import pytest

from ctschro.domain import (
    EvolutionParams,
    SpectralFunction,
    amplitude_bound,
    build_counterexample,
    dilated_family,
    holder_curve,
    identity_curve,
    modulated_family,
    random_band_limited,
    witness_interval,
)
from ctschro.errors import CalibrationError, DegenerateSeriesError, DomainError
from ctschro.evolve import direct_quadrature
from ctschro.maximal import (
    LOWER_BOUND_LEVEL,
    MaximalField,
    build_time_grid,
    calibrate_smallness,
    default_time_exponent,
    fit_slope,
    fit_slope_guarded,
    l2_norm_field,
    maximal_field,
    maximal_ratio,
    witness_minimum,
    witness_x_grid,
)


# ---------------------------------------------------------------------------
# time grids
# ---------------------------------------------------------------------------

def test_time_grid_geometric_example():
    grid = build_time_grid(-4, ratio=2.0)
    assert np.array_equal(grid.times, [0.0, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0])


def test_time_grid_refinement_nests():
    coarse = build_time_grid(-6, ratio=2.0 ** 0.125)
    fine = build_time_grid(-6, ratio=2.0 ** 0.0625)
    assert set(coarse.times).issubset(set(fine.times))


def test_time_grid_witness_times_attached():
    fam = dilated_family(0.5, 1.0, 16.0)
    xs = np.array([1e-4, 0.9])          # second node is outside the interval
    grid = build_time_grid(-8, fam=fam, x_nodes=xs)
    assert grid.extra_times[0] == pytest.approx(1e-8, rel=1e-12)
    assert np.isnan(grid.extra_times[1])


def test_time_grid_validation():
    with pytest.raises(DomainError):
        build_time_grid(-1)
    with pytest.raises(DomainError):
        build_time_grid(-4, ratio=0.9)


# ---------------------------------------------------------------------------
# maximal fields
# ---------------------------------------------------------------------------

def test_zero_spectrum_gives_zero_field():
    f = SpectralFunction(0.0, 8.0, np.zeros(128, dtype=complex))
    params = EvolutionParams()
    grid = build_time_grid(-4)
    field = maximal_field(f, params, identity_curve(),
                          np.linspace(-1, 1, 65), grid)
    assert np.all(field.values == 0.0)


def test_field_dominates_time_zero_amplitude():
    f = random_band_limited(16.0, seed=31)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=True)
    xs = np.linspace(-1.0, 1.0, 129)
    grid = build_time_grid(default_time_exponent(16.0))
    field = maximal_field(f, params, holder_curve(0.5), xs, grid)
    f_at = np.abs([direct_quadrature(f, params, x, 0.0) for x in xs])
    assert np.all(field.values >= f_at - 1e-8 * amplitude_bound(f))


def test_witness_values_reach_lower_bound_level():
    fam = dilated_family(0.25, 0.75, 64.0)
    f = build_counterexample(fam)
    params = EvolutionParams(m=2.0, gamma=fam.gamma, damping=True)
    xs = witness_x_grid(fam, 64)
    grid = build_time_grid(default_time_exponent(fam.lam), fam=fam, x_nodes=xs)
    field = maximal_field(f, params, holder_curve(fam.alpha), xs, grid)
    lo, hi = witness_interval(fam)
    inside = (field.x > lo) & (field.x < hi)
    assert field.values[inside].min() >= LOWER_BOUND_LEVEL


def test_refining_time_grid_never_decreases_field():
    f = random_band_limited(8.0, seed=13)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=True)
    xs = np.linspace(-1, 1, 65)
    coarse = build_time_grid(-8, ratio=2.0 ** 0.25)
    fine = build_time_grid(-8, ratio=2.0 ** 0.125)
    mc = maximal_field(f, params, identity_curve(), xs, coarse)
    mf = maximal_field(f, params, identity_curve(), xs, fine)
    assert np.all(mf.values >= mc.values - 1e-15)
    assert l2_norm_field(mf, (-1, 1)) >= l2_norm_field(mc, (-1, 1)) - 1e-15


def test_maximal_field_deterministic():
    f = random_band_limited(16.0, seed=40)
    params = EvolutionParams(m=2.0, gamma=0.9, damping=True)
    xs = np.linspace(-1, 1, 101)
    grid = build_time_grid(-12, fam=None)
    a = maximal_field(f, params, holder_curve(0.4), xs, grid)
    b = maximal_field(f, params, holder_curve(0.4), xs, grid)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.argmax_t.tobytes() == b.argmax_t.tobytes()


# ---------------------------------------------------------------------------
# field norms
# ---------------------------------------------------------------------------

def test_norm_of_constant_field():
    xs = np.linspace(-1, 1, 513)
    field = MaximalField(xs, np.ones_like(xs), np.zeros_like(xs))
    assert l2_norm_field(field, (-1, 1)) == pytest.approx(np.sqrt(2.0), rel=1e-12)
    # constant at the lower-bound level over a short interval
    width = 0.25
    level = LOWER_BOUND_LEVEL
    sub = np.linspace(0.0, width, 257)
    field2 = MaximalField(sub, np.full(sub.size, level), np.zeros(sub.size))
    assert l2_norm_field(field2, (0.0, width)) == pytest.approx(
        level * np.sqrt(width), rel=1e-12)


def test_norm_interval_validation():
    xs = np.linspace(-1, 1, 9)
    field = MaximalField(xs, np.ones_like(xs), np.zeros_like(xs))
    with pytest.raises(DomainError):
        l2_norm_field(field, (-2.0, 1.0))
    with pytest.raises(DomainError):
        l2_norm_field(field, (0.5, 0.5))


def test_norm_refinement_converges():
    # doubling the x-resolution moves the norm by less than 1e-3 relative
    lam = 64.0
    f = random_band_limited(lam, seed=77)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=True)
    grid = build_time_grid(default_time_exponent(lam))
    norms = []
    for n in (1025, 2049):
        xs = np.linspace(-1, 1, n)
        field = maximal_field(f, params, identity_curve(), xs, grid)
        norms.append(l2_norm_field(field, (-1, 1)))
    assert abs(norms[1] - norms[0]) <= 1e-3 * norms[1]


# ---------------------------------------------------------------------------
# ratios and slope fits
# ---------------------------------------------------------------------------

def test_ratio_zero_norm_guard(monkeypatch):
    from ctschro import maximal
    from ctschro.errors import ZeroNormError

    zero = SpectralFunction(0.0, 8.0, np.zeros(128, dtype=complex))
    monkeypatch.setattr(maximal, "build_counterexample", lambda fam, n: zero)
    with pytest.raises(ZeroNormError):
        maximal.maximal_ratio(dilated_family(0.25, 0.75, 16.0))
    with pytest.raises(ZeroNormError):
        maximal.witness_minimum(dilated_family(0.25, 0.75, 16.0), n_nodes=8)


def test_fit_slope_exact_power_law():
    xs = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    fit = fit_slope(xs, 3.0 * xs ** 0.25)
    assert fit.slope == pytest.approx(0.25, abs=1e-12)
    assert fit.max_residual <= 1e-12
    fit0 = fit_slope(xs, np.full(5, 7.0))
    assert fit0.slope == pytest.approx(0.0, abs=1e-12)


def test_fit_slope_validation():
    with pytest.raises(DegenerateSeriesError):
        fit_slope([1, 2, 3], [1, 1, 1])
    with pytest.raises(DegenerateSeriesError):
        fit_slope([1, 2, 3, 4], [1.0, -1.0, 1.0, 1.0])
    with pytest.raises(DegenerateSeriesError):
        fit_slope([1, 2, 2, 4], [1.0, 1.0, 1.0, 1.0])


def test_fit_slope_guard_drops_transient():
    xs = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    vals = 2.0 * xs ** 0.5
    vals[0] *= 10.0     # corrupted smallest scale
    fit = fit_slope_guarded(xs, vals)
    assert fit.dropped_scales == (2.0,)
    assert fit.slope == pytest.approx(0.5, abs=1e-12)


def test_maximal_ratio_small_scale_smoke():
    fam = dilated_family(0.25, 2.0, 16.0)
    res = maximal_ratio(fam)
    lo, hi = witness_interval(fam)
    # the witness scan keeps the field at the 1/(2 pi) level on the interval
    assert res.norm_maxfield == pytest.approx(
        np.sqrt(hi) / (2 * np.pi), rel=0.05)
    assert res.q > 0 and res.lam == fam.lam and res.R == fam.R


# ---------------------------------------------------------------------------
# witness scans and calibration
# ---------------------------------------------------------------------------

def test_witness_minimum_at_default_smallness():
    fam = dilated_family(0.25, 0.75, 64.0)
    m, xs, vals, ts = witness_minimum(fam, n_nodes=64)
    assert m >= LOWER_BOUND_LEVEL
    assert xs.size == 64 and vals.size == 64 and ts.size == 64


def test_witness_minimum_time_zero_regime():
    fam = dilated_family(0.25, 0.75, 64.0)
    m, xs, vals, ts = witness_minimum(fam, n_nodes=64, t_zero=True)
    assert np.all(ts == 0.0)
    assert np.all(xs < fam.c / fam.R)
    assert m >= LOWER_BOUND_LEVEL


def test_calibration_keeps_default_when_it_passes():
    fam = dilated_family(0.25, 2.0, 64.0)
    calibrated, history = calibrate_smallness(fam, n_nodes=64)
    assert calibrated.c == fam.c
    assert history[-1][1] >= LOWER_BOUND_LEVEL


def test_calibration_shrinks_until_level_reached():
    # the witness deviation shrinks with c, so a demanding level forces halving
    fam = modulated_family(1.0, 1.0, 16.0, b=1.0, c=0.9)
    level = 0.14
    calibrated, history = calibrate_smallness(fam, n_nodes=32, level=level)
    assert calibrated.c < 0.9
    assert history[-1][1] >= level
    assert all(a[0] > b[0] for a, b in zip(history, history[1:]))


def test_calibration_underflow_raises():
    # no smallness constant can push the witness floor above 1/(2 pi)
    fam = dilated_family(0.25, 2.0, 16.0)
    with pytest.raises(CalibrationError):
        calibrate_smallness(fam, n_nodes=16, level=0.2, c_floor=2.0 ** -8)
