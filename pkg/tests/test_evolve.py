import numpy as np
import pytest
from scipy.interpolate import make_interp_spline

from ctschro.domain import (
    EvolutionParams,
    SpectralFunction,
    amplitude_bound,
    build_counterexample,
    dilated_family,
    from_profile,
    holder_curve,
    identity_curve,
    random_band_limited,
    shear_curve,
)
from ctschro.errors import GridRangeError, ResolutionError
from ctschro.evolve import (
    direct_quadrature,
    evaluate_along_curve,
    field_value,
    make_plan,
    max_phase_rate,
    propagate_slice,
    slice_l2_norm,
    spectral_l2_norm,
)


def synthesis_oracle(f, y, t, params, refine=8):
    """Independent slow route: cubic-spline refinement of the samples plus a
    plain trapezoid sum.  Shares no code with the paths under test."""
    xi = np.linspace(f.xi_min, f.xi_max, (f.n_samples - 1) * refine + 1)
    fhat = make_interp_spline(f.grid(), f.samples, k=5)(xi)
    phase = y * xi + t * np.abs(xi) ** params.m
    integrand = fhat * np.exp(1j * phase)
    if params.damping:
        integrand = integrand * np.exp(-(t ** params.gamma) * np.abs(xi) ** params.m)
    return np.trapezoid(integrand, xi) / (2 * np.pi)


def gaussian_spectrum(n=4801, cut=12.0):
    return from_profile(lambda xi: np.exp(-xi ** 2 / 2), -cut, cut, n)


def gaussian_closed_form(y, t, gamma):
    # integral exp(i y xi - a xi^2) = sqrt(pi / a) exp(-y^2 / (4 a)), Re a > 0
    a = 0.5 + t ** gamma - 1j * t
    return np.sqrt(np.pi / a) * np.exp(-y ** 2 / (4 * a)) / (2 * np.pi)


# ---------------------------------------------------------------------------
# identity at t = 0 and the Gaussian closed form
# ---------------------------------------------------------------------------

def test_identity_at_time_zero_all_curves():
    f = random_band_limited(32.0, seed=21)
    params = EvolutionParams(m=2.0, gamma=1.5, damping=True)
    xs = np.linspace(-0.9, 0.9, 64)
    ref = np.array([synthesis_oracle(f, x, 0.0, params) for x in xs])
    scale = np.abs(ref).max()
    for curve in (identity_curve(), shear_curve(), holder_curve(0.3)):
        plan = make_plan(f, params, curve)
        got = evaluate_along_curve(plan, curve, xs, 0.0, path="transform")
        assert np.max(np.abs(got - ref)) <= 1e-8 * scale


def test_gaussian_closed_form_both_paths():
    gamma = 1.5
    f = gaussian_spectrum()
    params = EvolutionParams(m=2.0, gamma=gamma, damping=True)
    plan = make_plan(f, params, identity_curve())
    ys = np.linspace(-2.5, 2.5, 11)
    for t in (0.0, 1e-3, 0.1, 0.5, 1.0):
        want = gaussian_closed_form(ys, t, gamma)
        sl = propagate_slice(plan, t)
        got_t = field_value(sl, ys)
        got_q = np.array([direct_quadrature(f, params, y, t) for y in ys])
        assert np.max(np.abs(got_t - want) / np.abs(want)) <= 1e-7
        assert np.max(np.abs(got_q - want) / np.abs(want)) <= 1e-7


def test_alias_contamination_below_budget():
    # widening the synthesis period must not move the values: wrap-around
    # images are already below 1e-9 at the default safety factor
    f = gaussian_spectrum()
    params = EvolutionParams(m=2.0, gamma=1.5, damping=True)
    ys = np.linspace(-2.0, 2.0, 33)
    for t in (0.1, 1.0):
        tight = make_plan(f, params, alias_safety=2.0)
        wide = make_plan(f, params, alias_safety=8.0)
        a = field_value(propagate_slice(tight, t), ys)
        b = field_value(propagate_slice(wide, t), ys)
        assert np.max(np.abs(a - b)) <= 1e-9 * np.abs(b).max()


# ---------------------------------------------------------------------------
# Plancherel and damping
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("t", [0.0, 0.05, 0.3, 1.0])
def test_plancherel_damping_identity(t):
    # below 1e-30 of the undamped norm the slice sits in the denormal range
    # where exp products lose relative precision, so the identity is checked
    # against that floor
    f = random_band_limited(16.0, seed=4)
    params = EvolutionParams(m=2.0, gamma=0.8, damping=True)
    plan = make_plan(f, params)
    got = slice_l2_norm(propagate_slice(plan, t))
    want = spectral_l2_norm(f, params, t)
    floor = 1e-30 * spectral_l2_norm(f, params, 0.0)
    assert abs(got - want) <= 1e-8 * max(want, floor)


def test_damping_never_increases_norm():
    f = random_band_limited(16.0, seed=9)
    on = EvolutionParams(m=2.0, gamma=1.2, damping=True)
    off = EvolutionParams(m=2.0, gamma=1.2, damping=False)
    for t in (0.01, 0.2, 1.0):
        n_on = slice_l2_norm(propagate_slice(make_plan(f, on), t))
        n_off = slice_l2_norm(propagate_slice(make_plan(f, off), t))
        assert n_on <= n_off * (1 + 1e-12)


def test_reflected_modulus_for_real_spectra():
    # for real-valued samples, conjugate-reflecting the spectrum reflects the
    # modulus of every undamped quadratic-phase slice: |h*_t(y)| = |h_t(-y)|
    rng = np.random.default_rng(2)
    xi = np.linspace(-10.0, 10.0, 2001)
    window = np.exp(-xi ** 2 / 8)
    vals = window * rng.standard_normal(xi.size)
    f = SpectralFunction(-10.0, 10.0, vals.astype(complex))
    fr = SpectralFunction(-10.0, 10.0, np.conj(vals[::-1]).astype(complex))
    params = EvolutionParams(m=2.0, gamma=1.0, damping=False)
    ys = np.linspace(-2.0, 2.0, 41)
    for t in (0.07, 0.8):
        a = np.abs([direct_quadrature(fr, params, y, t) for y in ys])
        b = np.abs([direct_quadrature(f, params, -y, t) for y in ys])
        assert np.max(np.abs(a - b)) <= 1e-10 * np.max(b)


# ---------------------------------------------------------------------------
# oracle agreement between the two routes
# ---------------------------------------------------------------------------

def test_transform_matches_quadrature_at_random_points():
    lam = 64.0
    f = random_band_limited(lam, seed=5)
    curve = holder_curve(0.5)
    floor = 1e-2 * amplitude_bound(f)
    rng = np.random.default_rng(17)
    for damping in (False, True):
        params = EvolutionParams(m=2.0, gamma=1.0, damping=damping)
        plan = make_plan(f, params, curve)
        for _ in range(20):
            x = rng.uniform(-1.0, 1.0)
            t = rng.uniform(0.0, 1.0)
            a = evaluate_along_curve(plan, curve, x, t, path="transform")
            b = evaluate_along_curve(plan, curve, x, t, path="quadrature")
            assert abs(a - b) <= 1e-6 * max(abs(b), floor)


def test_auto_path_consistency():
    f = random_band_limited(16.0, seed=8)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=False)
    curve = identity_curve()
    plan = make_plan(f, params, curve)
    xs = np.linspace(-0.5, 0.5, 50)   # > 32 queries: auto takes the transform
    auto = evaluate_along_curve(plan, curve, xs, 0.3)
    quad = evaluate_along_curve(plan, curve, xs, 0.3, path="quadrature")
    floor = 1e-2 * amplitude_bound(f)
    assert np.max(np.abs(auto - quad) / np.maximum(np.abs(quad), floor)) <= 1e-6


# ---------------------------------------------------------------------------
# direct quadrature basics
# ---------------------------------------------------------------------------

def test_quadrature_of_zero_spectrum():
    f = SpectralFunction(0.0, 1.0, np.zeros(128, dtype=complex))
    params = EvolutionParams()
    assert direct_quadrature(f, params, 0.3, 0.5) == 0.0


def test_quadrature_at_origin_is_mean():
    f = random_band_limited(8.0, seed=12)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=False)
    want = np.trapezoid(f.samples, dx=f.delta_xi) / (2 * np.pi)
    got = direct_quadrature(f, params, 0.0, 0.0)
    assert abs(got - want) <= 1e-10 * abs(want)


def test_half_wave_transport():
    # m=1, damping off, one-sided spectrum: the phase xi (y + t) vanishes on
    # the support line y = -t, so the value equals the one at the origin
    fam = dilated_family(0.5, 1.0, 16.0)
    f = build_counterexample(fam)
    params = EvolutionParams(m=1.0, gamma=1.0, damping=False)
    v0 = direct_quadrature(f, params, 0.0, 0.0)
    for t in (0.1, 0.5, 1.0):
        vt = direct_quadrature(f, params, -t, t)
        assert abs(vt - v0) <= 1e-9 * abs(v0)


# ---------------------------------------------------------------------------
# phase-rate bound
# ---------------------------------------------------------------------------

def test_max_phase_rate_examples():
    lam = 32.0
    f = random_band_limited(lam, seed=1, two_sided=False)
    assert max_phase_rate(f, EvolutionParams(m=2.0), 0.0, 0.0) == 0.0
    got = max_phase_rate(f, EvolutionParams(m=2.0), 0.5, 1.0)
    assert got == pytest.approx(0.5 + 2.0 * f.max_abs_xi(), rel=1e-12)
    # m < 1: the supremum sits at the lower support edge
    got = max_phase_rate(f, EvolutionParams(m=0.5), 0.25, 1.0)
    assert got == pytest.approx(0.25 + 0.5 * f.min_abs_xi() ** -0.5, rel=1e-12)


def test_max_phase_rate_unbounded_for_rough_low_band():
    # a sample exactly at xi = 0 makes the m < 1 phase rate unbounded
    f = SpectralFunction(0.0, 1.0, np.ones(128, dtype=complex))
    assert max_phase_rate(f, EvolutionParams(m=0.5), 0.0, 1.0) == np.inf


# ---------------------------------------------------------------------------
# grids and guards
# ---------------------------------------------------------------------------

def test_slice_respects_demodulated_nyquist():
    f = random_band_limited(64.0, seed=3, two_sided=False)
    params = EvolutionParams(m=2.0, gamma=2.0, damping=True)
    plan = make_plan(f, params)
    sl = propagate_slice(plan, 1e-5)
    half_band = 0.5 * (f.xi_max - f.xi_min)
    assert sl.delta_y <= np.pi / (2.0 * half_band)
    # plan window is covered
    assert sl.y_min <= plan.y_lo and sl.y_max >= plan.y_hi


def test_out_of_window_queries_raise():
    f = random_band_limited(8.0, seed=2)
    params = EvolutionParams(m=2.0, gamma=1.0, damping=False)
    plan = make_plan(f, params)
    sl = propagate_slice(plan, 0.1)
    with pytest.raises(GridRangeError):
        field_value(sl, sl.y_max + 1.0)
    with pytest.raises(GridRangeError):
        evaluate_along_curve(plan, identity_curve(), plan.y_hi + 1.0, 0.1)


def test_oversampling_floor_enforced():
    f = random_band_limited(8.0, seed=2)
    params = EvolutionParams()
    with pytest.raises(ResolutionError):
        make_plan(f, params, oversampling=1.5)


def test_determinism_bitwise():
    f = random_band_limited(32.0, seed=6)
    params = EvolutionParams(m=2.0, gamma=1.1, damping=True)
    plan = make_plan(f, params)
    a = propagate_slice(plan, 0.37)
    b = propagate_slice(plan, 0.37)
    assert a.values.tobytes() == b.values.tobytes()
