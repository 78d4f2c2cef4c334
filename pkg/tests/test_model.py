import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from dickegp import model
from dickegp.errors import BetaOutOfRange, NegativeCoupling, NonPositiveParameter

P = model.ModelParams(1.0, 1.0)
LC = math.sqrt(0.5)

positive = st.floats(0.1, 5.0)


def test_validate_params():
    assert model.validate_params(1.0, 1.0) == P
    with pytest.raises(NonPositiveParameter):
        model.validate_params(0.0, 1.0)
    with pytest.raises(NonPositiveParameter):
        model.validate_params(1.0, -0.5)
    with pytest.raises(NonPositiveParameter):
        model.ModelParams(float("nan"), 1.0)


@pytest.mark.parametrize(
    "omega, omega0, expected",
    [(1.0, 1.0, 0.7071067811865476), (2.0, 1.0, 1.0), (1.0, 2.0, 1.0)],
)
def test_critical_coupling(omega, omega0, expected):
    assert model.critical_coupling(model.ModelParams(omega, omega0)) == pytest.approx(expected, abs=1e-15)


def test_mean_field_normal_branch():
    mf = model.mean_field(P, 0.5)
    assert (mf.alpha, mf.beta, mf.phase) == (0.0, 0.0, model.Phase.NORMAL)
    assert mf.delta == 1.0


def test_mean_field_superradiant_value():
    mf = model.mean_field(P, 1.0)
    assert mf.phase is model.Phase.SUPERRADIANT
    assert mf.delta == pytest.approx(0.5, abs=1e-15)
    assert mf.beta == pytest.approx(0.5, abs=1e-15)
    assert mf.alpha == pytest.approx(0.4330127018922193, abs=1e-15)
    # alpha = lam * beta * sqrt(1 - beta^2) / omega
    assert mf.alpha == pytest.approx(1.0 * 0.5 * math.sqrt(0.75), abs=1e-15)


def test_mean_field_at_critical_is_normal():
    mf = model.mean_field(P, LC)
    assert mf.phase is model.Phase.NORMAL
    assert (mf.alpha, mf.beta) == (0.0, 0.0)


def test_negative_coupling_rejected():
    for fn in (model.mean_field, model.ground_energy_per_atom, model.gp_per_atom):
        with pytest.raises(NegativeCoupling):
            fn(P, -0.1)


@pytest.mark.parametrize("lam, expected", [(0.3, -0.25), (1.0, -0.3125), (LC, -0.25)])
def test_ground_energy_per_atom(lam, expected):
    assert model.ground_energy_per_atom(P, lam) == pytest.approx(expected, abs=1e-15)


def test_h0_energy_examples():
    assert model.h0_energy(P, 0.9, 0.0, 0.0) == pytest.approx(-0.25, abs=1e-15)
    assert model.h0_energy(P, 1.0, 0.4330127018922193, 0.5) == pytest.approx(-0.3125, abs=1e-15)
    assert model.h0_energy(P, 1.0, 0.1, 0.0) == pytest.approx(-0.24, abs=1e-15)
    with pytest.raises(BetaOutOfRange):
        model.h0_energy(P, 1.0, 0.1, 1.1)


def test_fluctuation_coefficients_examples():
    mf = model.mean_field(P, 1.0)
    fc = model.fluctuation_coefficients(P, 1.0, mf.alpha, mf.beta)
    assert abs(fc.h1_c) < 1e-15 and abs(fc.h1_d) < 1e-15

    fc = model.fluctuation_coefficients(P, 1.0, 0.1, 0.0)
    assert (fc.h1_c, fc.h1_d) == pytest.approx((-0.1, -0.1), abs=1e-15)

    with pytest.raises(BetaOutOfRange):
        model.fluctuation_coefficients(P, 1.0, 0.1, 1.0)


@given(omega=positive, omega0=positive, lam=st.floats(0.0, 5.0))
def test_h2_normal_phase_reduction(omega, omega0, lam):
    params = model.ModelParams(omega, omega0)
    h2 = model.fluctuation_coefficients(params, lam, 0.0, 0.0).h2.as_dict()
    expected = dict(cc=omega, dd=omega0 / 2, hop=lam, pair=0.0, squeeze_d=0.0, quad_d=0.0, cross=0.0)
    assert h2 == pytest.approx(expected, abs=1e-15)


def test_h1_is_half_gradient_of_h0():
    # finite-difference oracle; a = c - sqrt(N) alpha but b = d + sqrt(N) beta, hence opposite signs
    lam, a, b, eps = 1.3, 0.37, 0.41, 1e-6
    fc = model.fluctuation_coefficients(P, lam, a, b)
    d_alpha = (model.h0_energy(P, lam, a + eps, b) - model.h0_energy(P, lam, a - eps, b)) / (2 * eps)
    d_beta = (model.h0_energy(P, lam, a, b + eps) - model.h0_energy(P, lam, a, b - eps)) / (2 * eps)
    assert fc.h1_c == pytest.approx(-0.5 * d_alpha, abs=1e-8)
    assert fc.h1_d == pytest.approx(0.5 * d_beta, abs=1e-8)


@pytest.mark.parametrize("lam", [0.9, 1.0, 1.3, 2.0])
def test_mean_field_matches_numerical_minimum(lam):
    # independent oracle: brute-force grid then local polish of H0 over alpha >= 0, 0 <= beta < 1
    alphas = np.linspace(0, 2, 401)
    betas = np.linspace(0, 0.99, 397)
    A, B = np.meshgrid(alphas, betas, indexing="ij")
    E = A**2 + 0.5 * (B**2 - 0.5) - 2 * lam * A * B * np.sqrt(1 - B**2)
    i, j = np.unravel_index(np.argmin(E), E.shape)
    res = optimize.minimize(
        lambda x: model.h0_energy(P, lam, x[0], x[1]), [alphas[i], betas[j]],
        method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-15, maxiter=10000),
    )
    mf = model.mean_field(P, lam)
    assert res.x == pytest.approx([mf.alpha, mf.beta], abs=1e-6)
    assert res.fun == pytest.approx(model.ground_energy_per_atom(P, lam), abs=1e-12)


@pytest.mark.parametrize("lam, expected", [(0.6, 0.0), (1.0, 3 * math.pi / 8), (LC, 0.0)])
def test_gp_per_atom(lam, expected):
    assert model.gp_per_atom(P, lam) == pytest.approx(expected, abs=1e-15)
    assert model.gp_per_atom(P, 1.0) == pytest.approx(1.1780972, abs=1e-7)


def test_gp_slope_at_critical():
    assert model.gp_slope_at_critical(P) == pytest.approx(4.4428829, abs=1e-7)
    assert model.gp_slope_at_critical(model.ModelParams(2.0, 1.0)) == pytest.approx(math.pi / 2, abs=1e-15)
    h = 1e-7
    fd = (model.gp_per_atom(P, LC + h) - model.gp_per_atom(P, LC)) / h
    assert fd == pytest.approx(model.gp_slope_at_critical(P), rel=1e-5)


# ---- invariants --------------------------------------------------------------

above_critical = st.floats(1.0001, 4.0)  # multiples of lambda_c


@settings(max_examples=200)
@given(omega=positive, omega0=positive, ratio=st.floats(0.0, 4.0))
def test_mean_field_solution_invariants(omega, omega0, ratio):
    params = model.ModelParams(omega, omega0)
    lam = ratio * model.critical_coupling(params)
    mf = model.mean_field(params, lam)
    assert (mf.phase is model.Phase.NORMAL) == (mf.alpha == 0 and mf.beta == 0)
    if mf.phase is model.Phase.SUPERRADIANT:
        assert 0 <= mf.beta**2 < 0.5
        assert 0 < mf.delta <= 1
        assert mf.alpha == pytest.approx(lam * mf.beta * math.sqrt(1 - mf.beta**2) / omega, rel=1e-12)


@given(omega=positive, omega0=positive, ratio=above_critical)
def test_stationarity(omega, omega0, ratio):
    params = model.ModelParams(omega, omega0)
    lam = ratio * model.critical_coupling(params)
    mf = model.mean_field(params, lam)
    fc = model.fluctuation_coefficients(params, lam, mf.alpha, mf.beta)
    assert abs(fc.h1_c) < 1e-12 and abs(fc.h1_d) < 1e-12


@given(omega=positive, omega0=positive, ratio=st.floats(0.0, 1.0))
def test_stationarity_normal_phase(omega, omega0, ratio):
    params = model.ModelParams(omega, omega0)
    fc = model.fluctuation_coefficients(params, ratio * model.critical_coupling(params), 0.0, 0.0)
    assert fc.h1_c == 0 and fc.h1_d == 0


@pytest.mark.parametrize("lam", [0.75, 0.9, 1.0, 1.5, 2.5])
def test_minimality(lam):
    rng = np.random.default_rng(20240611)
    mf = model.mean_field(P, lam)
    e_min = model.h0_energy(P, lam, mf.alpha, mf.beta)
    for da, db in rng.uniform(-1e-2, 1e-2, size=(200, 2)):
        assert e_min <= model.h0_energy(P, lam, mf.alpha + da, mf.beta + db)


@given(omega=positive, omega0=positive)
def test_continuity_at_critical(omega, omega0):
    params = model.ModelParams(omega, omega0)
    lc = model.critical_coupling(params)
    right = np.nextafter(lc, math.inf)
    assert abs(model.ground_energy_per_atom(params, right) - model.ground_energy_per_atom(params, lc)) < 1e-12
    assert abs(model.gp_per_atom(params, right) - model.gp_per_atom(params, lc)) < 1e-12


@given(omega=positive, omega0=positive, ratio=st.floats(0.0, 4.0))
def test_gp_equals_two_pi_alpha_squared(omega, omega0, ratio):
    params = model.ModelParams(omega, omega0)
    lam = ratio * model.critical_coupling(params)
    gp = model.gp_per_atom(params, lam)
    assert abs(gp - 2 * math.pi * model.mean_field(params, lam).alpha ** 2) <= 1e-12 * max(1.0, gp)


def test_h0_at_mean_field_equals_ground_energy():
    for lam in np.linspace(0, 3, 61):
        mf = model.mean_field(P, lam)
        assert model.h0_energy(P, lam, mf.alpha, mf.beta) == pytest.approx(
            model.ground_energy_per_atom(P, lam), abs=1e-14
        )


def test_linear_scaling_near_critical():
    slope = model.gp_slope_at_critical(P)
    eps = np.linspace(1e-4, 0.05, 200)
    resid = np.array([model.gp_per_atom(P, LC + e) - slope * e for e in eps])
    c = np.max(np.abs(resid) / eps**2)
    assert np.isfinite(c) and c < 10
