import math

import numpy as np
import pytest

from qfigrowth.limits import (
    cramer_rao,
    delta_max,
    delta_max_logarithmic,
    enhancing_exponent,
    fit_scaling,
    k_partite_min_time,
    light_cone_radius,
    linear_cone,
    logarithmic_cone,
    min_preparation_time,
    nonlocal_cone,
    polynomial_cone,
    qfi_growth_bound,
    regime_for,
)


# ------------------------------------------------------------------- regimes


def test_regime_boundaries_1d():
    assert regime_for(3.0, 1) == "polynomial"  # boundary alpha = 2D+1
    assert regime_for(4.0, 1) == "linear"
    assert regime_for(0.5, 1) == "nonlocal"
    assert regime_for(1.5, 1) == "logarithmic"
    assert regime_for(2.0, 1) == "logarithmic"  # boundary alpha = 2D
    assert regime_for(1.0, 1) == "nonlocal"  # boundary alpha = D


def test_regime_rejects_negative_alpha():
    with pytest.raises(ValueError):
        regime_for(-1.0, 1)


# ------------------------------------------------------------------- radius


def test_radius_linear():
    assert light_cone_radius(linear_cone(2.0), 3.0) == pytest.approx(6.0)


def test_radius_polynomial():
    assert light_cone_radius(polynomial_cone(1.0, 0.5), 4.0) == pytest.approx(16.0)


def test_radius_zero_time():
    for model in (
        linear_cone(1.0),
        polynomial_cone(2.0, 0.7),
        logarithmic_cone(0.5, 1.0),
        nonlocal_cone(100, 99.0),
    ):
        assert light_cone_radius(model, 0.0) == 0.0


def test_radius_nonlocal_step():
    model = nonlocal_cone(100, 99.0, c0=1.0)
    before = light_cone_radius(model, 0.9 * math.log(100))
    after = light_cone_radius(model, 1.1 * math.log(100))
    assert before == 0.0
    assert after == 99.0


def test_model_validation():
    with pytest.raises(ValueError):
        linear_cone(0.0)
    with pytest.raises(ValueError):
        polynomial_cone(1.0, 1.5)
    with pytest.raises(ValueError):
        nonlocal_cone(0, 10.0)


# -------------------------------------------------------------------- bound


def test_bound_at_zero_time():
    model = linear_cone(1.0)
    assert qfi_growth_bound(1.0, 1.5, 2.0, 1, model, 0.0, 10) == pytest.approx(15.0)


def test_bound_direct_substitution():
    got = qfi_growth_bound(1.0, 1.0, 1.0, 1, linear_cone(1.0), 5.0, 10)
    assert got == pytest.approx(110.0)


def test_bound_cap_engaged():
    got = qfi_growth_bound(1.0, 1.0, 1.0, 1, linear_cone(1.0), 1e6, 10, cap=True)
    assert got == pytest.approx(100.0)


def test_bound_validates_cwy():
    with pytest.raises(ValueError):
        qfi_growth_bound(1.0, 2.5, 1.0, 1, linear_cone(1.0), 1.0, 10)


# --------------------------------------------------------- preparation time


def test_min_time_product_state_target():
    assert min_preparation_time(10.0, 10, linear_cone(1.0), 1) == 0.0


def test_min_time_linear_heisenberg_target():
    for n in (10, 100, 1000):
        t = min_preparation_time(float(n * n), n, linear_cone(1.0), 1)
        assert t == pytest.approx((n - 1) / 2.0)


def test_min_time_polynomial_closed_form():
    model = polynomial_cone(1.7, 0.5)
    t = min_preparation_time(16.0 * 20, 20, model, 1)
    assert t == pytest.approx((7.5 / 1.7) ** 0.5)


def test_min_time_unreachable_target():
    with pytest.raises(ValueError):
        min_preparation_time(101.0, 10, linear_cone(1.0), 1, kappa=1.0)


def test_min_time_bisection_oracle():
    rng = np.random.default_rng(2)
    for _ in range(50):
        model = polynomial_cone(float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.2, 1.0)))
        n = int(rng.integers(8, 200))
        target = float(n ** rng.uniform(1.05, 1.9))
        t_closed = min_preparation_time(target, n, model, 1)
        lo, hi = 0.0, 1.0
        while qfi_growth_bound(1.0, 1.0, 1.0, 1, model, hi, n) < target:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if qfi_growth_bound(1.0, 1.0, 1.0, 1, model, mid, n) >= target:
                hi = mid
            else:
                lo = mid
        assert t_closed == pytest.approx(hi, rel=1e-9, abs=1e-12)


def test_bound_inverse_duality():
    # targets are drawn through the bound itself at a random positive radius,
    # so the closed-form inverse is interior for the continuous regimes
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 100:
        kind = rng.choice(["linear", "polynomial", "logarithmic", "nonlocal"])
        n = int(rng.integers(8, 300))
        diameter = float(n - 1)
        if kind == "linear":
            model = linear_cone(float(rng.uniform(0.5, 3.0)))
            radius = float(rng.uniform(0.5, diameter))
        elif kind == "polynomial":
            model = polynomial_cone(float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.1, 1.0)))
            radius = float(rng.uniform(0.5, diameter))
        elif kind == "logarithmic":
            a = float(rng.uniform(0.3, 2.0))
            model = logarithmic_cone(a, float(rng.uniform(0.2, 2.0)))
            radius = a * float(rng.uniform(1.5, 30.0))
        else:
            model = nonlocal_cone(n, diameter, c0=float(rng.uniform(0.5, 2.0)))
            radius = float(rng.uniform(0.5, diameter))
        kappa = float(rng.uniform(0.8, 2.0))
        c_wy = float(rng.uniform(1.0, 2.0))
        gamma = float(rng.uniform(0.5, 2.0))
        target = kappa * c_wy * (1.0 + gamma * 2.0 * radius) * n
        if target > kappa**2 * n**2:
            continue
        t_star = min_preparation_time(target, n, model, 1, kappa, c_wy, gamma)
        value = qfi_growth_bound(kappa, c_wy, gamma, 1, model, t_star, n)
        assert value >= target * (1 - 1e-9)
        if kind != "nonlocal":
            assert t_star > 0
            assert value == pytest.approx(target, rel=1e-9)
        checked += 1


# -------------------------------------------------------------- cramer-rao


def test_cramer_rao_sql_corner():
    n = 12
    rep = cramer_rao(float(n), T=50.0, t_p=1.0, tau=1.0, N=n)
    assert rep.delta == pytest.approx(0.0, abs=1e-12)
    assert rep.delta_lambda == pytest.approx(rep.delta_lambda_SQL, rel=1e-12)


def test_cramer_rao_heisenberg_corner():
    n = 12
    rep = cramer_rao(float(n * n), T=50.0, t_p=1.0, tau=1.0, N=n)
    assert rep.delta == pytest.approx(1.0, abs=1e-12)


def test_cramer_rao_prep_time_cancels_gain():
    n = 9
    rep = cramer_rao(float(n * n), T=100.0, t_p=float(n), tau=1.0, N=n)
    assert rep.delta == pytest.approx(0.0, abs=1e-12)


def test_enhancing_exponent_examples():
    n = 17
    assert enhancing_exponent(float(n), 1.0, 1.0, n) == pytest.approx(0.0, abs=1e-14)
    assert enhancing_exponent(float(n * n), 1.0, 1.0, n) == pytest.approx(1.0, abs=1e-14)
    assert enhancing_exponent(float(n) ** 1.5, 1.0, 1.0, n) == pytest.approx(0.5, abs=1e-12)


def test_enhancing_exponent_validation():
    with pytest.raises(ValueError):
        enhancing_exponent(10.0, 1.0, 1.0, 1)
    with pytest.raises(ValueError):
        enhancing_exponent(-1.0, 1.0, 1.0, 5)


def test_ratio_identity_random_inputs():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(2, 500))
        fq = float(rng.uniform(1.0, n * n))
        tau = float(rng.uniform(0.1, 4.0))
        t_p = float(rng.uniform(tau, 50.0))
        T = t_p * float(rng.uniform(1.0, 20.0))
        rep = cramer_rao(fq, T, t_p, tau, n)
        assert rep.delta_lambda / rep.delta_lambda_SQL == pytest.approx(
            n ** (-rep.delta / 2.0), rel=1e-10
        )


# --------------------------------------------------------------- delta_max


def test_delta_max_linear_1d_is_zero():
    dm = delta_max(4.0, 1)
    assert dm.value == 0.0
    assert not dm.asymptotic


def test_delta_max_polynomial_window():
    dm = delta_max(2.5, 1)
    assert dm.value == 0.5
    assert not dm.asymptotic


def test_delta_max_asymptotic_flag():
    for alpha in (0.0, 0.5, 1.0, 2.0):
        dm = delta_max(alpha, 1)
        assert dm.value == 1.0
        assert dm.asymptotic


def test_delta_max_branch_continuity_exact():
    for d in (1, 2, 3):
        boundary = 2 * d + 1
        inside = delta_max(float(boundary), d).value
        outside = delta_max(boundary + 1e-9, d).value
        # polynomial branch evaluated at the boundary equals the linear value
        assert inside == (d - 1.0) / d
        assert abs(inside - outside) < 2e-9
        assert delta_max(float(boundary), d).value - (d - 1.0) / d == 0.0


def test_delta_max_monotone_in_alpha():
    for d in (1, 2):
        grid = np.linspace(0.0, 2 * d + 3, 200)
        values = [delta_max(float(a), d).value for a in grid]
        for a, b in zip(values, values[1:]):
            assert b <= a + 1e-12


def test_delta_max_logarithmic_evaluator():
    val = delta_max_logarithmic(1000, polylog_power=1.0)
    assert val == pytest.approx(1.0 - math.log(math.log(1000)) / math.log(1000))
    assert delta_max_logarithmic(10**9, 1.0) > delta_max_logarithmic(1000, 1.0)


# ------------------------------------------------------------------- fits


def test_fit_exact_power_laws():
    ns = [10, 20, 40, 80]
    pts = [(n, float(n * n), float(n)) for n in ns]
    fit = fit_scaling(pts, tau=1.0)
    assert fit.delta == pytest.approx(0.0, abs=1e-12)
    assert fit.delta_f == pytest.approx(1.0, abs=1e-12)
    assert fit.r_squared[0] == pytest.approx(1.0)
    assert fit.r_squared[1] == pytest.approx(1.0)


def test_fit_sql_case():
    pts = [(n, float(n), 1.0) for n in (10, 30, 90)]
    fit = fit_scaling(pts, tau=1.0)
    assert fit.delta == pytest.approx(0.0, abs=1e-12)
    assert fit.delta_f == pytest.approx(0.0, abs=1e-12)


def test_fit_needs_three_sizes():
    with pytest.raises(ValueError):
        fit_scaling([(10, 100.0, 1.0), (10, 120.0, 1.0)], tau=1.0)


def test_fit_residuals_and_alpha_label():
    pts = [(n, float(n ** 1.7), 2.0) for n in (8, 16, 32, 64)]
    fit = fit_scaling(pts, tau=1.0, alpha=0.5)
    assert fit.alpha == 0.5
    assert len(fit.residuals) == 4
    assert max(abs(r) for r in fit.residuals) < 1e-12


# ---------------------------------------------------------------- k-partite


def test_k_partite_values():
    assert k_partite_min_time(1, 1.0) == 1.0
    assert k_partite_min_time(10, 2.0) == 5.0


def test_k_partite_consistent_with_bound_inversion():
    # reaching F_Q = k N through a linear cone takes time linear in k
    v = 1.7
    times = [min_preparation_time(float(k * 50), 50, linear_cone(v), 1) for k in (2, 4, 8, 16)]
    slopes = np.diff(times) / np.diff([2, 4, 8, 16])
    assert np.allclose(slopes, 1.0 / (2.0 * v), rtol=1e-12)
    for k in (2, 4, 8):
        assert min_preparation_time(float(k * 50), 50, linear_cone(v), 1) <= k_partite_min_time(
            k, v
        )


def test_k_partite_validation():
    with pytest.raises(ValueError):
        k_partite_min_time(0, 1.0)
    with pytest.raises(ValueError):
        k_partite_min_time(3, 0.0)
