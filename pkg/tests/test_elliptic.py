import math

import mpmath
import numpy as np
import pytest

from cubicflow.elliptic import (
    HorizonError,
    InconsistentDataError,
    PoleError,
    WpParams,
    half_period,
    pole_distance,
    real_root,
    wp_and_prime,
    wp_eval,
)

# closed form of the real half-period for g3 = 1
OMEGA_1 = math.gamma(1 / 3) ** 3 / (4 * math.pi)


def quad_oracle(g3, lo, hi=None):
    """Integral of dF / sqrt(4F^3 - g3) over [lo, hi] by mpmath's tanh-sinh rule.

    lo = None means the real root.  The substitution F = e1 + s^2 removes the
    endpoint singularity; everything runs at 30 digits.
    """
    mpmath.mp.dps = 30
    g3 = mpmath.mpf(g3)
    e1 = mpmath.cbrt(g3 / 4) if g3 >= 0 else -mpmath.cbrt(-g3 / 4)
    f = lambda s: 1 / mpmath.sqrt((e1 + s * s) ** 2 + (e1 + s * s) * e1 + e1 * e1)  # noqa: E731
    a = 0 if lo is None else mpmath.sqrt(max(mpmath.mpf(lo) - e1, 0))
    b = mpmath.inf if hi is None else mpmath.sqrt(mpmath.mpf(hi) - e1)
    return float(mpmath.quad(f, [a, a + 1, b]))


def test_oracle_constant():
    assert OMEGA_1 == pytest.approx(1.5299540370, abs=1e-10)
    assert quad_oracle(1, None) == pytest.approx(OMEGA_1, rel=1e-12)


def test_wp_degenerate_example():
    assert wp_eval(WpParams(0), 0.5) == 4.0


def test_wp_laurent_example():
    # t^-2 + g3 t^4 / 28; the next term is g3^2 t^10 / 10192
    assert wp_eval(WpParams(1), 0.1) == pytest.approx(100 + 1e-4 / 28, rel=1e-15)


def test_wp_at_half_period_is_real_root():
    p = WpParams(1)
    assert wp_eval(p, half_period(1)) == pytest.approx((1 / 4) ** (1 / 3), rel=1e-12)
    assert wp_and_prime(p, half_period(1))[1] == pytest.approx(0, abs=1e-7)


def test_wp_errors():
    with pytest.raises(PoleError):
        wp_eval(WpParams(1), 0.0)
    with pytest.raises(HorizonError):
        wp_eval(WpParams(1), 1e6)


@pytest.mark.parametrize("g3", [-1.0, 0.0, 1.0, 108.0])
def test_wp_satisfies_first_order_equation_in_series_range(g3):
    p = WpParams(g3)
    top = p.series_radius if g3 else 1.0
    for t in np.linspace(top / 200, top, 200):
        P, dP = wp_and_prime(p, t)
        assert abs(dP * dP - 4 * P**3 + g3) <= 1e-8 * max(1.0, P**3)


@pytest.mark.parametrize("g3", [-1.0, 1.0, 108.0, -7.5])
def test_wp_satisfies_first_order_equation_beyond_series(g3):
    # duplication and period reduction, several periods out, both signs of t
    p = WpParams(g3)
    for t in np.linspace(-7.3, 7.3, 300) * p.half_period:
        P, dP = wp_and_prime(p, t)
        assert abs(dP * dP - 4 * P**3 + g3) <= 1e-10 * max(1.0, abs(P) ** 3)


@pytest.mark.parametrize("g3", [-1.0, 1.0, 108.0])
def test_wp_inverts_the_quadrature(g3):
    # F = wp(t) with F' < 0 on (0, omega): t is the time to fall from inf to F
    p = WpParams(g3)
    for frac in (0.1, 0.35, 0.6, 0.9):
        t = frac * p.half_period
        F = wp_eval(p, t)
        assert quad_oracle(g3, F) == pytest.approx(t, rel=1e-11)


def test_wp_even_and_periodic():
    p = WpParams(3.0)
    w = p.half_period
    for t in (0.2, 0.9, 1.3):
        assert wp_eval(p, -t) == wp_eval(p, t)
        assert wp_eval(p, t + 2 * w) == pytest.approx(wp_eval(p, t), rel=1e-11)


def test_wp_degenerate_limit():
    p = WpParams(0.0)
    for t in np.linspace(-40, 40, 101):
        if t:
            assert wp_eval(p, t) == 1 / t**2


def test_wp_scaling():
    rng = np.random.default_rng(11)
    for _ in range(50):
        g3 = rng.uniform(0.1, 50)
        s = rng.uniform(0.3, 3.0)
        t = rng.uniform(0.05, 0.3) * half_period(g3) / s
        lhs = wp_eval(WpParams(s**6 * g3), t)
        rhs = s**2 * wp_eval(WpParams(g3), s * t)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_half_period_examples():
    assert half_period(1) == pytest.approx(1.5299540370, abs=1e-8)
    assert half_period(1) == pytest.approx(OMEGA_1, rel=1e-13)
    expected_108 = OMEGA_1 * 108 ** (-1 / 6)
    assert half_period(108) == pytest.approx(expected_108, rel=1e-12)
    assert half_period(64) == pytest.approx(half_period(1) / 2, rel=1e-12)


def test_half_period_negative_g3_matches_quadrature():
    assert half_period(-1) == pytest.approx(quad_oracle(-1, None), rel=1e-12)
    # the g3 < 0 lattice is the g3 > 0 one turned by a right angle
    assert half_period(-1) == pytest.approx(math.sqrt(3) * OMEGA_1, rel=1e-12)


@pytest.mark.parametrize("g3", [1e-6, 0.3, 2.0, 108.0, 1e5, -0.3, -2.0, -1e5])
def test_half_period_scaling_law(g3):
    base = half_period(math.copysign(1.0, g3))
    assert half_period(g3) == pytest.approx(base * abs(g3) ** (-1 / 6), rel=1e-10)


def test_half_period_zero_rejected():
    with pytest.raises(ValueError):
        half_period(0)


def test_pole_distance_examples():
    assert pole_distance(WpParams(0), 4, 16) == pytest.approx(0.5, rel=1e-15)
    assert pole_distance(WpParams(108), 3, 0) == pytest.approx(OMEGA_1 * 108 ** (-1 / 6), rel=1e-12)
    assert pole_distance(WpParams(0), 1, -2) == math.inf


def test_pole_distance_at_root_is_half_period():
    for g3 in (1.0, 108.0, -4.0):
        assert pole_distance(WpParams(g3), real_root(g3), 0.0) == half_period(g3)


@pytest.mark.parametrize("g3", [108.0, 1.0, -1.0, -50.0])
@pytest.mark.parametrize("rise", [0.5, 5.0, 40.0])
def test_pole_distance_both_branches_against_quadrature(g3, rise):
    F0 = real_root(g3) + rise
    rate = math.sqrt(4 * F0**3 - g3)
    up = pole_distance(WpParams(g3), F0, rate)
    down = pole_distance(WpParams(g3), F0, -rate)
    assert up == pytest.approx(quad_oracle(g3, F0), rel=1e-10)
    assert down == pytest.approx(quad_oracle(g3, None, F0) + quad_oracle(g3, None), rel=1e-10)
    # rising and falling passages add up to one real period
    assert up + down == pytest.approx(2 * half_period(g3), rel=1e-12)


def test_pole_distance_agrees_with_wp():
    # start at wp(t0) moving down: the next pole is at 2 omega - t0
    g3 = 7.0
    p = WpParams(g3)
    t0 = 0.3 * p.half_period
    F0, dF0 = wp_and_prime(p, t0)
    assert pole_distance(p, F0, dF0) == pytest.approx(2 * p.half_period - t0, rel=1e-11)


def test_pole_distance_rejects_inconsistent_data():
    with pytest.raises(InconsistentDataError):
        pole_distance(WpParams(108), 3, 1)
    with pytest.raises(InconsistentDataError):
        pole_distance(WpParams(108), 2, 0)
