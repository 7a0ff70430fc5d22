"""Equianharmonic Weierstrass function (g2 = 0) on the real line.

Solutions of ``F'^2 = 4 F^3 - g3`` are translates ``F(t) = wp(t - a)`` (or
``(t - a)^-2`` when g3 = 0), so the distance from a starting value to the
next double pole is a real quadrature.  This module supplies both views:

* :func:`wp_eval` from the Laurent series at the origin, carried to larger
  arguments by reduction modulo the real period and the duplication formula;
* :func:`half_period` and :func:`pole_distance` by adaptive Gauss-Kronrod
  quadrature after substitutions that remove the endpoint singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

__all__ = [
    "WpParams",
    "PoleError",
    "HorizonError",
    "InconsistentDataError",
    "real_root",
    "wp_eval",
    "wp_prime",
    "wp_and_prime",
    "half_period",
    "pole_distance",
]

_SERIES_TERMS = 80
_TERM_CUTOFF = 1e-17
_SERIES_FRACTION = 0.4
_HORIZON_PERIODS = 1e4
_QUAD = dict(epsabs=0.0, epsrel=1e-13, limit=200)


class PoleError(ZeroDivisionError):
    """Evaluation requested at a pole of wp."""


class HorizonError(ValueError):
    """Argument beyond the range where evaluation is trusted."""


class InconsistentDataError(ValueError):
    """(F0, F0') does not lie on the curve F'^2 = 4 F^3 - g3."""


def real_root(g3: float) -> float:
    """The real root e1 of 4 e^3 = g3."""
    return float(np.cbrt(g3 / 4.0))


@dataclass(frozen=True)
class WpParams:
    g3: float

    def __post_init__(self):
        if not math.isfinite(self.g3):
            raise ValueError("g3 must be finite")
        object.__setattr__(self, "g3", float(self.g3))

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Laurent coefficients c_k of wp = t^-2 + sum_k c_k t^(2k-2), index k."""
        c = np.zeros(_SERIES_TERMS + 1)
        c[3] = self.g3 / 28.0
        for k in range(4, _SERIES_TERMS + 1):
            s = sum(c[m] * c[k - m] for m in range(2, k - 1))
            c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
        return c

    @cached_property
    def half_period(self) -> float:
        return half_period(self.g3)

    @property
    def series_radius(self) -> float:
        return _SERIES_FRACTION * self.half_period

    @property
    def horizon(self) -> float:
        return _HORIZON_PERIODS * self.half_period


def _series(params: WpParams, t: float) -> tuple[float, float]:
    c = params.coefficients
    t2 = t * t
    val = 1.0 / t2
    der = -2.0 / (t2 * t)
    step = t2**3
    power = t2 * t2  # t^(2k-2) for k = 3
    # with g2 = 0 only every third coefficient is nonzero
    for k in range(3, _SERIES_TERMS + 1, 3):
        term = c[k] * power
        val += term
        der += (2 * k - 2) * term / t
        if abs(term * t2) < _TERM_CUTOFF:
            break
        power *= step
    return val, der


def _double(g3: float, P: float, dP: float) -> tuple[float, float]:
    # wp(2s) = 9 P^4 / (4 P^3 - g3) - 2 P, differentiated through P(s)
    P3 = P**3
    D = 4.0 * P3 - g3
    val = 9.0 * P3 * P / D - 2.0 * P
    slope = 36.0 * P3 * (P3 - g3) / (D * D) - 2.0
    return val, 0.5 * slope * dP


def wp_and_prime(params: WpParams, t: float) -> tuple[float, float]:
    """Return (wp(t), wp'(t)) for real t."""
    t = float(t)
    if t == 0.0:
        raise PoleError("wp has a double pole at t = 0")
    g3 = params.g3
    if g3 == 0.0:
        return 1.0 / (t * t), -2.0 / t**3
    sign = 1.0 if t > 0 else -1.0
    s = abs(t)
    if s > params.horizon:
        raise HorizonError(f"|t| = {s} exceeds the evaluation horizon {params.horizon}")
    omega = params.half_period
    if s > omega:
        s = math.fmod(s, 2.0 * omega)
        if s > omega:
            s = 2.0 * omega - s
            sign = -sign
        if s == 0.0:
            raise PoleError(f"t = {t} is a lattice point")
    doublings = 0
    while s > params.series_radius:
        s *= 0.5
        doublings += 1
    P, dP = _series(params, s)
    for _ in range(doublings):
        P, dP = _double(g3, P, dP)
    return P, sign * dP


def wp_eval(params: WpParams, t: float) -> float:
    return wp_and_prime(params, t)[0]


def wp_prime(params: WpParams, t: float) -> float:
    return wp_and_prime(params, t)[1]


def _near_root(g3: float, e1: float, lo: float, hi: float) -> float:
    """Integral of dF / sqrt(4F^3 - g3) over [lo, hi], lo >= e1, with F = e1 + s^2."""
    if hi <= lo:
        return 0.0

    def f(s):
        F = e1 + s * s
        return 1.0 / math.sqrt(F * F + F * e1 + e1 * e1)

    return integrate.quad(f, math.sqrt(max(lo - e1, 0.0)), math.sqrt(hi - e1), **_QUAD)[0]


def _to_infinity(g3: float, X: float) -> float:
    """Integral of dF / sqrt(4F^3 - g3) over [X, inf), X > 0, with F = u^-2."""
    U = X**-0.5
    if g3 == 0.0:
        return U
    return integrate.quad(lambda u: 2.0 / math.sqrt(4.0 - g3 * u**6), 0.0, U, **_QUAD)[0]


def _ascent(g3: float, F0: float) -> float:
    """Time for F to climb from F0 to +inf with F' > 0."""
    e1 = real_root(g3)
    split = max(F0, 2.0 * abs(e1), 1.0)
    return _near_root(g3, e1, F0, split) + _to_infinity(g3, split)


def half_period(g3: float) -> float:
    """Real half-period: the integral of dF / sqrt(4F^3 - g3) from e1 to infinity.

    Scales as ``half_period(sign(g3)) * |g3|^(-1/6)``.
    """
    g3 = float(g3)
    if g3 == 0.0:
        raise ValueError("g3 = 0 has no period lattice")
    return _ascent(g3, real_root(g3))


def pole_distance(params: WpParams, F0: float, Fdot0: float, rtol: float = 1e-8) -> float:
    """Forward time from (F0, F0') to the next pole, or ``inf`` if there is none.

    ``rtol`` is the tolerance, relative to ``max(1, 4|F0|^3, |g3|)``, for the
    initial data to satisfy ``F0'^2 = 4 F0^3 - g3``.
    """
    g3 = params.g3
    F0, Fdot0 = float(F0), float(Fdot0)
    scale = max(1.0, 4.0 * abs(F0) ** 3, abs(g3))
    rhs = 4.0 * F0**3 - g3
    if abs(Fdot0 * Fdot0 - rhs) > rtol * scale:
        raise InconsistentDataError(
            f"F0'^2 = {Fdot0 * Fdot0!r} but 4 F0^3 - g3 = {rhs!r}"
        )
    e1 = real_root(g3)
    if F0 < e1 - rtol * max(1.0, abs(e1)):
        raise InconsistentDataError(f"F0 = {F0} lies below the real root {e1}")
    F0 = max(F0, e1)

    if g3 == 0.0 and F0 == 0.0:
        # the identically zero solution
        return math.inf
    if Fdot0 > 0.0:
        return _ascent(g3, F0)
    if Fdot0 < 0.0:
        if g3 == 0.0:
            # F = (t - a)^-2 with the pole behind: decays forever
            return math.inf
        return _near_root(g3, e1, e1, F0) + _ascent(g3, e1)
    return _ascent(g3, F0)
