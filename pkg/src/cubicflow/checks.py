"""Exact identity suite for the algebra module.

Each check takes a cubic and four points and returns True when the identity
holds with exact equality.  ``run_suite`` draws integer data from a seeded
generator so a run is reproducible from its seed alone.
"""

from __future__ import annotations

import random
from typing import Callable

from . import algebra as alg
from .algebra import CubicCoeffs, Mat2, PhasePoint

Check = Callable[[CubicCoeffs, PhasePoint, PhasePoint, PhasePoint, PhasePoint], bool]


def _delta_is_minus_det(c, x, y, z, v):
    return alg.delta(c, z) == -alg.gamma(c, z).det


def _cayley_hamilton(c, x, y, z, v):
    g = alg.gamma(c, z)
    return g @ g == Mat2.identity() * alg.delta(c, z)


def _delta_of_velocity(c, x, y, z, v):
    return alg.delta(c, alg.gamma(c, z) @ z) == alg.delta(c, z) ** 2


def _gamma_symmetry(c, x, y, z, v):
    return alg.gamma(c, x) @ y == alg.gamma(c, y) @ x


def _defining_relation(c, x, y, z, v):
    return alg.trilinear(c, x, y, z) == 2 * alg.omega(x, alg.gamma(c, z) @ y)


def _reconstruction(c, x, y, z, v):
    return 3 * alg.psi_eval(c, z) == alg.omega(z, alg.gamma(c, z) @ z)


def _gradient_relation(c, x, y, z, v):
    psi_p, psi_q = alg.psi_grad(c, z)
    return alg.omega(v, alg.gamma(c, z) @ z) == psi_p * v.p + psi_q * v.q


def _field_is_gamma_z_z(c, x, y, z, v):
    return alg.hamiltonian_field(c, z) == alg.gamma(c, z) @ z


def _anticommutator(c, x, y, z, v):
    gx, gy = alg.gamma(c, x), alg.gamma(c, y)
    polar = alg.delta(c, x + y) - alg.delta(c, x) - alg.delta(c, y)
    return (gx @ gy) + (gy @ gx) == Mat2.identity() * polar


def _discriminant_identity(c, x, y, z, v):
    a, b, cc, d = c
    A, B, C = b * b - a * cc, b * cc - a * d, cc * cc - b * d
    return B * B - 4 * A * C == alg.discriminant(c)


def _second_derivative_form(c, x, y, z, v):
    psi_p, psi_q = alg.psi_grad(c, z)
    psi_pp, psi_pq, psi_qq = alg.psi_hessian(c, z)
    dz = 2 * alg.delta(c, z)
    return (
        psi_pq * psi_q - psi_p * psi_qq == dz * z.p
        and psi_pq * psi_p - psi_q * psi_pp == dz * z.q
    )


def _g3_identity(c, x, y, z, v):
    f0 = alg.delta(c, z)
    f_p, f_q = alg.delta_grad(c, z)
    psi_p, psi_q = alg.psi_grad(c, z)
    fdot = f_q * psi_p - f_p * psi_q
    return 4 * f0**3 - fdot**2 == -9 * alg.discriminant(c) * alg.psi_eval(c, z) ** 2


def _sign_proposition(c, x, y, z, v):
    if alg.delta(c, z) >= 0:
        return True
    return alg.discriminant(c) > 0 and alg.classify(c).kind is alg.CubicKind.LINE_PAIR


IDENTITIES: dict[str, Check] = {
    "delta_is_minus_det_gamma": _delta_is_minus_det,
    "gamma_squared_is_delta_identity": _cayley_hamilton,
    "delta_of_gamma_z_z_is_delta_squared": _delta_of_velocity,
    "gamma_symmetry": _gamma_symmetry,
    "trilinear_defining_relation": _defining_relation,
    "psi_reconstruction": _reconstruction,
    "gradient_relation": _gradient_relation,
    "field_is_gamma_z_z": _field_is_gamma_z_z,
    "anticommutator": _anticommutator,
    "discriminant_of_delta": _discriminant_identity,
    "second_derivative_hamilton_form": _second_derivative_form,
    "g3_equals_minus_9_disc_psi_squared": _g3_identity,
    "negative_delta_implies_line_pair": _sign_proposition,
}


def random_case(rng: random.Random, lo: int = -9, hi: int = 9):
    c = CubicCoeffs(*(rng.randint(lo, hi) for _ in range(4)))
    x, y, z, v = (PhasePoint(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(4))
    return c, x, y, z, v


def run_suite(seed: int, count: int, identities: dict[str, Check] | None = None) -> dict[str, dict[str, int]]:
    """Run ``count`` random cases through every identity; return pass/fail tallies."""
    identities = IDENTITIES if identities is None else identities
    rng = random.Random(seed)
    tally = {name: {"pass": 0, "fail": 0} for name in identities} if count else {}
    for _ in range(count):
        case = random_case(rng)
        for name, check in identities.items():
            tally[name]["pass" if check(*case) else "fail"] += 1
    return tally
