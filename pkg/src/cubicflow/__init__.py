"""Homogeneous cubic Hamiltonians on the symplectic plane.

The flow of psi is complete exactly when its determinant quadratic Delta
vanishes identically (psi a monomial); otherwise every non-constant integral
curve escapes to infinity in finite time.  ``algebra`` holds the exact
constructions, ``dynamics`` the numerical flow, ``elliptic`` the
Weierstrass-function oracle for pole times.
"""

from .algebra import (
    CubicClass,
    CubicCoeffs,
    CubicKind,
    Mat2,
    NotMonomialError,
    PhasePoint,
    classify,
    delta,
    discriminant,
    gamma,
    gamma_w,
    hamiltonian_field,
    monomial_cubic,
    monomial_weight,
    omega,
    psi_eval,
    psi_grad,
    trilinear,
)
from .dynamics import (
    IntegratorConfig,
    OrbitClass,
    OrbitReport,
    Trajectory,
    classify_initial,
    estimate_blowup,
    f_dot,
    integrate,
    residual_report,
    zero_energy_check,
)
from .elliptic import WpParams, half_period, pole_distance, wp_eval

__version__ = "0.1.0"
