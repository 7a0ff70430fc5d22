"""Integral curves of the cubic Hamiltonian field and their diagnostics.

The flow ``(p', q') = (-psi_q, psi_p)`` is integrated in both time directions
from ``t = 0`` with an embedded Runge-Kutta 5(4) pair.  A direction stops
early once ``max(|p|, |q|)`` reaches ``blowup_norm``; the pole time is then
extrapolated from ``F = Delta(z)``, which behaves like ``(t - t*)^-2`` there.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import BPoly

from . import algebra as alg
from .algebra import CubicCoeffs, PhasePoint, Scalar
from .elliptic import WpParams, pole_distance

log = logging.getLogger(__name__)

__all__ = [
    "IntegratorConfig",
    "TrajectorySample",
    "Termination",
    "TerminationKind",
    "Trajectory",
    "OrbitClass",
    "OrbitReport",
    "BlowupFitError",
    "f_dot",
    "classify_initial",
    "integrate",
    "estimate_blowup",
    "residual_report",
    "zero_energy_check",
    "write_csv",
]

_TAIL = 6


class BlowupFitError(ValueError):
    """Tail samples do not look like an approach to a double pole of F."""


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    blowup_norm: float = 1e8
    t_span: tuple[float, float] = (-10.0, 10.0)
    max_samples: int = 100_000

    def __post_init__(self):
        t0, t1 = self.t_span
        object.__setattr__(self, "t_span", (float(t0), float(t1)))
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.blowup_norm > 0:
            raise ValueError("blowup_norm must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if not t0 <= 0.0 <= t1:
            raise ValueError(f"t_span {self.t_span} must contain 0")
        if self.max_samples < 2 * _TAIL:
            raise ValueError(f"max_samples must be at least {2 * _TAIL}")


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    z: PhasePoint
    psi: float
    F: float
    Fdot: float


class TerminationKind(enum.Enum):
    SPAN_COMPLETED = "SpanCompleted"
    BLOWUP_FORWARD = "BlowUpForward"
    BLOWUP_BACKWARD = "BlowUpBackward"
    STEP_UNDERFLOW = "StepUnderflow"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    t_end: float
    t_est: float | None = None

    @property
    def blowup(self) -> bool:
        return self.kind in (TerminationKind.BLOWUP_FORWARD, TerminationKind.BLOWUP_BACKWARD)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of one maximal-as-requested integral curve, in increasing time.

    ``z`` has shape (n, 2); ``psi``, ``F`` and ``Fdot`` are recomputed from
    ``z`` at each sample.  ``backward`` and ``forward`` record how each time
    direction ended.
    """

    cubic: CubicCoeffs
    t: np.ndarray
    z: np.ndarray
    psi: np.ndarray
    F: np.ndarray
    Fdot: np.ndarray
    backward: Termination
    forward: Termination
    g3: float

    def __post_init__(self):
        for name in ("t", "z", "psi", "F", "Fdot"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def samples(self) -> list[TrajectorySample]:
        return [
            TrajectorySample(float(t), PhasePoint(float(p), float(q)), float(s), float(f), float(fd))
            for t, (p, q), s, f, fd in zip(self.t, self.z, self.psi, self.F, self.Fdot)
        ]

    @property
    def terminations(self) -> tuple[Termination, Termination]:
        return self.backward, self.forward

    @property
    def blew_up(self) -> bool:
        return self.backward.blowup or self.forward.blowup

    @property
    def span_completed(self) -> bool:
        return all(x.kind is TerminationKind.SPAN_COMPLETED for x in self.terminations)

    def velocity(self) -> np.ndarray:
        return _Field(self.cubic).array(self.z)


class OrbitClass(enum.Enum):
    CRITICAL = "Critical"
    ZERO_ENERGY = "ZeroEnergy"
    GENERIC = "Generic"


@dataclass(frozen=True)
class OrbitReport:
    initial_class: OrbitClass
    psi0: float
    F0: float
    Fdot0: float
    g3: float
    g3_invariant: float
    predicted_pole_forward: float | None
    predicted_pole_backward: float | None

    def to_json(self) -> dict:
        out = asdict(self)
        out["initial_class"] = self.initial_class.value
        return out


def f_dot(c: CubicCoeffs, z) -> Scalar:
    """Time derivative of F = Delta(z) along the flow: F_q psi_p - F_p psi_q."""
    F_p, F_q = alg.delta_grad(c, z)
    psi_p, psi_q = alg.psi_grad(c, z)
    return F_q * psi_p - F_p * psi_q


class _Field:
    """Float evaluation of the Hamiltonian field for integration.

    An exactly monomial cubic is evaluated in factored form
    ``z' = -Omega(w, z)^2 w``: rounding its coefficients to floats would
    otherwise leave Delta slightly nonzero, i.e. an incomplete neighbour.
    """

    def __init__(self, c: CubicCoeffs):
        self.a, self.b, self.c, self.d = (float(x) for x in c)
        self.w = None
        if c.exact and not c.is_zero():
            try:
                w = alg.monomial_weight(c)
            except alg.NotMonomialError:
                pass
            else:
                self.w = (float(w.p), float(w.q))

    def __call__(self, t, y):
        p, q = y
        if self.w is not None:
            w1, w2 = self.w
            s = w1 * q - w2 * p
            return [-s * s * w1, -s * s * w2]
        a, b, c, d = self.a, self.b, self.c, self.d
        return [-(b * p * p + 2 * c * p * q + d * q * q), a * p * p + 2 * b * p * q + c * q * q]

    def array(self, z: np.ndarray) -> np.ndarray:
        p, q = z[..., 0], z[..., 1]
        if self.w is not None:
            w1, w2 = self.w
            s2 = (w1 * q - w2 * p) ** 2
            return np.stack([-s2 * w1, -s2 * w2], axis=-1)
        return np.stack(self(None, (p, q)), axis=-1)


def _pole_or_none(params: WpParams, F0: float, Fdot0: float) -> float | None:
    t = pole_distance(params, F0, Fdot0)
    return None if math.isinf(t) else t


def classify_initial(c: CubicCoeffs, z0: PhasePoint) -> OrbitReport:
    """Initial-point verdict, g3 from (F0, F0'), and predicted poles both ways.

    The class and g3 are computed in the regime of the inputs, so exact
    rationals give exact zero tests.  Poles come from the elliptic quadrature;
    ``None`` means no pole in that direction.
    """
    psi0 = alg.psi_eval(c, z0)
    F0 = alg.delta(c, z0)
    Fd0 = f_dot(c, z0)
    g3 = 4 * F0**3 - Fd0**2
    g3_inv = -9 * alg.discriminant(c) * psi0**2
    if alg.hamiltonian_field(c, z0).is_zero():
        kind = OrbitClass.CRITICAL
    elif psi0 == 0:
        kind = OrbitClass.ZERO_ENERGY
    else:
        kind = OrbitClass.GENERIC

    fwd = bwd = None
    if kind is not OrbitClass.CRITICAL:
        params = WpParams(float(g3))
        fwd = _pole_or_none(params, float(F0), float(Fd0))
        back = _pole_or_none(params, float(F0), -float(Fd0))
        bwd = None if back is None else -back
    return OrbitReport(kind, float(psi0), float(F0), float(Fd0), float(g3), float(g3_inv), fwd, bwd)


def estimate_blowup(tail: Sequence[TrajectorySample]) -> float:
    """Pole time t* from a least-squares line through (t, F^-1/2).

    ``tail`` is ordered in the direction of approach, so F must be positive
    and strictly increasing along it.
    """
    if len(tail) < 3:
        raise BlowupFitError("need at least three tail samples")
    t = np.array([s.t for s in tail], dtype=float)
    F = np.array([s.F for s in tail], dtype=float)
    if np.any(F <= 0) or np.any(np.diff(F) <= 0):
        raise BlowupFitError("F must be positive and strictly increasing on the tail")
    slope, intercept = np.polyfit(t, F**-0.5, 1)
    return float(-intercept / slope)


def _direction(rhs: _Field, z0: np.ndarray, t_end: float, cfg: IntegratorConfig):
    norm = cfg.blowup_norm

    def escape(t, y):
        return max(abs(y[0]), abs(y[1])) - norm

    escape.terminal = True

    sol = solve_ivp(rhs, (0.0, t_end), z0, method="RK45", rtol=cfg.rel_tol,
                    atol=cfg.abs_tol, max_step=cfg.max_step, events=escape)
    forward = t_end >= 0
    if sol.status == 1:
        kind = TerminationKind.BLOWUP_FORWARD if forward else TerminationKind.BLOWUP_BACKWARD
    elif sol.status == 0:
        kind = TerminationKind.SPAN_COMPLETED
    elif "step size" in sol.message:
        kind = TerminationKind.STEP_UNDERFLOW
    else:  # pragma: no cover - scipy reports nothing else for RK45
        raise RuntimeError(sol.message)
    return sol.t, sol.y.T, kind


def _thin(t: np.ndarray, z: np.ndarray, limit: int) -> tuple[np.ndarray, np.ndarray]:
    if len(t) <= limit:
        return t, z
    # keep the start and an untouched tail for the blow-up fit
    head = np.unique(np.linspace(0, len(t) - _TAIL - 1, limit - _TAIL).round().astype(int))
    keep = np.concatenate([head, np.arange(len(t) - _TAIL, len(t))])
    return t[keep], z[keep]


def _delta_float(c: CubicCoeffs, p, q):
    # coefficients of Delta formed before rounding, so they vanish exactly
    # for exact monomial cubics
    a, b, cc, d = c
    A, B, C = (float(x) for x in (b * b - a * cc, b * cc - a * d, cc * cc - b * d))
    F = A * p * p + B * p * q + C * q * q
    return F, (2 * A * p + B * q, B * p + 2 * C * q)


def _diagnostics(c: CubicCoeffs, z: np.ndarray):
    p, q = z[:, 0], z[:, 1]
    cf = c.to_float()
    F, (F_p, F_q) = _delta_float(c, p, q)
    psi_p, psi_q = alg.psi_grad(cf, (p, q))
    return alg.psi_eval(cf, (p, q)), F, F_q * psi_p - F_p * psi_q


def integrate(c: CubicCoeffs, z0: PhasePoint, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate the Hamiltonian flow from ``z0`` over ``cfg.t_span``."""
    cfg = cfg or IntegratorConfig()
    F0, Fd0 = alg.delta(c, z0), f_dot(c, z0)
    g3 = float(4 * F0**3 - Fd0**2)
    start = np.array([float(z0.p), float(z0.q)])
    t0, t1 = cfg.t_span

    if alg.hamiltonian_field(c, z0).is_zero():
        t = np.array(sorted({t0, 0.0, t1}))
        z = np.tile(start, (len(t), 1))
        done = TerminationKind.SPAN_COMPLETED
        psi, F, Fdot = _diagnostics(c, z)
        return Trajectory(c, t, z, psi, F, Fdot, Termination(done, t0), Termination(done, t1), g3)

    rhs = _Field(c)
    limit = cfg.max_samples // 2
    ends = {}
    pieces = []
    for t_end in (t0, t1):
        if t_end == 0.0:
            ts, zs, kind = np.array([0.0]), start[None, :], TerminationKind.SPAN_COMPLETED
        else:
            ts, zs, kind = _direction(rhs, start, t_end, cfg)
        ts, zs = _thin(ts, zs, limit)
        t_est = None
        if kind in (TerminationKind.BLOWUP_FORWARD, TerminationKind.BLOWUP_BACKWARD):
            t_est = _fit_tail(c, ts, zs)
        ends[t_end] = Termination(kind, float(ts[-1]), t_est)
        pieces.append((ts, zs))

    (tb, zb), (tf, zf) = pieces
    t = np.concatenate([tb[:0:-1], tf])
    z = np.concatenate([zb[:0:-1], zf])
    psi, F, Fdot = _diagnostics(c, z)
    return Trajectory(c, t, z, psi, F, Fdot, ends[t0], ends[t1], g3)


def _fit_tail(c: CubicCoeffs, ts: np.ndarray, zs: np.ndarray) -> float:
    _, F, Fdot = _diagnostics(c, zs[-_TAIL:])
    tail = [TrajectorySample(float(t), PhasePoint(*map(float, z)), math.nan, float(f), float(fd))
            for t, z, f, fd in zip(ts[-_TAIL:], zs[-_TAIL:], F, Fdot)]
    # drop leading samples until F increases monotonically towards the end
    while len(tail) > 3:
        try:
            return estimate_blowup(tail)
        except BlowupFitError:
            tail = tail[1:]
    try:
        return estimate_blowup(tail)
    except BlowupFitError:
        log.warning("blow-up tail unusable for a pole fit; reporting last time reached")
        return float(ts[-1])


def _resample(traj: Trajectory, step_fraction: float):
    t, z = traj.t, traj.z
    zdot = _Field(traj.cubic).array(z)
    zddot = 2.0 * traj.F[:, None] * z
    n = int(round(1.0 / step_fraction))
    grid = np.linspace(t[0], t[-1], n + 1)
    h = grid[1] - grid[0]
    derivs = np.stack([z, zdot, zddot], axis=1)  # (n, 3, 2)
    interp = BPoly.from_derivatives(t, derivs)
    return grid, h, interp(grid)


def residual_report(traj: Trajectory, step_fraction: float = 1e-3) -> dict[str, float]:
    """Maximum residuals of the conservation laws and second-order equations.

    ``energy``           max |psi(z_t) - psi(z_0)| over samples
    ``second_order``     max ||z'' - 2 F z||_inf, z'' by centered differences
    ``theorem_F``        max |F'' - 6 F^2|, F'' by centered differences
    ``first_integral``   max |F'^2 - 4 F^3 + g3| with analytic F'
    ``g3_identity``      |g3 + 9 disc psi_0^2|

    Finite differences use a uniform grid with step ``step_fraction`` of the
    time span, filled by Hermite interpolation of the samples (matching
    position, velocity and acceleration at each sample).  Keys ending in
    ``_rel`` divide each pointwise residual by ``max(1, |reference term|)``.
    """
    if len(traj) < 5:
        raise ValueError("residual_report needs at least five samples")
    cf = traj.cubic.to_float()
    i0 = int(np.argmin(np.abs(traj.t)))
    psi0 = alg.psi_eval(cf, tuple(traj.z[i0]))
    out = {"energy": float(np.max(np.abs(traj.psi - psi0)))}

    grid, h, zg = _resample(traj, step_fraction)
    Fg, _ = _delta_float(traj.cubic, zg[:, 0], zg[:, 1])
    zdd = (zg[2:] - 2 * zg[1:-1] + zg[:-2]) / h**2
    Fdd = (Fg[2:] - 2 * Fg[1:-1] + Fg[:-2]) / h**2
    two_Fz = 2 * Fg[1:-1, None] * zg[1:-1]
    six_F2 = 6 * Fg[1:-1] ** 2
    res_a = np.max(np.abs(zdd - two_Fz), axis=1)
    res_b = np.abs(Fdd - six_F2)
    out["second_order"] = float(res_a.max())
    out["second_order_rel"] = float(np.max(res_a / np.maximum(1.0, np.max(np.abs(two_Fz), axis=1))))
    out["theorem_F"] = float(res_b.max())
    out["theorem_F_rel"] = float(np.max(res_b / np.maximum(1.0, six_F2)))

    cubic_term = 4 * traj.F**3
    res_c = np.abs(traj.Fdot**2 - cubic_term + traj.g3)
    out["first_integral"] = float(res_c.max())
    out["first_integral_rel"] = float(np.max(res_c / np.maximum(1.0, np.abs(cubic_term))))
    disc = float(alg.discriminant(traj.cubic))
    out["g3_identity"] = abs(traj.g3 + 9 * disc * psi0**2)
    return out


def zero_energy_check(c: CubicCoeffs, traj: Trajectory, tol: float = 1e-12) -> dict[str, float]:
    """Residuals of the zero-energy structure z' = lambda z with lambda' = F = lambda^2.

    ``parallel`` is max |Omega(z, z')| (which is 3 psi), ``lambda`` is
    max |lambda^2 - F| with lambda = <z', z> / <z, z>.
    """
    cf = c.to_float()
    i0 = int(np.argmin(np.abs(traj.t)))
    z0 = traj.z[i0]
    psi0 = alg.psi_eval(cf, tuple(z0))
    scale = max(1.0, float(np.max(np.abs(z0)))) ** 3 * max(1.0, *(abs(x) for x in cf))
    if abs(psi0) > tol * scale:
        raise ValueError(f"psi(z0) = {psi0} is not zero")
    if not np.any(z0):
        raise ValueError("z0 must be nonzero")
    z = traj.z
    zdot = _Field(c).array(z)
    par = z[:, 0] * zdot[:, 1] - z[:, 1] * zdot[:, 0]
    lam = np.sum(zdot * z, axis=1) / np.sum(z * z, axis=1)
    return {
        "parallel": float(np.max(np.abs(par))),
        "lambda": float(np.max(np.abs(lam**2 - traj.F))),
    }


def write_csv(traj: Trajectory, path) -> None:
    """Write ``t,p,q,psi,F,Fdot`` rows at full double precision."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "p", "q", "psi", "F", "Fdot"])
        for row in zip(traj.t, traj.z[:, 0], traj.z[:, 1], traj.psi, traj.F, traj.Fdot):
            w.writerow([format(float(x), ".17g") for x in row])
