"""Pointwise constructions for a homogeneous cubic on the symplectic plane.

Everything here works in two scalar regimes: exact rationals
(:class:`fractions.Fraction`, with plain ints promoted on construction) and
Python floats.  Mixing the two yields floats.

Coordinates are fixed once and for all: a point is ``z = p u + q v`` with
``Omega(u, v) = 1``, so ``Omega(x, y) = x.p * y.q - x.q * y.p``.  The cubic is

    psi(z) = (a p^3 + 3 b p^2 q + 3 c p q^2 + d q^3) / 3.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[Fraction, float]

__all__ = [
    "Scalar",
    "CubicCoeffs",
    "PhasePoint",
    "Mat2",
    "CubicKind",
    "CubicClass",
    "NotMonomialError",
    "omega",
    "psi_eval",
    "psi_grad",
    "psi_hessian",
    "trilinear",
    "gamma",
    "hamiltonian_field",
    "delta",
    "delta_grad",
    "discriminant",
    "classify",
    "monomial_weight",
    "monomial_cubic",
    "gamma_w",
]


class NotMonomialError(ValueError):
    """The cubic is not of the form (1/3) Omega(w, z)^3."""


def _scalar(x) -> Scalar:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    # numpy scalars and friends
    return float(x)


def is_exact(*values) -> bool:
    return all(isinstance(v, Fraction) for v in values)


@dataclass(frozen=True)
class PhasePoint:
    """A point (or vector) of the plane in the fixed symplectic basis."""

    p: Scalar
    q: Scalar

    def __post_init__(self):
        object.__setattr__(self, "p", _scalar(self.p))
        object.__setattr__(self, "q", _scalar(self.q))

    def __iter__(self) -> Iterator[Scalar]:
        yield self.p
        yield self.q

    def __add__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.p + other.p, self.q + other.q)

    def __sub__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.p - other.p, self.q - other.q)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.p, -self.q)

    def __mul__(self, s) -> PhasePoint:
        s = _scalar(s)
        return PhasePoint(s * self.p, s * self.q)

    __rmul__ = __mul__

    @property
    def exact(self) -> bool:
        return is_exact(self.p, self.q)

    def to_float(self) -> PhasePoint:
        return PhasePoint(float(self.p), float(self.q))

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    @classmethod
    def parse(cls, text: str) -> PhasePoint:
        """Parse ``"p,q"``; each entry may be an integer, ``n/m`` or a decimal."""
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected two comma-separated numbers, got {text!r}")
        return cls(*(Fraction(s.strip()) for s in parts))


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of psi = (a p^3 + 3b p^2 q + 3c p q^2 + d q^3) / 3."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _scalar(getattr(self, name)))

    def __iter__(self) -> Iterator[Scalar]:
        yield from (self.a, self.b, self.c, self.d)

    @property
    def exact(self) -> bool:
        return is_exact(*self)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self)

    def to_float(self) -> CubicCoeffs:
        return CubicCoeffs(*(float(x) for x in self))

    @classmethod
    def parse(cls, text: str) -> CubicCoeffs:
        """Parse ``"a,b,c,d"`` with each entry ``n`` or ``n/m``.

        Only integers and integer ratios are accepted so the result is
        always exact.
        """
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated rationals, got {text!r}")
        return cls(*(_parse_rational(s) for s in parts))

    @classmethod
    def from_json(cls, payload: str | dict) -> CubicCoeffs:
        if isinstance(payload, str):
            payload = json.loads(payload)
        try:
            return cls(*(_parse_rational(str(payload[k])) for k in "abcd"))
        except KeyError as exc:
            raise ValueError(f"missing coefficient {exc.args[0]!r}") from None

    def to_json(self) -> dict:
        return {k: str(v) for k, v in zip("abcd", self)}


def _parse_rational(s: str) -> Fraction:
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        m = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form n or n/m: {s!r}") from None
    if m == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(n, m)


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix ``[[m00, m01], [m10, m11]]`` acting on (p, q) columns."""

    m00: Scalar
    m01: Scalar
    m10: Scalar
    m11: Scalar

    @classmethod
    def identity(cls) -> Mat2:
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @property
    def trace(self) -> Scalar:
        return self.m00 + self.m11

    @property
    def det(self) -> Scalar:
        return self.m00 * self.m11 - self.m01 * self.m10

    def __matmul__(self, other):
        if isinstance(other, PhasePoint):
            return PhasePoint(
                self.m00 * other.p + self.m01 * other.q,
                self.m10 * other.p + self.m11 * other.q,
            )
        return Mat2(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
        )

    def __add__(self, other: Mat2) -> Mat2:
        return Mat2(self.m00 + other.m00, self.m01 + other.m01,
                    self.m10 + other.m10, self.m11 + other.m11)

    def __mul__(self, s) -> Mat2:
        return Mat2(s * self.m00, s * self.m01, s * self.m10, s * self.m11)

    __rmul__ = __mul__

    def __iter__(self):
        yield from (self.m00, self.m01, self.m10, self.m11)


def omega(x: PhasePoint, y: PhasePoint) -> Scalar:
    """The symplectic form, with Omega(u, v) = 1."""
    return x.p * y.q - x.q * y.p


def _third(x: Scalar) -> Scalar:
    return x / 3 if isinstance(x, Fraction) else x / 3.0


def psi_eval(c: CubicCoeffs, z: PhasePoint) -> Scalar:
    p, q = z
    return _third(c.a * p**3 + 3 * c.b * p**2 * q + 3 * c.c * p * q**2 + c.d * q**3)


def psi_grad(c: CubicCoeffs, z: PhasePoint) -> tuple[Scalar, Scalar]:
    """Partial derivatives (psi_p, psi_q)."""
    p, q = z
    return (
        c.a * p * p + 2 * c.b * p * q + c.c * q * q,
        c.b * p * p + 2 * c.c * p * q + c.d * q * q,
    )


def psi_hessian(c: CubicCoeffs, z: PhasePoint) -> tuple[Scalar, Scalar, Scalar]:
    """Second partials (psi_pp, psi_pq, psi_qq)."""
    p, q = z
    return 2 * (c.a * p + c.b * q), 2 * (c.b * p + c.c * q), 2 * (c.c * p + c.d * q)


def trilinear(c: CubicCoeffs, x: PhasePoint, y: PhasePoint, z: PhasePoint) -> Scalar:
    """Full polarization of psi by inclusion-exclusion; Psi(z, z, z) = 6 psi(z)."""
    f = lambda w: psi_eval(c, w)  # noqa: E731
    return (
        f(x + y + z)
        - (f(y + z) + f(z + x) + f(x + y))
        + f(x) + f(y) + f(z)
    )


def gamma(c: CubicCoeffs, z: PhasePoint) -> Mat2:
    """The traceless map Gamma_z with Psi(x, y, z) = 2 Omega(x, Gamma_z y).

    In the fixed basis the Hessian of psi equals ``2 J Gamma_z`` with
    ``J = [[0, 1], [-1, 0]]``, which gives the entries below.
    """
    p, q = z
    s = c.b * p + c.c * q
    return Mat2(-s, -(c.c * p + c.d * q), c.a * p + c.b * q, s)


def hamiltonian_field(c: CubicCoeffs, z: PhasePoint) -> PhasePoint:
    """Velocity (p', q') = (-psi_q, psi_p); equal to Gamma_z z."""
    psi_p, psi_q = psi_grad(c, z)
    return PhasePoint(-psi_q, psi_p)


def delta(c: CubicCoeffs, z: PhasePoint) -> Scalar:
    """Delta(z) = -det Gamma_z, a binary quadratic form in z."""
    p, q = z
    a, b, cc, d = c
    return (b * b - a * cc) * p * p + (b * cc - a * d) * p * q + (cc * cc - b * d) * q * q


def delta_grad(c: CubicCoeffs, z: PhasePoint) -> tuple[Scalar, Scalar]:
    p, q = z
    a, b, cc, d = c
    A, B, C = b * b - a * cc, b * cc - a * d, cc * cc - b * d
    return 2 * A * p + B * q, B * p + 2 * C * q


def discriminant(c: CubicCoeffs) -> Scalar:
    """Discriminant of the binary cubic a p^3 + 3b p^2 q + 3c p q^2 + d q^3."""
    a, b, cc, d = c
    return (
        a * a * d * d
        - 3 * b * b * cc * cc
        + 4 * a * cc**3
        + 4 * b**3 * d
        - 6 * a * b * cc * d
    )


class CubicKind(enum.Enum):
    ZERO = "Zero"
    MONOMIAL_COMPLETE = "MonomialComplete"
    LINE_PAIR = "LinePair"
    SINGLE_LINE = "SingleLine"
    DEFINITE = "Definite"


@dataclass(frozen=True)
class CubicClass:
    kind: CubicKind
    delta_discriminant: Scalar
    weight: PhasePoint | None = None

    @property
    def complete(self) -> bool:
        """Whether the Hamiltonian flow is defined for all time."""
        return self.kind in (CubicKind.ZERO, CubicKind.MONOMIAL_COMPLETE)


def _monomial_identities(c: CubicCoeffs, tol: float | None) -> bool:
    a, b, cc, d = c
    lhs_rhs = ((b * b, a * cc), (cc * cc, b * d), (b * cc, a * d))
    if tol is None:
        return all(x == y for x, y in lhs_rhs)
    scale = max(1.0, *(abs(float(x)) for x in c)) ** 2
    return all(abs(float(x) - float(y)) <= tol * scale for x, y in lhs_rhs)


def classify(c: CubicCoeffs) -> CubicClass:
    """Decide completeness and the sign pattern of Delta.

    Requires exact coefficients: the zero tests here must not depend on a
    floating-point tolerance.
    """
    if not c.exact:
        raise TypeError("classify needs exact rational coefficients")
    disc = discriminant(c)
    if c.is_zero():
        return CubicClass(CubicKind.ZERO, disc)
    if _monomial_identities(c, None):
        return CubicClass(CubicKind.MONOMIAL_COMPLETE, disc, monomial_weight(c))
    if disc > 0:
        kind = CubicKind.LINE_PAIR
    elif disc == 0:
        kind = CubicKind.SINGLE_LINE
    else:
        kind = CubicKind.DEFINITE
    return CubicClass(kind, disc)


def _icbrt(n: int) -> int:
    """Floor of the real cube root of a non-negative integer."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def _exact_cbrt(x: Fraction) -> Fraction | None:
    sign = -1 if x < 0 else 1
    n, m = abs(x.numerator), x.denominator
    rn, rm = _icbrt(n), _icbrt(m)
    if rn**3 == n and rm**3 == m:
        return sign * Fraction(rn, rm)
    return None


def _cbrt(x: Scalar) -> Scalar:
    if isinstance(x, Fraction):
        r = _exact_cbrt(x)
        if r is not None:
            return r
    return math.copysign(abs(float(x)) ** (1.0 / 3.0), float(x))


def monomial_weight(c: CubicCoeffs, tol: float = 1e-12) -> PhasePoint:
    """The unique w with psi(z) = Omega(w, z)^3 / 3.

    ``a p^3 + 3b p^2 q + 3c p q^2 + d q^3 = (lam p + mu q)^3`` with
    ``lam^3 = a`` and ``mu^3 = d``; since ``Omega(w, z) = w.p q - w.q p`` this
    gives ``w = (mu, -lam)``.  Roots are exact when a and d are cubes of
    rationals, otherwise floats.  ``tol`` (relative) only applies to float
    coefficients.
    """
    if not _monomial_identities(c, None if c.exact else tol):
        raise NotMonomialError(f"{tuple(map(str, c))} is not a monomial cubic")
    lam, mu = _cbrt(c.a), _cbrt(c.d)
    if c.a == 0 and c.d == 0:
        # identities force b = c = 0 too
        return PhasePoint(0, 0)
    return PhasePoint(mu, -lam)


def monomial_cubic(w: PhasePoint) -> CubicCoeffs:
    """Coefficients of Omega(w, z)^3 / 3 = (w.p q - w.q p)^3 / 3."""
    w1, w2 = w
    return CubicCoeffs(-(w2**3), w2 * w2 * w1, -w2 * w1 * w1, w1**3)


def gamma_w(w: PhasePoint, z: PhasePoint, v: PhasePoint) -> PhasePoint:
    """Gamma_z v for the monomial cubic of weight w: Omega(z,w) Omega(w,v) w."""
    return (omega(z, w) * omega(w, v)) * w
