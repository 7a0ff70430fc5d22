# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Which cubic Hamiltonians are complete?
#
# A binary cubic `psi(p, q) = (a p^3 + 3b p^2 q + 3c p q^2 + d q^3) / 3` defines
# a Hamiltonian flow on the plane.  The flow is complete exactly when the
# quadratic `Delta(z) = -det Gamma_z` vanishes identically, and that happens
# only for cubics of the form `Omega(w, z)^3 / 3`.  Everything here runs in
# exact rational arithmetic.

# %%
from fractions import Fraction

from cubicflow import algebra as alg
from cubicflow.algebra import CubicCoeffs, PhasePoint

# %% [markdown]
# ## Gamma and Delta at a point
#
# `Gamma_z` is a traceless 2x2 matrix, so its square is a multiple of the
# identity, and that multiple is `Delta(z)`.

# %%
c = CubicCoeffs(2, -1, Fraction(1, 3), 5)
z = PhasePoint(Fraction(3, 2), -1)
G = alg.gamma(c, z)
print("Gamma_z      =", G)
print("Gamma_z^2    =", G @ G)
print("Delta(z)     =", alg.delta(c, z))
print("-det Gamma_z =", -G.det)

# %% [markdown]
# The flow itself is `z' = Gamma_z z`, and one more application of Gamma
# squares Delta.

# %%
v = alg.hamiltonian_field(c, z)
print("field      ", v, "==", G @ z)
print("Delta(v)   ", alg.delta(c, v), "== Delta(z)^2 =", alg.delta(c, z) ** 2)

# %% [markdown]
# ## The classification
#
# The sign of the discriminant of Delta sorts the incomplete cubics by how
# many real lines Delta vanishes on.  Monomial cubics come back with their
# weight `w`.

# %%
examples = {
    "p^3 / 3": CubicCoeffs(1, 0, 0, 0),
    "(q - p)^3 / 3": CubicCoeffs(-1, 1, -1, 1),
    "p^2 q + p q^2": CubicCoeffs(0, 1, 1, 0),
    "(p^3 - q^3) / 3": CubicCoeffs(1, 0, 0, -1),
    "zero": CubicCoeffs(0, 0, 0, 0),
    "p^3 / 24": CubicCoeffs(Fraction(1, 8), 0, 0, 0),
}
for name, cubic in examples.items():
    cls = alg.classify(cubic)
    print(f"{name:18s} {cls.kind.value:17s} disc(Delta)={cls.delta_discriminant!s:6s} w={cls.weight}")

# %% [markdown]
# ## Round trip through the weight
#
# Building a cubic from a weight and recovering the weight is exact for any
# rational `w`.

# %%
w = (Fraction(-5, 3), Fraction(7, 2))
mono = alg.monomial_cubic(w)
print(mono)
print(alg.monomial_weight(mono) == PhasePoint(*w))
print("Delta coefficients vanish:", alg.delta(mono, PhasePoint(1, 0)), alg.delta(mono, PhasePoint(0, 1)))

# %% [markdown]
# ## The exact identity suite
#
# The same checks the `verify` command runs, here on a small batch.

# %%
from cubicflow.checks import run_suite

for name, tally in run_suite(seed=3, count=50).items():
    print(f"{name:40s} {tally}")
