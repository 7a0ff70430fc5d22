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
# # The equianharmonic Weierstrass function as a blow-up oracle
#
# Solutions of `F'^2 = 4 F^3 - g3` are translates of `wp(t; 0, g3)`.  So the
# time to blow-up from `(F0, F0')` is a one-dimensional integral, and the
# poles of `wp` are spaced by the real period `2 omega`.

# %%
import math

import numpy as np

from cubicflow.elliptic import WpParams, half_period, pole_distance, real_root, wp_and_prime

# %% [markdown]
# ## The half-period
#
# For `g3 = 1` the half-period has the closed form `Gamma(1/3)^3 / (4 pi)`,
# and it scales as `|g3|^(-1/6)`.

# %%
closed = math.gamma(1 / 3) ** 3 / (4 * math.pi)
print(half_period(1), closed, half_period(1) - closed)
for g3 in (1e-3, 1, 108, 1e6):
    print(g3, half_period(g3), half_period(1) * g3 ** (-1 / 6))
print("negative g3:", half_period(-1) / half_period(1), "vs sqrt(3) =", math.sqrt(3))

# %% [markdown]
# ## Evaluating wp
#
# The Laurent series at the origin is summed close in, then the duplication
# formula carries it outward.  The residual of the differential equation is a
# quick health check.

# %%
p = WpParams(108.0)
ts = np.linspace(0.05, 2 * p.half_period - 0.05, 9)
for t in ts:
    P, dP = wp_and_prime(p, t)
    print(f"t={t:6.3f}  wp={P:12.6g}  residual={(dP * dP - 4 * P**3 + 108) / max(1, P**3):.1e}")

# %% [markdown]
# `wp` bottoms out at the real root `e1` halfway between poles.

# %%
print(wp_and_prime(p, p.half_period), real_root(108.0))

# %% [markdown]
# ## Pole distances
#
# Moving up, the time to the pole is the integral from `F0` to infinity.
# Moving down, the curve first falls to `e1` and then climbs.  The two add up
# to one full period.

# %%
F0 = 5.0
rate = math.sqrt(4 * F0**3 - 108)
up = pole_distance(p, F0, rate)
down = pole_distance(p, F0, -rate)
print(up, down, up + down, 2 * p.half_period)

# %% [markdown]
# With `g3 = 0` the lattice degenerates and `wp = t^-2`: a decreasing `F`
# never blows up.

# %%
flat = WpParams(0.0)
print(pole_distance(flat, 4.0, 16.0), pole_distance(flat, 4.0, -16.0))
