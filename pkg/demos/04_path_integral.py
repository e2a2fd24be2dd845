# %% [markdown]
# Oscillatory sums over cylinders
#
# I_n sums exp(i S/hbar) against the Haar mass of each level-n cylinder.  For
# an action linear in the bits the sum factorises, which gives a closed form
# to compare against.

# %%
import cmath
from fractions import Fraction

import numpy as np

from profinite import action, haar_measure, make_tower, path_integral

mu = haar_measure(make_tower("binary", 1))

# %% the separable case against its product formula
for n in (4, 8, 12, 16, 20):
    w = [2.0**-k for k in range(1, n + 1)]
    r = path_integral(mu, action(w), n=n)
    closed = np.prod([(1 + cmath.exp(1j * x)) / 2 for x in w])
    print(n, r.value, "delta", r.delta_prev, "err", abs(r.value - closed))

# %% a dense quadratic form: exact sum vs Monte Carlo
rng = np.random.default_rng(0)
num = rng.integers(-100, 101, size=(12, 12))
Q = [[Fraction(int(num[min(i, j), max(i, j)]), 100) for j in range(12)] for i in range(12)]
S = action([0] * 12, Q, hbar=0.5)
exact = path_integral(mu, S, n=12)
mc = path_integral(mu, S, "monte_carlo", 12, samples=50_000, seed=1)
print("exact", exact.value)
print("mc   ", mc.value, "+/-", mc.stderr)

# %% on a non-binary tower the cylinders carry their partition-tree codes
T = make_tower("cyclotomic", 2, 3)
print(path_integral(haar_measure(T), action([0.3, 0.9, 1.7])).value)
