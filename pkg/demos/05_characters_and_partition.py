# %% [markdown]
# Characters, conductor levels and Frobenius correlations
#
# Each character of the top level of a cyclotomic tower factors through some
# smallest level; weighting by exp(-lambda * level) gives a partition function
# and averages of Frobenius values.

# %%
import math
from collections import Counter

import numpy as np

from profinite import (characters, conductor_level, frobenius_correlation, make_tower,
                       partition_function)

T = make_tower("cyclotomic", 3, 3)
chars = characters(T.levels[-1])
print(len(chars), "characters; levels:", Counter(conductor_level(c, T) for c in chars))

# %% orthogonality
M = np.array([c.values() for c in chars])
print("max |<chi, chi'> - delta| =", np.abs(M @ M.conj().T / len(chars) - np.eye(len(chars))).max())

# %% the partition function falls as lambda grows
for lam in (0.0, math.log(2), 1.0, 3.0):
    print(f"lambda={lam:.3f}  Z={partition_function(T, lam):.6f}")

# %% Frobenius correlations
T5 = make_tower("cyclotomic", 1, 5)
for primes in ([2], [11], [2, 3], [2, 2, 2, 2]):
    print(primes, frobenius_correlation(T5, primes, 0.0))
