"""Brute-force reference computations, independent of the package code paths."""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np


def totient_sieve(n):
    return [r for r in range(1, n) if math.gcd(r, n) == 1]


def automorphisms_by_permutation(table):
    """Count bijections f with f(ab) = f(a)f(b), trying every permutation."""
    t = np.asarray(table)
    n = len(t)
    count = 0
    for perm in itertools.permutations(range(n)):
        f = np.array(perm)
        if np.array_equal(f[t], t[f[:, None], f[None, :]]):
            count += 1
    return count


def count_invertible_2x2(m):
    """Matrices over Z/m that have a two-sided inverse, found by search."""
    mats = np.array(list(itertools.product(range(m), repeat=4)), dtype=np.int64)
    a, b, c, d = mats.T
    count = 0
    for A in mats:
        p, q, r, s = A
        e00 = (p * a + q * c) % m
        e01 = (p * b + q * d) % m
        e10 = (r * a + s * c) % m
        e11 = (r * b + s * d) % m
        if np.any((e00 == 1) & (e01 == 0) & (e10 == 0) & (e11 == 1)):
            count += 1
    return count


def first_diff_via_xor(x: str, y: str):
    """First differing 1-based index from the integer XOR's bit length."""
    z = int(x, 2) ^ int(y, 2)
    return None if z == 0 else len(x) - z.bit_length() + 1


def brute_path_sum(w, Q, hbar, n):
    """Direct loop over {0,1}^n with uniform mass 2^-n."""
    total = 0j
    for g in itertools.product((0, 1), repeat=n):
        s = sum(w[i] * g[i] for i in range(n))
        s += sum(Q[i][j] * g[i] * g[j] for i in range(n) for j in range(n))
        total += cmath.exp(1j * s / hbar)
    return total / 2**n


def separable_closed_form(w, hbar=1.0):
    out = 1 + 0j
    for wk in w:
        out *= (1 + cmath.exp(1j * wk / hbar)) / 2
    return out


def cyclic_units_partition(p, depth, lam):
    """Z for (Z/p^d)^x with p odd: cyclic of order phi, generator found by search.

    A character chi_j(g^a) = exp(2 pi i j a / phi) factors through level k
    iff it is trivial on the kernel of reduction mod p^k.
    """
    N = p**depth
    phi = (p - 1) * p ** (depth - 1)
    gen = next(g for g in range(2, N) if math.gcd(g, N) == 1
               and len({pow(g, a, N) for a in range(phi)}) == phi)
    log = {pow(gen, a, N): a for a in range(phi)}
    total = 0.0
    for j in range(phi):
        level = 0
        for k in range(0, depth + 1):
            mod = p**k
            kernel = [x for x in log if x % mod == 1 % mod]
            if all((j * log[x]) % phi == 0 for x in kernel):
                level = k
                break
        total += math.exp(-lam * level)
    return total
