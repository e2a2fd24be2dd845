"""Cylinder measures, oscillatory path sums, characters and partition functions.

The path sum over level-n cylinders is

    I_n = sum_gamma exp(i S[gamma] / hbar) * mass(gamma)

where gamma is the bit vector attached to a cylinder (the word itself on the
binary tower, the right-zero-padded partition-tree code elsewhere) and
``S[gamma] = gamma^T Q gamma + w^T gamma``.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (GroupMismatch, KindMismatch, LengthMismatch, LevelOrder,
                     NotAbelian, SizeLimit, TowerMismatch)
from .finite_group import FiniteGroup, abelian_decomposition, frobenius_element, MAX_ORDER
from .matrioshka import build_partition_tree
from .metric import as_word
from .tower import Cylinder, Tower

EXACT_LIMIT = 24
CHUNK = 1 << 16
WORKERS_ENV = "PROFINITE_WORKERS"


# -- measures ------------------------------------------------------------------

class CylinderMeasure:
    """Uniform (Haar) mass ``1/|G_k|`` on every level-k point.

    On the binary tower level k is ``{0,1}^k`` for every k, so masses are
    available beyond the materialised depth.
    """

    def __init__(self, tower: Tower):
        self.tower = tower

    def level_order(self, k: int) -> int:
        if k == 0:
            return 1
        if self.tower.kind_tag == "binary":
            return 2**k
        return self.tower.level(k).order

    def level_mass(self, k: int, index: int = 0) -> Fraction:
        return Fraction(1, self.level_order(k))

    def total_mass(self, k: int) -> Fraction:
        return sum((self.level_mass(k, i) for i in range(self.level_order(k))), Fraction(0))

    def compatibility_failures(self):
        """Bonds k and points y where the fiber mass differs from the mass of y."""
        bad = []
        for k in range(0, self.tower.depth):
            for y, fiber in enumerate(self.tower.fibers(k)):
                up = sum((self.level_mass(k + 1, x) for x in fiber), Fraction(0))
                if up != self.level_mass(k, y):
                    bad.append((k, y))
        return bad


def haar_measure(T: Tower) -> CylinderMeasure:
    return CylinderMeasure(T)


def cylinder_mass(mu: CylinderMeasure, Z: Cylinder) -> Fraction:
    if Z.tower != mu.tower:
        raise TowerMismatch("cylinder belongs to another tower")
    if Z.level == 0:
        return Fraction(1)
    return mu.level_mass(Z.level, Z.base.index)


# -- actions ---------------------------------------------------------------------

@dataclass(frozen=True)
class ActionFunctional:
    Q: tuple
    w: tuple
    hbar: float = 1.0

    def __post_init__(self):
        n = len(self.w)
        if len(self.Q) != n or any(len(r) != n for r in self.Q):
            raise LengthMismatch(f"Q must be {n}x{n}")
        if any(self.Q[i][j] != self.Q[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Q must be symmetric")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    @property
    def dimension(self) -> int:
        return len(self.w)

    def terms(self):
        """Nonzero (coefficient, i, j) with i <= j such that S = sum c * g_i * g_j."""
        n = self.dimension
        out = []
        for i in range(n):
            c = self.w[i] + self.Q[i][i]
            if c:
                out.append((float(c), i, i))
            for j in range(i + 1, n):
                if self.Q[i][j]:
                    out.append((float(2 * self.Q[i][j]), i, j))
        return out


def action(w, Q=None, hbar=1.0) -> ActionFunctional:
    w = tuple(Fraction(x) for x in w)
    n = len(w)
    if Q is None:
        Q = [[0] * n for _ in range(n)]
    Q = tuple(tuple(Fraction(x) for x in row) for row in Q)
    return ActionFunctional(Q, w, float(hbar))


def action_eval(S: ActionFunctional, gamma) -> float:
    g = [int(b) for b in as_word(gamma)]
    if len(g) != S.dimension:
        raise LengthMismatch(f"word of length {len(g)} for action of dimension {S.dimension}")
    n = S.dimension
    quad = sum((S.Q[i][j] * g[i] * g[j] for i in range(n) for j in range(n)), Fraction(0))
    lin = sum((S.w[i] * g[i] for i in range(n)), Fraction(0))
    return float(quad + lin)


def parse_action(text: str) -> ActionFunctional:
    """Read ``hbar <x>``, ``w <w1> ... <wn>`` and an optional ``Q`` block of n rows."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    hbar, w, Q = 1.0, None, None
    i = 0
    while i < len(lines):
        head, *rest = lines[i]
        if head == "hbar":
            hbar = float(rest[0])
        elif head == "w":
            w = rest
        elif head == "Q":
            if w is None:
                raise ValueError("Q block must follow the w line")
            Q = lines[i + 1:i + 1 + len(w)]
            i += len(w)
        else:
            raise ValueError(f"unknown action line {head!r}")
        i += 1
    if w is None:
        raise ValueError("action spec needs a w line")
    return action(w, Q, hbar)


def read_action_file(path) -> ActionFunctional:
    return parse_action(Path(path).read_text())


# -- path integral ------------------------------------------------------------

@dataclass(frozen=True)
class PathIntegralResult:
    value: complex
    depth: int
    delta_prev: float | None
    mode: str
    samples: int | None = None
    seed: int | None = None
    stderr: float | None = None


def pairwise_sum(values: np.ndarray) -> complex:
    """Balanced binary-tree sum; the array is zero-padded to a power of two."""
    a = np.asarray(values, dtype=np.complex128)
    if a.size == 0:
        return 0j
    size = 1 << (a.size - 1).bit_length()
    if size != a.size:
        a = np.concatenate([a, np.zeros(size - a.size, dtype=np.complex128)])
    while a.size > 1:
        a = a[0::2] + a[1::2]
    return complex(a[0])


class _Cylinders:
    """Bit vectors and masses of the level-n cylinders, produced in chunks."""

    def __init__(self, mu: CylinderMeasure, n: int, dim: int):
        T = mu.tower
        self.n, self.dim = n, dim
        self.binary = T.kind_tag == "binary"
        if self.binary:
            if dim < n:
                raise LengthMismatch(f"action dimension {dim} < word length {n}")
            self.count = 2**n
            self.mass = float(Fraction(1, self.count))
            return
        if n > T.depth:
            raise LevelOrder(f"level {n} beyond tower depth {T.depth}")
        self.count = 1 if n == 0 else T.level(n).order
        if n == 0:
            codes = {0: ""}
        else:
            codes = build_partition_tree(T.truncate(n)).codes
        longest = max(len(c) for c in codes.values())
        if dim < longest:
            raise LengthMismatch(f"action dimension {dim} < longest code length {longest}")
        bits = np.zeros((self.count, dim), dtype=np.float64)
        for idx, code in codes.items():
            bits[idx, :len(code)] = [int(b) for b in code]
        self.bits = bits
        self.masses = np.array([float(mu.level_mass(n, i)) for i in range(self.count)])

    def chunk(self, start: int, stop: int):
        stop = min(stop, self.count)
        if start >= stop:
            return np.zeros((0, self.dim)), np.zeros(0)
        if self.binary:
            idx = np.arange(start, stop, dtype=np.int64)
            g = np.zeros((idx.size, self.dim))
            for i in range(self.n):
                g[:, i] = (idx >> (self.n - 1 - i)) & 1
            return g, np.full(idx.size, self.mass)
        return self.bits[start:stop], self.masses[start:stop]


def _phases(S: ActionFunctional, terms, g: np.ndarray) -> np.ndarray:
    acc = np.zeros(g.shape[0])
    for c, i, j in terms:
        acc += c * (g[:, i] if i == j else g[:, i] * g[:, j])
    return np.exp(1j * (acc / S.hbar))


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, int(workers))


def _exact_sum(mu, S, n, workers):
    cyl = _Cylinders(mu, n, S.dimension)
    terms = S.terms()
    padded = 1 << max(0, (cyl.count - 1).bit_length())
    chunk = min(padded, CHUNK)
    starts = range(0, padded, chunk)

    def reduce_chunk(start):
        g, m = cyl.chunk(start, start + chunk)
        vals = np.zeros(chunk, dtype=np.complex128)
        vals[:m.size] = _phases(S, terms, g) * m
        return pairwise_sum(vals)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            partial = list(pool.map(reduce_chunk, starts))
    else:
        partial = [reduce_chunk(s) for s in starts]
    # chunks are aligned power-of-two subtrees, so this is the same tree as a
    # single-pass reduction
    return pairwise_sum(np.array(partial))


def _pool(stats):
    """Combine (count, mean, sum of squared deviations) triples."""
    n, mean, m2 = 0, 0j, 0.0
    for nb, mb, m2b in stats:
        if nb == 0:
            continue
        delta = mb - mean
        tot = n + nb
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + abs(delta) ** 2 * n * nb / tot
        n = tot
    return n, mean, m2


def _mc(mu, S, n, samples, seed, workers):
    cyl = _Cylinders(mu, n, S.dimension)
    terms = S.terms()
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = [samples // workers + (1 if r < samples % workers else 0) for r in range(workers)]

    def run(stream, count):
        rng = np.random.default_rng(stream)
        stats = []
        while count > 0:
            b = min(count, CHUNK)
            count -= b
            if cyl.binary:
                g = rng.integers(0, 2, size=(b, cyl.dim)).astype(np.float64)
                g[:, cyl.n:] = 0
            else:
                p = cyl.masses / cyl.masses.sum()
                g = cyl.bits[rng.choice(cyl.count, size=b, p=p)]
            z = _phases(S, terms, g)
            mean = z.mean()
            stats.append((b, complex(mean), float(np.sum(np.abs(z - mean) ** 2))))
        return _pool(stats)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, streams, shares))
    else:
        parts = [run(streams[0], shares[0])]
    total, mean, m2 = _pool(parts)
    stderr = math.sqrt(m2 / (total - 1) / total) if total > 1 else float("inf")
    return mean, stderr


def path_integral(mu: CylinderMeasure, S: ActionFunctional, mode: str = "exact",
                  n: int | None = None, *, samples: int | None = None,
                  seed: int | None = None, workers: int | None = None) -> PathIntegralResult:
    """Evaluate the truncated path integral over level-n cylinders of ``mu``.

    ``mode="exact"`` sums every cylinder (n <= 24) and also reports the change
    from level n-1.  ``mode="monte_carlo"`` draws ``samples`` cylinders by
    mass with the given ``seed`` and reports mean and standard error.
    """
    if n is None:
        n = S.dimension if mu.tower.kind_tag == "binary" else mu.tower.depth
    workers = _workers(workers)
    if mode == "exact":
        if n > EXACT_LIMIT:
            raise SizeLimit(f"exact mode limited to n <= {EXACT_LIMIT}")
        value = _exact_sum(mu, S, n, workers)
        delta = abs(value - _exact_sum(mu, S, n - 1, workers)) if n >= 1 else None
        return PathIntegralResult(value, n, delta, "exact")
    if mode in ("monte_carlo", "mc"):
        if samples is None or seed is None:
            raise ValueError("monte_carlo mode needs samples and seed")
        mean, stderr = _mc(mu, S, n, int(samples), int(seed), workers)
        return PathIntegralResult(mean, n, None, "monte_carlo", int(samples), int(seed), stderr)
    raise ValueError(f"unknown mode {mode!r}")


# -- characters ------------------------------------------------------------------

def turn_to_complex(t: Fraction) -> complex:
    t = t % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if t in exact:
        return exact[t]
    return cmath.exp(2j * math.pi * float(t))


@dataclass(frozen=True)
class Character:
    """A one-dimensional character stored as turn fractions per element."""

    group: FiniteGroup
    exponents: tuple
    turns: tuple

    def __call__(self, g) -> complex:
        idx = g.index if hasattr(g, "index") else int(g)
        return turn_to_complex(self.turns[idx])

    def values(self) -> np.ndarray:
        return np.array([turn_to_complex(t) for t in self.turns])

    @property
    def is_trivial(self) -> bool:
        return all(t == 0 for t in self.turns)

    @property
    def order(self) -> int:
        return math.lcm(*(t.denominator for t in self.turns))


def characters(G: FiniteGroup) -> list[Character]:
    """All characters of an abelian group, ordered by exponent tuple."""
    if G.order > MAX_ORDER:
        raise SizeLimit(f"character enumeration limited to order {MAX_ORDER}")
    if not G.is_abelian:
        raise NotAbelian(f"{G.key} is not abelian")
    _, orders, coords = abelian_decomposition(G)
    out = []
    for exps in np.ndindex(*orders) if orders else [()]:
        turns = tuple(sum((Fraction(int(t) * int(c), m) for t, c, m in zip(exps, row, orders)),
                          Fraction(0)) % 1 for row in coords)
        out.append(Character(G, tuple(int(e) for e in exps), turns))
    return out


def conductor_level(chi: Character, T: Tower) -> int:
    """Smallest level k such that chi factors through G_d -> G_k."""
    if chi.group != T.levels[-1]:
        raise GroupMismatch("character is not on the top level of the tower")
    for k in range(0, T.depth + 1):
        proj = T.projection(T.depth, k)
        kernel = np.flatnonzero(proj == proj[chi.group.identity_index])
        if all(chi.turns[i] == 0 for i in kernel):
            return k
    return T.depth


def _weighted_characters(T: Tower, lam: float):
    top = T.levels[-1]
    if not top.is_abelian:
        raise NotAbelian(f"top level {top.key} is not abelian")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    return [(chi, math.exp(-lam * conductor_level(chi, T))) for chi in characters(top)]


def partition_function(T: Tower, lam: float) -> float:
    """Sum over characters of exp(-lam * conductor level)."""
    return math.fsum(w for _, w in _weighted_characters(T, lam))


def frobenius_correlation(T: Tower, primes, lam: float) -> complex:
    """Weighted average over characters of the product of Frobenius values."""
    if T.kind_tag != "cyclotomic":
        raise KindMismatch(f"Frobenius correlations need a cyclotomic tower, not {T.kind_tag}")
    p = T.params["p"]
    frobs = [frobenius_element(p, T.depth, int(q)) for q in primes]
    weighted = _weighted_characters(T, lam)
    Z = math.fsum(w for _, w in weighted)
    re = []
    im = []
    for chi, w in weighted:
        turn = sum((chi.turns[f.index] for f in frobs), Fraction(0))
        v = turn_to_complex(turn) * w
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im)) / Z
