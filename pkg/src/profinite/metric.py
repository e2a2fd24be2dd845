"""Cantor ultrametric, Hamming distance and subcubes of the n-cube.

Words are finite bit strings.  Anything that looks like one is accepted:
``"0110"``, ``[0, 1, 1, 0]``, or a :class:`~profinite.matrioshka.BitSequence`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyInput, LengthMismatch


def as_word(w) -> str:
    bits = getattr(w, "bits", w)
    if isinstance(bits, str):
        s = bits
    else:
        s = "".join(str(int(b)) for b in bits)
    if set(s) - {"0", "1"}:
        raise ValueError(f"{w!r} is not a binary word")
    return s


def _pair(x, y):
    x, y = as_word(x), as_word(y)
    if len(x) != len(y):
        raise LengthMismatch(f"lengths {len(x)} and {len(y)} differ")
    return x, y


def first_difference(x, y) -> int | None:
    """1-based index of the first differing bit, or None for equal words."""
    x, y = _pair(x, y)
    for k, (a, b) in enumerate(zip(x, y), start=1):
        if a != b:
            return k
    return None


def cantor_distance(x, y) -> Fraction:
    """``2**-k`` for the first differing position k, 0 for equal words."""
    k = first_difference(x, y)
    return Fraction(0) if k is None else Fraction(1, 2**k)


def hamming(x, y) -> int:
    x, y = _pair(x, y)
    return sum(a != b for a, b in zip(x, y))


def neighbors(w) -> list[str]:
    """The n words at Hamming distance 1."""
    w = as_word(w)
    flip = {"0": "1", "1": "0"}
    return [w[:i] + flip[w[i]] + w[i + 1:] for i in range(len(w))]


def hypercube_split(n: int):
    """Vertices of the (n+1)-cube as two copies of the n-cube, by last bit."""
    base = [format(i, f"0{n}b") if n else "" for i in range(2**n)]
    return [w + "0" for w in base], [w + "1" for w in base]


@dataclass(frozen=True)
class SubcubeDescriptor:
    n: int
    fixed_prefix: str

    @property
    def p(self) -> int:
        return len(self.fixed_prefix)

    @property
    def free_dims(self) -> int:
        return self.n - self.p

    def __len__(self):
        return 2**self.free_dims

    def __contains__(self, w) -> bool:
        w = as_word(w)
        return len(w) == self.n and w.startswith(self.fixed_prefix)

    def vertex_ints(self) -> np.ndarray:
        """Members as integers (bit 1 is the most significant)."""
        base = int(self.fixed_prefix, 2) << self.free_dims if self.fixed_prefix else 0
        return base + np.arange(2**self.free_dims, dtype=np.int64)

    def vertices(self):
        return [format(v, f"0{self.n}b") for v in self.vertex_ints()]


def subcube(words) -> SubcubeDescriptor:
    """Smallest prefix-fixed subcube holding every word."""
    words = [as_word(w) for w in words]
    if not words:
        raise EmptyInput("subcube of no words")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise LengthMismatch("words of mixed length")
    p = 0
    while p < n and all(w[p] == words[0][p] for w in words):
        p += 1
    return SubcubeDescriptor(n, words[0][:p])
