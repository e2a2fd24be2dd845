"""Finite groups given by Cayley tables.

Every group carries a canonical ordering of its elements.  Downstream code
(encodings, characters, automorphism lists) breaks ties by element index, so
the orderings fixed here are part of the encoding convention:

* ``cyclic n``   residues 0..n-1 ascending
* ``units n``    residues coprime to n, ascending
* ``product``    lexicographic on component indices
* ``gl2 2^k``    invertible matrices, row-major entries lexicographic
* ``table``      the order given by the caller
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AxiomViolation, GroupMismatch, Ramified, SizeLimit

MAX_ORDER = 4096
EXHAUSTIVE_ASSOC_LIMIT = 64
ASSOC_SAMPLES = 100_000


class FiniteGroup:
    """A finite group stored as an ``order x order`` table of indices.

    Instances are immutable once built and hashable by ``key``; two groups
    with the same key are interchangeable.
    """

    def __init__(self, labels, table, kind, key=None, *, validate=True):
        labels = tuple(str(s) for s in labels)
        table = np.array(table, dtype=np.int64)
        n = len(labels)
        if n == 0:
            raise AxiomViolation("a group has at least one element")
        if n > MAX_ORDER:
            raise SizeLimit(f"group order {n} exceeds {MAX_ORDER}")
        if table.shape != (n, n):
            raise AxiomViolation(f"table shape {table.shape} does not match {n} labels")
        if len(set(labels)) != n:
            raise AxiomViolation("element labels are not distinct")
        self.order = n
        self.element_labels = labels
        self.kind_tag = kind
        if key is None:
            digest = hashlib.sha1(repr(labels).encode() + table.tobytes()).hexdigest()
            key = f"table {digest[:12]}"
        self.key = key
        self.op_table = table.astype(np.int16 if n < 2**15 else np.int32)
        self.op_table.setflags(write=False)
        self.identity_index = _find_identity(self.op_table)
        if validate:
            _check_axioms(self.op_table, self.identity_index)
        self._index = {s: i for i, s in enumerate(labels)}

    def __repr__(self):
        return f"FiniteGroup({self.key!r}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return self.order

    def __iter__(self):
        return (GroupElement(self, i) for i in range(self.order))

    def element(self, label) -> GroupElement:
        """Look up an element by its label (or pass an index through)."""
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if not 0 <= label < self.order:
                raise IndexError(f"index {label} out of range for {self.key}")
            return GroupElement(self, int(label))
        try:
            return GroupElement(self, self._index[str(label)])
        except KeyError:
            raise KeyError(f"{label!r} is not an element of {self.key}") from None

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_index)

    @functools.cached_property
    def inverses(self) -> np.ndarray:
        rows, cols = np.nonzero(self.op_table == self.identity_index)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    @functools.cached_property
    def element_orders(self) -> np.ndarray:
        idx = np.arange(self.order)
        orders = np.zeros(self.order, dtype=np.int64)
        cur = idx.copy()
        k = 1
        while not orders.all():
            orders[(cur == self.identity_index) & (orders == 0)] = k
            cur = self.op_table[cur, idx]
            k += 1
        return orders

    @functools.cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.op_table, self.op_table.T))

    @functools.cached_property
    def exponent(self) -> int:
        return math.lcm(*map(int, self.element_orders))

    def generate(self, gens) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``gens``."""
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity_index] = True
        frontier = np.array([self.identity_index])
        gens = [int(g) for g in gens]
        while frontier.size:
            nxt = np.unique(self.op_table[frontier][:, gens]) if gens else np.array([], dtype=int)
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen)


def _find_identity(table):
    n = table.shape[0]
    ar = np.arange(n)
    rows = np.flatnonzero((table == ar).all(axis=1))
    for e in rows:
        if np.array_equal(table[:, e], ar):
            return int(e)
    raise AxiomViolation("no two-sided identity in table")


def _check_axioms(table, e):
    n = table.shape[0]
    ar = np.arange(n)
    if not (np.sort(table, axis=1) == ar).all():
        r = int(np.flatnonzero(~(np.sort(table, axis=1) == ar).all(axis=1))[0])
        raise AxiomViolation(f"row {r} is not a permutation")
    if not (np.sort(table, axis=0) == ar[:, None]).all():
        c = int(np.flatnonzero(~(np.sort(table, axis=0) == ar[:, None]).all(axis=0))[0])
        raise AxiomViolation(f"column {c} is not a permutation")
    t = table.astype(np.int64)
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        a, b, c = np.meshgrid(ar, ar, ar, indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
    bad = np.flatnonzero(t[t[a, b], c] != t[a, t[b, c]])
    if bad.size:
        i = bad[0]
        triple = (int(a[i]), int(b[i]), int(c[i]))
        raise AxiomViolation(f"associativity fails on {triple}", triple)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise IndexError(f"index {self.index} out of range for {self.group.key}")

    @property
    def group_id(self):
        return self.group.key

    @property
    def label(self):
        return self.group.element_labels[self.index]

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"<{self.label} in {self.group.key}>"


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.group != h.group:
        raise GroupMismatch(f"cannot multiply elements of {g.group.key} and {h.group.key}")
    return GroupElement(g.group, int(g.group.op_table[g.index, h.index]))


# -- constructors -----------------------------------------------------------

@functools.lru_cache(maxsize=None)
def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    if n > MAX_ORDER:
        raise SizeLimit(f"cyclic {n} exceeds {MAX_ORDER}")
    ar = np.arange(n)
    return FiniteGroup(map(str, ar), (ar[:, None] + ar[None, :]) % n, "cyclic", f"cyclic {n}")


@functools.lru_cache(maxsize=None)
def units_mod(n: int) -> FiniteGroup:
    if n < 2:
        raise ValueError("units group needs n >= 2")
    res = np.array([r for r in range(1, n) if math.gcd(r, n) == 1])
    if len(res) > MAX_ORDER:
        raise SizeLimit(f"units {n} exceeds {MAX_ORDER}")
    lookup = np.full(n, -1)
    lookup[res] = np.arange(len(res))
    table = lookup[(res[:, None] * res[None, :]) % n]
    return FiniteGroup(map(str, res), table, "units_mod", f"units {n}")


@functools.lru_cache(maxsize=None)
def product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    if n * m > MAX_ORDER:
        raise SizeLimit(f"product order {n * m} exceeds {MAX_ORDER}")
    tg = g.op_table.astype(np.int64)
    th = h.op_table.astype(np.int64)
    table = (tg[:, None, :, None] * m + th[None, :, None, :]).reshape(n * m, n * m)
    labels = [f"({a},{b})" for a in g.element_labels for b in h.element_labels]
    return FiniteGroup(labels, table, "product", f"product {g.key} {h.key}")


@functools.lru_cache(maxsize=None)
def gl2_mod(modulus: int) -> FiniteGroup:
    """GL(2, Z/modulus) for modulus = 2^k, k <= 3."""
    k = modulus.bit_length() - 1
    if modulus < 2 or modulus != 1 << k:
        raise ValueError("gl2 modulus must be a power of two")
    if k > 3:
        raise SizeLimit(f"gl2 2^{k}: only k <= 3 is supported")
    m = modulus
    ent = np.array(list(itertools.product(range(m), repeat=4)))
    a, b, c, d = ent.T
    ent = ent[((a * d - b * c) % m) % 2 == 1]
    code = ((ent[:, 0] * m + ent[:, 1]) * m + ent[:, 2]) * m + ent[:, 3]
    lookup = np.full(m**4, -1)
    lookup[code] = np.arange(len(ent))
    a, b, c, d = (ent[:, i] for i in range(4))
    A, B, C, D = (x[:, None] for x in (a, b, c, d))
    a2, b2, c2, d2 = (x[None, :] for x in (a, b, c, d))
    pa = (A * a2 + B * c2) % m
    pb = (A * b2 + B * d2) % m
    pc = (C * a2 + D * c2) % m
    pd = (C * b2 + D * d2) % m
    table = lookup[((pa * m + pb) * m + pc) * m + pd]
    labels = [f"[{w},{x};{y},{z}]" for w, x, y, z in ent]
    return FiniteGroup(labels, table, "gl2_mod", f"gl2 2^{k}")


def from_table(labels, table, key=None) -> FiniteGroup:
    return FiniteGroup(labels, table, "from_table", key)


@functools.lru_cache(maxsize=None)
def xor_group(k: int) -> FiniteGroup:
    """({0,1}^k, XOR) with elements labelled by their bit strings."""
    n = 1 << k
    if n > MAX_ORDER:
        raise SizeLimit(f"binary level {k} exceeds {MAX_ORDER} elements")
    ar = np.arange(n)
    labels = [format(i, f"0{k}b") if k else "" for i in ar]
    if k == 0:
        labels = ["e"]
    return from_table(labels, np.bitwise_xor.outer(ar, ar), key=f"xor {k}")


def load_table(path) -> FiniteGroup:
    """Read a table file: labels on line 1, then one row of indices per line."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    labels, rows = lines[0], [[int(x) for x in row] for row in lines[1:]]
    return from_table(labels, rows, key=f"table {Path(path).name}")


def parse_group_spec(text: str) -> FiniteGroup:
    """Parse ``cyclic N | units N | product <spec> <spec> | gl2 2^K | table <file>``."""
    tokens = text.split()
    group, rest = _parse_group_tokens(tokens)
    if rest:
        raise ValueError(f"unexpected trailing tokens in group spec: {' '.join(rest)}")
    return group


def _parse_group_tokens(tokens):
    if not tokens:
        raise ValueError("empty group spec")
    head, *rest = tokens
    if head == "cyclic":
        return cyclic(int(rest[0])), rest[1:]
    if head == "units":
        return units_mod(int(rest[0])), rest[1:]
    if head == "gl2":
        arg = rest[0]
        m = 2 ** int(arg[2:]) if arg.startswith("2^") else int(arg)
        return gl2_mod(m), rest[1:]
    if head == "table":
        return load_table(rest[0]), rest[1:]
    if head == "product":
        g, rest = _parse_group_tokens(rest)
        h, rest = _parse_group_tokens(rest)
        return product(g, h), rest
    raise ValueError(f"unknown group kind {head!r}")


make_group = parse_group_spec


# -- homomorphisms ------------------------------------------------------------

class Homomorphism:
    """A map between groups given by its image list."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, image):
        self.source = source
        self.target = target
        self.image = tuple(int(i) for i in image)
        if len(self.image) != source.order:
            raise ValueError("image list length must equal source order")

    @property
    def surjective_flag(self) -> bool:
        return len(set(self.image)) == self.target.order

    def __call__(self, g: GroupElement) -> GroupElement:
        if g.group != self.source:
            raise GroupMismatch(f"{g!r} is not in {self.source.key}")
        return GroupElement(self.target, self.image[g.index])

    def respects_law(self) -> bool:
        img = np.asarray(self.image)
        if img[self.source.identity_index] != self.target.identity_index:
            return False
        lhs = img[self.source.op_table]
        rhs = self.target.op_table[img[:, None], img[None, :]]
        return bool(np.array_equal(lhs, rhs))

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.source == other.source
                and self.target == other.target and self.image == other.image)

    def __hash__(self):
        return hash((self.source, self.target, self.image))

    def __repr__(self):
        return f"{type(self).__name__}({self.source.key} -> {self.target.key})"


class Automorphism(Homomorphism):
    def __init__(self, group: FiniteGroup, image):
        super().__init__(group, group, image)


def _greedy_generators(G: FiniteGroup):
    orders = G.element_orders
    # largest order first, ties by index
    ranking = sorted(range(G.order), key=lambda i: (-orders[i], i))
    gens, inside = [], np.zeros(G.order, dtype=bool)
    inside[G.identity_index] = True
    for x in ranking:
        if not inside[x]:
            gens.append(x)
            inside[G.generate(gens)] = True
    return gens


def _bfs_layers(G: FiniteGroup, gens):
    """Spanning-tree layers of the subgroup <gens>: (elements, parents, gen slot)."""
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity_index] = True
    frontier = np.array([G.identity_index])
    layers = []
    while frontier.size:
        elems, parents, slots = [], [], []
        for slot, g in enumerate(gens):
            nxt = G.op_table[frontier, g].astype(np.int64)
            new = ~seen[nxt]
            nxt_new, first = np.unique(nxt[new], return_index=True)
            seen[nxt_new] = True
            elems.append(nxt_new)
            parents.append(frontier[new][first])
            slots.append(np.full(nxt_new.size, slot))
        frontier = np.concatenate(elems) if elems else np.array([], dtype=np.int64)
        if frontier.size:
            layers.append((frontier, np.concatenate(parents), np.concatenate(slots)))
    return layers, np.flatnonzero(seen)


def enumerate_automorphisms(G: FiniteGroup) -> list[Automorphism]:
    """All automorphisms of G, sorted lexicographically by image list.

    Generator images are chosen among elements of matching order; each
    partial assignment is extended along a spanning tree of the subgroup it
    generates and discarded as soon as a relation or injectivity fails.
    """
    if G.order > MAX_ORDER:
        raise SizeLimit(f"automorphism enumeration limited to order {MAX_ORDER}")
    gens = _greedy_generators(G)
    if not gens:
        return [Automorphism(G, range(G.order))]
    orders = G.element_orders
    T = G.op_table.astype(np.int64)
    stages = [_bfs_layers(G, gens[: i + 1]) for i in range(len(gens))]
    candidates = [np.flatnonzero(orders == orders[g]) for g in gens]
    found = []

    def extend(images, depth):
        layers, members = stages[depth]
        img = np.full(G.order, -1, dtype=np.int64)
        img[G.identity_index] = G.identity_index
        h = np.asarray(images)
        for elems, parents, slots in layers:
            img[elems] = T[img[parents], h[slots]]
        sub = img[members]
        if np.unique(sub).size != sub.size:
            return None
        for slot, g in enumerate(gens[: depth + 1]):
            if not np.array_equal(img[T[members, g]], T[sub, h[slot]]):
                return None
        return img

    def search(images):
        depth = len(images) - 1
        img = extend(images, depth)
        if img is None:
            return
        if depth == len(gens) - 1:
            found.append(tuple(int(x) for x in img))
            return
        for c in candidates[depth + 1]:
            search(images + [int(c)])

    for c in candidates[0]:
        search([int(c)])
    return [Automorphism(G, im) for im in sorted(found)]


def abelian_decomposition(G: FiniteGroup):
    """Split an abelian group into a direct sum of cyclic factors.

    Returns ``(basis, orders, coords)`` where ``basis[i]`` has order
    ``orders[i]`` (non-increasing) and ``coords[x]`` is the exponent vector
    of element ``x`` in that basis.
    """
    T = G.op_table.astype(np.int64)
    e = G.identity_index
    inside = np.zeros(G.order, dtype=bool)
    inside[e] = True
    basis, orders = [], []
    while not inside.all():
        # order of each element modulo the current subgroup H
        coset_order = np.zeros(G.order, dtype=np.int64)
        cur = np.arange(G.order)
        k = 1
        while (coset_order == 0).any():
            coset_order[inside[cur] & (coset_order == 0)] = k
            cur = T[cur, np.arange(G.order)]
            k += 1
        coset_order[inside] = 0
        m = int(coset_order.max())
        x = int(np.flatnonzero(coset_order == m)[0])
        coset = np.sort(T[x, np.flatnonzero(inside)])
        hits = coset[G.element_orders[coset] == m]
        if hits.size == 0:
            raise RuntimeError(f"no lift of order {m} in coset of {G.element_labels[x]}")
        z = int(hits[0])
        basis.append(z)
        orders.append(m)
        inside[G.generate(basis)] = True

    coords = np.zeros((G.order, len(basis)), dtype=np.int64)
    powers = []
    for b, m in zip(basis, orders):
        p = [e]
        for _ in range(m - 1):
            p.append(int(T[p[-1], b]))
        powers.append(p)
    for exps in itertools.product(*(range(m) for m in orders)):
        x = e
        for p, c in zip(powers, exps):
            x = int(T[x, p[c]])
        coords[x] = exps
    return basis, orders, coords


# -- Frobenius ---------------------------------------------------------------

def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def frobenius_element(p: int, n: int, q: int) -> GroupElement:
    """Image of the prime q in (Z/p^n)^x."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("level must be >= 1")
    if q % p == 0:
        raise Ramified(f"{q} is ramified at {p}")
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    return units_mod(p**n).element(str(q % p**n))
