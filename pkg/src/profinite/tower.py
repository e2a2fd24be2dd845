"""Inverse systems of finite groups, truncated to a finite depth.

Levels are numbered from 1 as in ``G_1 <- G_2 <- ... <- G_d``; level 0 is
the one-point quotient and stands for the whole space.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import finite_group as fg
from .errors import (BondNotSurjective, IncoherentAtLevel, LevelOrder,
                     SizeLimit, TowerMismatch)
from .finite_group import FiniteGroup, GroupElement, Homomorphism

KINDS = ("binary", "padic", "cyclotomic", "f2ab", "aut_f2ab", "custom")


class Tower:
    """A chain of finite groups with bonding maps ``bonds[k-1]: G_{k+1} -> G_k``.

    The constructor does not insist on surjective bonds so that broken
    systems can still be inspected with :func:`validate_tower`; use
    :func:`make_tower` or :func:`custom_tower` for checked construction.
    """

    def __init__(self, levels, bonds, kind="custom", params=None, spec=None):
        self.levels = tuple(levels)
        self.bonds = tuple(bonds)
        if not self.levels:
            raise ValueError("a tower needs at least one level")
        if len(self.bonds) != len(self.levels) - 1:
            raise ValueError("need exactly depth-1 bonds")
        for k, b in enumerate(self.bonds, start=1):
            if b.source != self.levels[k] or b.target != self.levels[k - 1]:
                raise ValueError(f"bond {k} does not map level {k + 1} to level {k}")
        self.kind_tag = kind
        self.params = dict(params or {})
        self.spec = spec or _spec_line(kind, self.params, len(self.levels))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> FiniteGroup:
        if not 1 <= k <= self.depth:
            raise LevelOrder(f"level {k} outside 1..{self.depth}")
        return self.levels[k - 1]

    def orders(self):
        return [g.order for g in self.levels]

    def __repr__(self):
        return f"Tower({self.spec!r})"

    def __eq__(self, other):
        return (isinstance(other, Tower) and self.spec == other.spec
                and self.levels == other.levels
                and [b.image for b in self.bonds] == [b.image for b in other.bonds])

    def __hash__(self):
        return hash((self.spec, self.levels))

    @functools.lru_cache(maxsize=None)
    def projection(self, j: int, i: int) -> np.ndarray:
        """Index map G_j -> G_i (composite of bonds); i = 0 maps to the point."""
        if i > j:
            raise LevelOrder(f"cannot project from level {j} up to level {i}")
        if not 0 <= i <= j <= self.depth:
            raise LevelOrder(f"levels {i}, {j} outside 0..{self.depth}")
        if j == 0:
            return np.zeros(1, dtype=np.int64)
        if i == 0:
            return np.zeros(self.level(j).order, dtype=np.int64)
        m = np.arange(self.level(j).order)
        for k in range(j - 1, i - 1, -1):
            m = np.asarray(self.bonds[k - 1].image)[m]
        m.setflags(write=False)
        return m

    @functools.lru_cache(maxsize=None)
    def fibers(self, k: int):
        """For each element of G_k, the sorted indices of G_{k+1} above it.

        ``k = 0`` gives the single fiber of G_1 over the point.
        """
        img = self.projection(k + 1, k)
        size = 1 if k == 0 else self.level(k).order
        return tuple(tuple(int(x) for x in np.flatnonzero(img == y)) for y in range(size))

    def truncate(self, depth: int) -> Tower:
        if not 1 <= depth <= self.depth:
            raise LevelOrder(f"cannot truncate depth {self.depth} tower to {depth}")
        return Tower(self.levels[:depth], self.bonds[: depth - 1], self.kind_tag,
                     self.params, _spec_line(self.kind_tag, self.params, depth)
                     if self.kind_tag != "custom" else f"{self.spec} truncate={depth}")

    def coherent_elements(self):
        """Every coherent element, in canonical order of its top component."""
        for top in range(self.levels[-1].order):
            yield self.lift(top)

    def lift(self, top_index: int) -> CoherentElement:
        """The coherent element determined by a top-level element."""
        comps = [GroupElement(self.level(k), int(self.projection(self.depth, k)[top_index]))
                 for k in range(1, self.depth + 1)]
        return CoherentElement(self, tuple(comps))


def _spec_line(kind, params, depth):
    p = f" p={params['p']}" if "p" in params else ""
    return f"tower {kind}{p} depth={depth}"


def _reduction_bond(upper: FiniteGroup, lower: FiniteGroup, reduce_label) -> Homomorphism:
    image = [lower.element(reduce_label(s)).index for s in upper.element_labels]
    return Homomorphism(upper, lower, image)


def _reduce_int(modulus):
    return lambda s: str(int(s) % modulus)


def _reduce_pair(modulus):
    def f(s):
        a, b = s.strip("()").split(",")
        return f"({int(a) % modulus},{int(b) % modulus})"
    return f


def _reduce_matrix(modulus):
    def f(s):
        rows = s.strip("[]").split(";")
        a, b = rows[0].split(",")
        c, d = rows[1].split(",")
        a, b, c, d = (int(x) % modulus for x in (a, b, c, d))
        return f"[{a},{b};{c},{d}]"
    return f


def _level_group(kind, p, k):
    if kind == "binary":
        return fg.xor_group(k)
    if kind == "padic":
        return fg.cyclic(p**k)
    if kind == "cyclotomic":
        return fg.units_mod(p**k)
    if kind == "f2ab":
        c = fg.cyclic(2**k)
        return fg.product(c, c)
    if kind == "aut_f2ab":
        return fg.gl2_mod(2**k)
    raise ValueError(f"unknown tower kind {kind!r}")


def _top_order(kind, p, depth):
    return {
        "binary": lambda: 2**depth,
        "padic": lambda: p**depth,
        "cyclotomic": lambda: (p - 1) * p ** (depth - 1),
        "f2ab": lambda: 4**depth,
        "aut_f2ab": lambda: 6 * 16 ** (depth - 1),
    }[kind]()


@functools.lru_cache(maxsize=None)
def make_tower(kind: str, depth: int, p: int | None = None) -> Tower:
    """Build one of the standard towers.

    ``binary``      ({0,1}^k, XOR), bond drops the last coordinate
    ``padic``       Z/p^k, bond is reduction
    ``cyclotomic``  (Z/p^k)^x, bond is reduction
    ``f2ab``        (Z/2^k)^2, the abelianised free group on two letters mod 2^k
    ``aut_f2ab``    GL(2, Z/2^k) = Aut((Z/2^k)^2), entrywise reduction
    """
    if kind not in KINDS or kind == "custom":
        raise ValueError(f"unknown tower kind {kind!r}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if kind in ("padic", "cyclotomic"):
        if p is None or not fg._is_prime(p):
            raise ValueError(f"{kind} tower needs a prime p")
    else:
        p = None
    if _top_order(kind, p, depth) > fg.MAX_ORDER or (kind == "aut_f2ab" and depth > 3):
        raise SizeLimit(f"{kind} depth {depth} exceeds the {fg.MAX_ORDER}-element budget")
    levels = [_level_group(kind, p, k) for k in range(1, depth + 1)]
    bonds = []
    for k in range(1, depth):
        upper, lower = levels[k], levels[k - 1]
        if kind == "binary":
            reduce = lambda s: s[:-1]  # noqa: E731
        elif kind in ("padic", "cyclotomic"):
            reduce = _reduce_int(p**k)
        elif kind == "f2ab":
            reduce = _reduce_pair(2**k)
        else:
            reduce = _reduce_matrix(2**k)
        bonds.append(_reduction_bond(upper, lower, reduce))
    params = {"p": p} if p is not None else {}
    return Tower(levels, bonds, kind, params)


def custom_tower(levels, images, spec=None) -> Tower:
    """Tower from explicit groups and bond image lists; bonds must be onto."""
    levels = list(levels)
    bonds = [Homomorphism(levels[k], levels[k - 1], img)
             for k, img in enumerate(images, start=1)]
    for k, b in enumerate(bonds, start=1):
        if not b.surjective_flag:
            raise BondNotSurjective(f"bond {k} is not surjective")
        if not b.respects_law():
            raise BondNotSurjective(f"bond {k} is not a homomorphism")
    return Tower(levels, bonds, "custom", spec=spec or f"tower custom depth={len(levels)}")


@dataclass(frozen=True)
class BondCheck:
    level: int
    surjective: bool
    homomorphism: bool
    strict_refinement: bool

    @property
    def ok(self):
        return self.surjective and self.homomorphism


def validate_tower(T: Tower) -> list[BondCheck]:
    """Per-bond report of surjectivity, the homomorphism law and order growth."""
    return [BondCheck(k, b.surjective_flag, b.respects_law(),
                      b.source.order > b.target.order)
            for k, b in enumerate(T.bonds, start=1)]


def _locate(T: Tower, g: GroupElement):
    for k, G in enumerate(T.levels, start=1):
        if g.group == G:
            return k
    raise TowerMismatch(f"{g!r} is not in any level of {T.spec}")


def project(T: Tower, g: GroupElement, i: int, j: int | None = None) -> GroupElement:
    """Image of a level-j element at level i <= j.

    The level of ``g`` is inferred when ``j`` is omitted; groups repeated at
    several levels need ``j`` explicitly.
    """
    if j is None:
        j = _locate(T, g)
    elif T.level(j) != g.group:
        raise TowerMismatch(f"{g!r} is not at level {j}")
    if i > j:
        raise LevelOrder(f"cannot project from level {j} to level {i}")
    if i < 1:
        raise LevelOrder("target level must be >= 1")
    return GroupElement(T.level(i), int(T.projection(j, i)[g.index]))


@dataclass(frozen=True)
class CoherentElement:
    tower: Tower
    components: tuple

    @property
    def labels(self):
        return [c.label for c in self.components]

    @property
    def top(self) -> GroupElement:
        return self.components[-1]

    def __repr__(self):
        return f"CoherentElement({', '.join(self.labels)})"


def coherent_element(T: Tower, components) -> CoherentElement:
    """Validate a tuple of per-level components (elements, labels or indices)."""
    components = list(components)
    if len(components) != T.depth:
        raise LevelOrder(f"need {T.depth} components, got {len(components)}")
    comps = []
    for k, c in enumerate(components, start=1):
        G = T.level(k)
        if isinstance(c, GroupElement):
            if c.group != G:
                raise TowerMismatch(f"component {k} is not in level {k}")
            comps.append(c)
        else:
            comps.append(G.element(c))
    for k in range(1, T.depth):
        if T.bonds[k - 1].image[comps[k].index] != comps[k - 1].index:
            raise IncoherentAtLevel(k)
    return CoherentElement(T, tuple(comps))


@dataclass(frozen=True)
class Cylinder:
    """Coherent elements whose level-k component is ``base`` (k = 0: everything)."""

    tower: Tower
    level: int
    base: GroupElement | None

    def __contains__(self, x: CoherentElement):
        if x.tower != self.tower:
            return False
        return self.level == 0 or x.components[self.level - 1] == self.base

    def members(self):
        return [x for x in self.tower.coherent_elements() if x in self]

    def __repr__(self):
        where = "whole space" if self.level == 0 else f"level {self.level} over {self.base.label}"
        return f"Cylinder({where})"


def coset_cylinder(T: Tower, x: CoherentElement, k: int) -> Cylinder:
    if x.tower != T:
        raise TowerMismatch("element belongs to another tower")
    if not 0 <= k <= T.depth:
        raise LevelOrder(f"level {k} outside 0..{T.depth}")
    return Cylinder(T, k, None if k == 0 else x.components[k - 1])


# -- textual specs ------------------------------------------------------------

def parse_tower_spec(line: str) -> Tower:
    """Parse ``tower <kind> [p=<p>] depth=<d>``."""
    tokens = line.split()
    if tokens and tokens[0] == "tower":
        tokens = tokens[1:]
    if not tokens:
        raise ValueError("empty tower spec")
    kind, opts = tokens[0], {}
    for tok in tokens[1:]:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("p", "depth"):
            raise ValueError(f"bad tower option {tok!r}")
        opts[key] = int(val)
    if "depth" not in opts:
        raise ValueError("tower spec needs depth=<d>")
    return make_tower(kind, opts["depth"], opts.get("p"))


def read_tower_file(path) -> Tower:
    """Read a tower file: a ``tower`` line, or group-spec lines plus ``bond k:`` lines."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) == 1 and lines[0].startswith("tower") and "custom" not in lines[0]:
        return parse_tower_spec(lines[0])
    groups, images = [], {}
    for ln in lines:
        if ln.startswith("tower"):
            continue
        if ln.startswith("bond"):
            head, _, rest = ln.partition(":")
            images[int(head.split()[1])] = [int(x) for x in rest.split()]
        else:
            groups.append(fg.parse_group_spec(ln))
    if sorted(images) != list(range(1, len(groups))):
        raise ValueError("custom tower needs bond lines 1..depth-1")
    return custom_tower(groups, [images[k] for k in range(1, len(groups))],
                        spec=f"tower custom depth={len(groups)} file={Path(path).name}")
