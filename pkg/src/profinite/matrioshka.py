"""Binary codes for coherent elements of a tower.

Two codes are provided.

*Partition-tree codes* come from recursively halving clopen cells.  A cell
is an ordered list of elements at some level; it splits into its first
``ceil(m/2)`` members (bit 0) and its last ``floor(m/2)`` members (bit 1).
Once a cell is a single level-k element it is replaced, without spending a
bit, by the fiber above it at level k+1, and halving resumes.  Codes are
variable length whenever a fiber size is not a power of two.

*Block codes* give one fixed-width word per level.  The level-k label is
the level-(k-1) label followed by the index of the component inside its
fiber, so cutting a block back to the previous level's width recovers the
previous block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidCode, LevelOrder, SizeLimit, TowerMismatch
from .finite_group import MAX_ORDER
from .tower import CoherentElement, Cylinder, Tower

CONVENTION_VERSION = "cma-1"


@dataclass(frozen=True)
class EncodingConvention:
    version: str = CONVENTION_VERSION
    ordering_rule: str = "canonical element-label order"
    split_rule: str = "first ceil(m/2) -> 0, last floor(m/2) -> 1"


DEFAULT_CONVENTION = EncodingConvention()


@dataclass
class Node:
    level: int
    members: tuple  # indices into G_level, canonical order
    children: tuple | None = None

    @property
    def is_leaf(self):
        return self.children is None


@dataclass(frozen=True)
class Cell:
    """The set of coherent elements whose level-``level`` component is in ``members``."""

    tower: Tower
    level: int
    members: tuple

    def coherent_elements(self):
        proj = self.tower.projection(self.tower.depth, self.level)
        keep = set(self.members)
        return [self.tower.lift(t) for t in range(self.tower.levels[-1].order)
                if int(proj[t]) in keep]

    def cylinder(self) -> Cylinder | None:
        """The coarsest cylinder equal to this cell, or None if it is not one coset."""
        if self.level == 0:
            return Cylinder(self.tower, 0, None)
        for j in range(0, self.level + 1):
            proj = self.tower.projection(self.level, j)
            images = {int(proj[i]) for i in self.members}
            if len(images) == 1:
                y = images.pop()
                if int((proj == y).sum()) == len(self.members):
                    base = None if j == 0 else self.tower.level(j).element(y)
                    return Cylinder(self.tower, j, base)
        return None

    @property
    def labels(self):
        if self.level == 0:
            return ["*"]
        G = self.tower.level(self.level)
        return [G.element_labels[i] for i in self.members]


@dataclass(frozen=True)
class BitSequence:
    bits: str
    tower_depth_reached: int
    convention_version: str = CONVENTION_VERSION

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return self.bits

    def as_list(self):
        return [int(b) for b in self.bits]


def _expand(T: Tower, level: int, members: tuple) -> Node:
    # a single element below the top is the same cell as its fiber one level up
    while len(members) == 1 and level < T.depth:
        members = T.fibers(level)[0 if level == 0 else members[0]]
        level += 1
    return Node(level, tuple(members))


@dataclass
class PartitionTree:
    tower: Tower
    convention: EncodingConvention
    root: Node
    codes: dict = field(repr=False)  # top-level index -> bit string

    def leaf_count(self):
        return len(self.codes)


def build_partition_tree(T: Tower, conv: EncodingConvention = DEFAULT_CONVENTION) -> PartitionTree:
    if T.levels[-1].order > MAX_ORDER:
        raise SizeLimit(f"top level order {T.levels[-1].order} exceeds {MAX_ORDER}")
    root = _expand(T, 0, (0,))
    codes = {}
    stack = [(root, "")]
    while stack:
        node, path = stack.pop()
        if len(node.members) == 1:
            codes[node.members[0]] = path
            continue
        half = (len(node.members) + 1) // 2
        left = _expand(T, node.level, node.members[:half])
        right = _expand(T, node.level, node.members[half:])
        node.children = (left, right)
        stack.append((right, path + "1"))
        stack.append((left, path + "0"))
    return PartitionTree(T, conv, root, codes)


def encode(tree: PartitionTree, x: CoherentElement) -> BitSequence:
    if x.tower != tree.tower:
        raise TowerMismatch(f"element of {x.tower.spec} given to tree of {tree.tower.spec}")
    return BitSequence(tree.codes[x.top.index], tree.tower.depth, tree.convention.version)


def decode(tree: PartitionTree, bits) -> CoherentElement | Cell:
    """Walk the tree; a full code gives the element, a proper prefix gives its cell."""
    if isinstance(bits, BitSequence):
        if bits.convention_version != tree.convention.version:
            raise InvalidCode(0, f"convention {bits.convention_version} != {tree.convention.version}")
        bits = bits.bits
    node = tree.root
    for i, b in enumerate(str(bits)):
        if b not in "01":
            raise InvalidCode(i, f"symbol {b!r} is not a bit")
        if node.is_leaf:
            raise InvalidCode(i)
        node = node.children[int(b)]
    if node.is_leaf and node.level == tree.tower.depth:
        return tree.tower.lift(node.members[0])
    return Cell(tree.tower, node.level, node.members)


# -- block codes --------------------------------------------------------------

def _bits_for(m: int) -> int:
    return math.ceil(math.log2(m)) if m > 1 else 0


@dataclass(frozen=True)
class BlockCode:
    blocks: tuple
    widths: tuple
    m_values: tuple
    raw_widths: tuple
    convention_version: str = CONVENTION_VERSION

    def stripped(self, k: int) -> str:
        """Block k (1-based) without its left pad bits."""
        pad = self.widths[k - 1] - self.raw_widths[k - 1]
        return self.blocks[k - 1][pad:]

    def __str__(self):
        return "|".join(f"b{k}:{b}" for k, b in enumerate(self.blocks, start=1))


def block_layout(T: Tower):
    """Per level: (m_k, block width, unpadded label width, fiber-index width)."""
    out, raw = [], 0
    prev = 1
    for G in T.levels:
        fiber_bits = _bits_for(G.order // prev)
        raw += fiber_bits
        b = _bits_for(G.order)
        # a coherent label cannot fit in fewer bits than the fibers need
        out.append((G.order, max(b, raw), raw, fiber_bits))
        prev = G.order
    return out


def block_encode(T: Tower, x: CoherentElement) -> BlockCode:
    if x.tower != T:
        raise TowerMismatch("element belongs to another tower")
    if T.levels[-1].order > MAX_ORDER:
        raise SizeLimit(f"top level order exceeds {MAX_ORDER}")
    label, blocks = "", []
    layout = block_layout(T)
    for k, (m, width, raw, fbits) in enumerate(layout, start=1):
        below = 0 if k == 1 else x.components[k - 2].index
        fiber = T.fibers(k - 1)[below]
        pos = fiber.index(x.components[k - 1].index)
        label += format(pos, f"0{fbits}b") if fbits else ""
        blocks.append(label.rjust(width, "0"))
    return BlockCode(tuple(blocks), tuple(w for _, w, _, _ in layout),
                     tuple(m for m, _, _, _ in layout), tuple(r for _, _, r, _ in layout))


def block_truncate(code: BlockCode, k: int) -> str:
    """Block k, unpadded, cut to the unpadded width of level k-1."""
    if not 1 <= k <= len(code.blocks):
        raise LevelOrder(f"block index {k} outside 1..{len(code.blocks)}")
    keep = code.raw_widths[k - 2] if k > 1 else 0
    return code.stripped(k)[:keep]


def block_decode(T: Tower, code: BlockCode) -> CoherentElement:
    """Recover the element from the top block of a block code."""
    layout = block_layout(T)
    if len(code.blocks) != T.depth or tuple(w for _, w, _, _ in layout) != code.widths:
        raise TowerMismatch("block layout does not match tower")
    label = code.stripped(T.depth)
    idx, pos = 0, 0
    for k, (_, _, _, fbits) in enumerate(layout, start=1):
        chunk = label[pos:pos + fbits]
        pos += fbits
        fiber = T.fibers(k - 1)[idx]
        j = int(chunk, 2) if chunk else 0
        if j >= len(fiber):
            raise InvalidCode(pos - fbits, "fiber index out of range")
        idx = fiber[j]
    return T.lift(idx)


# -- serialisation ------------------------------------------------------------

def serialize_code(T: Tower, code) -> str:
    """``conv=<v> tower=<spec> code=<bits>`` or ``... blocks=b1:..|b2:..``."""
    if isinstance(code, BlockCode):
        return f"conv={code.convention_version} tower={T.spec} blocks={code}"
    return f"conv={code.convention_version} tower={T.spec} code={code.bits}"


def parse_code(text: str):
    """Inverse of :func:`serialize_code`: returns ``(version, tower_spec, payload)``."""
    conv, rest = text.split(" tower=", 1)
    if not conv.startswith("conv="):
        raise ValueError("serialized code must start with conv=<version>")
    version = conv[len("conv="):]
    if " code=" in rest:
        spec, bits = rest.rsplit(" code=", 1)
        return version, spec, BitSequence(bits, -1, version)
    spec, blocks = rest.rsplit(" blocks=", 1)
    words = [b.split(":", 1)[1] for b in blocks.split("|")]
    return version, spec, words
