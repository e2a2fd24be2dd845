import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from profinite import (BitSequence, InvalidCode, LevelOrder, TowerMismatch, block_decode,
                       block_encode, block_truncate, build_partition_tree, coherent_element,
                       decode, encode, make_tower)
from profinite.matrioshka import Cell, block_layout, parse_code, serialize_code

SMALL = [("binary", 5, None), ("padic", 3, 3), ("cyclotomic", 3, 3), ("cyclotomic", 2, 5),
         ("f2ab", 2, None), ("aut_f2ab", 2, None)]


def cyc32():
    return make_tower("cyclotomic", 2, p=3)


def test_binary_code_is_the_word():
    T = make_tower("binary", 4)
    tree = build_partition_tree(T)
    for x in T.coherent_elements():
        assert encode(tree, x).bits == x.labels[-1]
    assert encode(tree, coherent_element(T, ["1", "10", "101", "1010"])).bits == "1010"


def test_cyclotomic_depth1_one_bit():
    T = make_tower("cyclotomic", 1, p=3)
    tree = build_partition_tree(T)
    assert tree.codes == {0: "0", 1: "1"}
    assert encode(tree, coherent_element(T, ["2"])).bits == "1"


def test_cyclotomic_depth2_codes():
    T = cyc32()
    tree = build_partition_tree(T)
    # fiber over 2 is {2, 5, 8}: 2 -> 00, 5 -> 01, 8 -> 1 after the level-1 bit
    got = {x.labels[-1]: encode(tree, x).bits for x in T.coherent_elements()}
    assert got == {"1": "000", "4": "001", "7": "01", "2": "100", "5": "101", "8": "11"}


def test_decode_prefix_gives_cell():
    T = cyc32()
    tree = build_partition_tree(T)
    cell = decode(tree, "10")
    assert isinstance(cell, Cell)
    assert sorted(x.labels for x in cell.coherent_elements()) == [["2", "2"], ["2", "5"]]
    root = decode(tree, "")
    assert len(root.coherent_elements()) == 6
    one = decode(tree, "1")
    assert one.cylinder().base.label == "2"


def test_decode_dead_branch():
    tree = build_partition_tree(cyc32())
    with pytest.raises(InvalidCode) as err:
        decode(tree, "110")
    assert err.value.index == 2
    with pytest.raises(InvalidCode):
        decode(tree, "1x")


def test_encode_tower_mismatch():
    tree = build_partition_tree(cyc32())
    other = make_tower("cyclotomic", 2, p=5)
    with pytest.raises(TowerMismatch):
        encode(tree, next(other.coherent_elements()))


def test_convention_mismatch_rejected():
    tree = build_partition_tree(cyc32())
    with pytest.raises(InvalidCode):
        decode(tree, BitSequence("101", 2, "cma-0"))


@pytest.mark.parametrize("kind,depth,p", SMALL)
def test_bijection_and_counting(kind, depth, p):
    T = make_tower(kind, depth, p)
    tree = build_partition_tree(T)
    codes = [encode(tree, x).bits for x in T.coherent_elements()]
    assert len(set(codes)) == T.levels[-1].order == tree.leaf_count()
    # prefix-free: no code is a prefix of another
    for a, b in itertools.permutations(codes, 2):
        assert not b.startswith(a)
    for x in T.coherent_elements():
        assert decode(tree, encode(tree, x)) == x


@pytest.mark.parametrize("kind,depth,p", SMALL)
def test_prefix_coherence(kind, depth, p):
    T = make_tower(kind, depth, p)
    full = build_partition_tree(T)
    short = build_partition_tree(T.truncate(depth - 1)) if depth > 1 else None
    if short is None:
        pytest.skip("depth 1")
    for x in T.coherent_elements():
        xs = coherent_element(short.tower, x.components[:-1])
        assert encode(full, x).bits.startswith(encode(short, xs).bits)


def test_convention_determinism():
    T = make_tower("aut_f2ab", 2)
    a, b = build_partition_tree(T), build_partition_tree(T)
    assert a.codes == b.codes


def test_block_widths():
    T = cyc32()
    layout = block_layout(T)
    assert [w for _, w, _, _ in layout] == [1, 3]
    assert block_layout(make_tower("cyclotomic", 1, p=2))[0][1] == 0
    code = block_encode(make_tower("cyclotomic", 1, p=2), next(make_tower("cyclotomic", 1, p=2).coherent_elements()))
    assert code.blocks == ("",)


def test_block_example():
    T = cyc32()
    code = block_encode(T, coherent_element(T, ["2", "5"]))
    assert code.blocks == ("1", "101")
    assert code.m_values == (2, 6)
    assert block_truncate(code, 2) == "1"
    assert block_truncate(code, 1) == ""
    with pytest.raises(LevelOrder):
        block_truncate(code, 3)


@pytest.mark.parametrize("kind,depth,p", SMALL)
def test_block_coherence_and_decode(kind, depth, p):
    T = make_tower(kind, depth, p)
    for x in T.coherent_elements():
        code = block_encode(T, x)
        for k in range(1, depth + 1):
            prev = code.stripped(k - 1) if k > 1 else ""
            assert block_truncate(code, k) == prev
            assert len(code.blocks[k - 1]) == code.widths[k - 1]
        assert block_decode(T, code) == x


def test_block_width_grows_when_fibers_waste_bits():
    # fibers 2,3,3,3 need 1+2+2+2 = 7 bits, ceil(log2 54) = 6
    T = make_tower("cyclotomic", 4, p=3)
    layout = block_layout(T)
    assert layout[-1][0] == 54
    assert layout[-1][1] == 7


def test_serialization_roundtrip():
    T = cyc32()
    x = coherent_element(T, ["2", "5"])
    tree = build_partition_tree(T)
    s = serialize_code(T, encode(tree, x))
    assert s == "conv=cma-1 tower=tower cyclotomic p=3 depth=2 code=101"
    version, spec, bits = parse_code(s)
    assert (version, spec) == ("cma-1", T.spec)
    assert decode(tree, bits) == x
    s = serialize_code(T, block_encode(T, x))
    assert s.endswith("blocks=b1:1|b2:101")
    assert parse_code(s)[2] == ["1", "101"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_decode_every_prefix_contains_element(tower_args, data):
    T = make_tower(*tower_args)
    tree = build_partition_tree(T)
    x = T.lift(data.draw(st.integers(0, T.levels[-1].order - 1)))
    bits = encode(tree, x).bits
    cut = data.draw(st.integers(0, len(bits)))
    out = decode(tree, bits[:cut])
    if cut == len(bits):
        assert out == x
    else:
        assert x in out.coherent_elements()


def test_cell_cylinder_detection():
    tree = build_partition_tree(cyc32())
    assert decode(tree, "").cylinder().level == 0
    assert decode(tree, "10").cylinder() is None
    Z = decode(tree, "1").cylinder()
    assert (Z.level, Z.base.label) == (1, "2")
