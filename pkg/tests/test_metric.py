from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from profinite import EmptyInput, LengthMismatch, cantor_distance, hamming, neighbors, subcube
from profinite.metric import hypercube_split

from oracles import first_diff_via_xor


def words(n):
    return st.text(alphabet="01", min_size=n, max_size=n)


same_length_triples = st.integers(1, 24).flatmap(lambda n: st.tuples(words(n), words(n), words(n)))


def test_cantor_examples():
    assert cantor_distance("0110", "0110") == 0
    assert cantor_distance("0110", "0100") == Fraction(1, 8)
    assert cantor_distance("1000", "0000") == Fraction(1, 2)
    assert cantor_distance([0, 1, 1, 0], "0100") == Fraction(1, 8)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        cantor_distance("01", "011")
    with pytest.raises(LengthMismatch):
        hamming("01", "011")


def test_hamming_examples():
    assert hamming("0101", "0101") == 0
    assert hamming("0101", "0110") == 2
    assert hamming("0000", "1111") == 4


@given(same_length_triples)
def test_cantor_matches_xor_oracle(t):
    x, y, _ = t
    k = first_diff_via_xor(x, y)
    assert cantor_distance(x, y) == (0 if k is None else Fraction(1, 2**k))


@given(same_length_triples)
def test_strong_triangle(t):
    x, y, z = t
    assert cantor_distance(x, z) <= max(cantor_distance(x, y), cantor_distance(y, z))
    assert cantor_distance(x, y) == cantor_distance(y, x)


@given(same_length_triples)
def test_hamming_axioms(t):
    x, y, z = t
    assert hamming(x, y) == hamming(y, x)
    assert (hamming(x, y) == 0) == (x == y)
    assert hamming(x, z) <= hamming(x, y) + hamming(y, z)


@given(words(9))
def test_neighbors_are_hamming_one(w):
    nb = neighbors(w)
    assert len(nb) == len(set(nb)) == 9
    assert all(hamming(w, v) == 1 for v in nb)


def test_recursive_hypercube():
    zeros, ones = hypercube_split(3)
    assert len(zeros) == len(ones) == 8
    assert set(zeros) | set(ones) == {format(i, "04b") for i in range(16)}
    # each vertex keeps its 3 neighbors in its own copy and gains one across
    for w in zeros:
        assert sum(v in zeros for v in neighbors(w)) == 3


def test_subcube_examples():
    s = subcube(["0110"])
    assert (s.p, s.free_dims) == (4, 0)
    s = subcube(["0101", "0110"])
    assert (s.fixed_prefix, s.free_dims) == ("01", 2)
    assert len(s) == 4 and s.vertices() == ["0100", "0101", "0110", "0111"]
    s = subcube(["0000", "1000"])
    assert (s.p, s.free_dims, len(s)) == (0, 4, 16)


def test_subcube_errors():
    with pytest.raises(EmptyInput):
        subcube([])
    with pytest.raises(LengthMismatch):
        subcube(["01", "011"])


@given(st.integers(1, 12).flatmap(lambda n: st.lists(words(n), min_size=1, max_size=6)))
def test_subcube_soundness(ws):
    s = subcube(ws)
    assert all(w in s for w in ws)
    if s.p < s.n:
        assert len({w[s.p] for w in ws}) == 2
