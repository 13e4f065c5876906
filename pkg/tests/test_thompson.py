import random

import pytest
from hypothesis import given, settings, strategies as st

from lodha_moore.prefix import (
    IDENTITY_TABLE,
    InvalidTable,
    PrefixTable,
    X0_TABLE,
    X1_TABLE,
    compose_tables,
    is_complete_antichain,
    maximal_refinement,
)
from lodha_moore.thompson import (
    IDENTITY_PAIR,
    X0_PAIR,
    X1_PAIR,
    BinTree,
    TreePair,
    caret_count,
    from_prefix_table,
    multiply,
    random_pair,
    reduce,
    to_prefix_table,
    word_to_pair,
)

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(0, 12)


def test_antichains():
    assert is_complete_antichain(["0", "10", "11"])
    assert not is_complete_antichain(["0", "1", "10"])
    assert not is_complete_antichain(["0", "10"])
    assert maximal_refinement(["0", "1"], ["00", "01", "1"]) == ["00", "01", "1"]
    assert maximal_refinement(["0", "10", "11"], ["00", "01", "1"]) == ["00", "01", "10", "11"]


def test_invalid_tables():
    with pytest.raises(InvalidTable):
        PrefixTable((("0", "1"), ("1", "0")))  # order reversing
    with pytest.raises(InvalidTable):
        PrefixTable((("0", "0"),))


def test_tree_text_forms():
    t = BinTree(("0", "10", "11"))
    assert t.to_parens() == "(()(()()))"
    assert BinTree.from_parens("( () (()()) )") == t
    assert BinTree.from_nested(t.to_nested()) == t
    assert t.expand(1).leaves == ("00", "01", "10", "11")
    with pytest.raises(ValueError):
        BinTree.from_parens("(()")


def test_generator_pairs():
    assert X0_PAIR.carets == 2 and X1_PAIR.carets == 3
    assert to_prefix_table(X0_PAIR) == X0_TABLE


def test_x0_x1_product():
    p = multiply(X0_PAIR, X1_PAIR)
    assert p.carets == 3
    assert to_prefix_table(p) == compose_tables(X0_TABLE, X1_TABLE)
    assert to_prefix_table(p).rows == (("00", "0"), ("010", "10"), ("011", "110"), ("1", "111"))


@pytest.mark.parametrize(
    "relator",
    [
        "x0 x1^-1 x0^-1 x1 x0 x1 x0^-1 x0^-1 x1^-1 x0",
        "x0 x1^-1 x0^-2 x1 x0^2 x1 x0^-1 x0^-2 x1^-1 x0^2",
    ],
)
def test_relators_are_trivial(relator):
    assert word_to_pair(relator) == IDENTITY_PAIR


def test_core_word_carets():
    # x0 x1^2 x0^-1 x1^-1 x0 x1^-1 x0^-1; reversed letter order gives 7
    assert caret_count(word_to_pair("x0 x1^2 x0^-1 x1^-1 x0 x1^-1 x0^-1")) == 4
    assert caret_count(word_to_pair("x0^-1 x1^-1 x0 x1^-1 x0^-1 x1^2 x0")) == 7


def test_word_to_pair_rejects_y():
    with pytest.raises(ValueError):
        word_to_pair("y_10")


def test_reduce_cancels_common_carets():
    p = IDENTITY_PAIR.expand(1).expand(2).expand(1)
    assert p.carets == 3 and not p.is_reduced()
    assert reduce(p) == IDENTITY_PAIR and p.is_identity()


@settings(max_examples=300, deadline=None)
@given(seeds, sizes)
def test_reduce_is_idempotent_and_reduced(seed, n):
    p = random_pair(random.Random(seed), n)
    assert p.is_reduced() and reduce(p) == p


@settings(max_examples=300, deadline=None)
@given(seeds, sizes, st.integers(1, 5))
def test_expansion_does_not_change_the_element(seed, n, i):
    p = random_pair(random.Random(seed), n)
    q = p.expand(min(i, len(p.domain.leaves)))
    assert reduce(q) == p


@settings(max_examples=300, deadline=None)
@given(seeds, sizes)
def test_table_round_trip(seed, n):
    p = random_pair(random.Random(seed), n)
    assert from_prefix_table(to_prefix_table(p)) == p
    assert TreePair.from_json(p.to_json()) == p


@settings(max_examples=300, deadline=None)
@given(seeds, sizes, sizes)
def test_multiply_matches_table_oracle(seed, n, m):
    rng = random.Random(seed)
    p, q = random_pair(rng, n), random_pair(rng, m)
    expected = compose_tables(to_prefix_table(p), to_prefix_table(q))
    assert multiply(p, q) == from_prefix_table(expected)


@settings(max_examples=200, deadline=None)
@given(seeds, sizes, sizes, sizes)
def test_multiply_is_associative(seed, n, m, k):
    rng = random.Random(seed)
    p, q, r = (random_pair(rng, s) for s in (n, m, k))
    assert (p * q) * r == p * (q * r)


@settings(max_examples=200, deadline=None)
@given(seeds, sizes)
def test_inverse(seed, n):
    p = random_pair(random.Random(seed), n)
    assert multiply(p, p.inverse()) == IDENTITY_PAIR
    assert to_prefix_table(p.inverse()) == to_prefix_table(p).inverse()


def test_identity_table():
    assert from_prefix_table(IDENTITY_TABLE) == IDENTITY_PAIR
    assert IDENTITY_TABLE.apply_bits("0110") == "0110"
    assert X0_TABLE.apply_bits("0") is None
