import math
import random

import pytest
from hypothesis import given, strategies as st

from semicirc.circuit import evaluate, evaluate_generators
from semicirc.errors import EmptyProductError, FormatError
from semicirc.semigroups import (AVG, BOOL_OR, CLI_NAMES, GRAPH_OVERLAY, INT_MIN, INT_SUM,
                                 MULTISET, TROPICAL_MIN, WORD, Graph, Multiset, Word, catalog,
                                 combine, fold_ordered, get_instance)

from helpers import random_regular_circuit

SAMPLES = 1000


@pytest.mark.parametrize("inst", catalog(), ids=lambda s: s.name)
def test_associative_on_samples(inst):
    rng = random.Random(inst.name)
    for _ in range(SAMPLES):
        a, b, c = (inst.sample(rng) for _ in range(3))
        assert inst.op(a, inst.op(b, c)) == inst.op(inst.op(a, b), c)


@pytest.mark.parametrize("inst", catalog(), ids=lambda s: s.name)
def test_commutative_flag_matches_behaviour(inst):
    rng = random.Random(inst.name + "comm")
    pairs = [(inst.sample(rng), inst.sample(rng)) for _ in range(SAMPLES)]
    commutes = all(inst.op(a, b) == inst.op(b, a) for a, b in pairs)
    assert commutes == inst.commutative


@pytest.mark.parametrize("inst", catalog(), ids=lambda s: s.name)
def test_idempotent_flag_matches_behaviour(inst):
    rng = random.Random(inst.name + "idem")
    values = [inst.sample(rng) for _ in range(SAMPLES)]
    assert all(inst.op(a, a) == a for a in values) == inst.idempotent


def test_combine_examples():
    assert combine(INT_SUM, 3, 4) == 7
    assert combine(INT_MIN, 5, 2) == 2
    got = combine(MULTISET, Multiset({1: 1}), Multiset({1: 1, 3: 2}))
    assert got == Multiset({1: 2, 3: 2})
    assert repr(got) == "{x1:2,x3:2}"


def test_fold_ordered_examples():
    word = fold_ordered(WORD, [Word.generator(2), Word.generator(5), Word.generator(1)])
    assert str(word) == "x2 x5 x1"
    assert fold_ordered(INT_SUM, [1, 2, 3]) == 6
    assert fold_ordered(INT_MIN, [4]) == 4


def test_fold_of_nothing_is_an_error():
    with pytest.raises(EmptyProductError):
        fold_ordered(INT_SUM, [])


def test_catalog_contents():
    names = {s.name for s in catalog()}
    assert {"int-sum", "int-min", "int-max", "bool-or", "bool-and", "tropical-min", "avg",
            "graph-overlay", "multiset", "word"} <= names
    assert set(CLI_NAMES) <= names
    assert AVG.op((3, 1), (7, 2)) == (10, 3)
    g = GRAPH_OVERLAY.op(Graph(frozenset({1}), frozenset()), Graph(frozenset({2}), frozenset({(2, 2)})))
    assert g == Graph(frozenset({1, 2}), frozenset({(2, 2)}))
    assert not WORD.commutative and not WORD.idempotent
    assert TROPICAL_MIN.op(math.inf, 4) == 4


def test_unknown_instance():
    with pytest.raises(KeyError):
        get_instance("int-xor")


def test_multiset_never_stores_zero_counts():
    m = Multiset({0: 0, 2: 1})
    assert list(m) == [2]
    with pytest.raises(ValueError):
        Multiset({1: -1})


def test_multiset_substitute_needs_support():
    with pytest.raises(EmptyProductError):
        Multiset().substitute([1], INT_SUM.op)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=8))
def test_multiset_sum_of_generators_counts(vars_):
    total = fold_ordered(MULTISET, [Multiset.generator(v) for v in vars_])
    assert dict(total) == {v: vars_.count(v) for v in set(vars_)}


@given(st.lists(st.integers(0, 5), min_size=1, max_size=8))
def test_word_keeps_order(vars_):
    assert fold_ordered(WORD, [Word.generator(v) for v in vars_]).letters == tuple(vars_)


@pytest.mark.parametrize("text,inst", [("{x1:2,x3:1}", MULTISET), ("x2 x0", WORD),
                                       ("5,2", AVG), ("inf", TROPICAL_MIN), ("1", BOOL_OR)])
def test_parse_format_round_trip(text, inst):
    assert inst.parse(inst.format(inst.parse(text))) == inst.parse(text)


@pytest.mark.parametrize("text,inst", [("{}", MULTISET), ("", WORD), ("5", AVG), ("x", INT_SUM),
                                       ("maybe", BOOL_OR)])
def test_parse_rejects_garbage(text, inst):
    with pytest.raises(FormatError):
        inst.parse(text)


def test_freeness_on_random_circuits():
    """Multiset evaluation followed by substitution equals direct evaluation."""
    rng = random.Random(11)
    targets = [s for s in catalog() if s.commutative and s is not MULTISET]
    for _ in range(100):
        n, m = rng.randint(1, 32), rng.randint(1, 12)
        c = random_regular_circuit(rng, n, m)
        # parallel wires make multiplicities above one, which freeness must also handle
        if c.gates:
            c.gates[-1] = c.gates[-1] + (rng.randrange(n),)
        words = evaluate_generators(c, MULTISET)
        for s in targets:
            values = [s.sample(rng) for _ in range(n)]
            direct = evaluate(c, s, values)
            assert direct == {k: w.substitute(values, s.op) for k, w in words.items()}, s.name
