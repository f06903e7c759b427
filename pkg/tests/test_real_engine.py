import pytest
from hypothesis import given, settings, strategies as st

from realgw.cli import table_keys
from realgw.complex_engine import complex_invariant
from realgw.core import ComplexKey, MemoStore, RealKey
from realgw.real_engine import (
    real_N,
    real_bracket,
    real_vanishes,
    recursion_terms,
    recursion_value,
    sign_factor,
)


@pytest.mark.parametrize("key, value", [
    (RealKey(2, 1, "tau", (3,)), -1),
    (RealKey(3, 1, "tau", (3, 3)), 1),
    (RealKey(2, 2, "tau", (3, 3, 3, 1)), 0),
    (RealKey(2, 3, "tau", (3, 3, 3)), 1),
    (RealKey(2, 3, "eta", (3, 3, 3)), -1),
])
def test_bracket_examples(key, value):
    assert real_bracket(key) == value


def test_hand_evaluation_of_twisted_cubic_case():
    # redo the hand evaluation term by term from the expansion
    leading, mult, terms = recursion_terms(2, 3, "tau", 3, 3, (3,))
    assert leading == RealKey(2, 3, "tau", (5, 3)) and real_vanishes(leading)
    total = mult * real_bracket(leading)
    for t in terms:
        total += t.multiplier * complex_invariant(t.complex_part) * real_bracket(t.real_part)
    assert complex_invariant(ComplexKey(3, 1, (2, 3, 2))) == 1
    assert real_bracket(RealKey(2, 1, "tau", (3, 1))) == -1
    # I = {3}: 2 * (0 - 1 * 1 * (-1)) = 2; I = {}: 1 * 1 * (-1) = -1
    assert total == 2 - 1 == 1


@pytest.mark.parametrize("key, value", [
    (RealKey(2, 1, "tau", (3,)), -1),
    (RealKey(2, 3, "tau", (3, 3, 3)), 1),
    (RealKey(2, 2, "tau", (3, 1)), 0),
])
def test_N_examples(key, value):
    assert real_N(key) == value


def test_sign_factor_parity():
    assert sign_factor(3, 3) == -1
    assert sign_factor(2, 3) == 1
    assert sign_factor(1, 1) == 1
    assert sign_factor(1, 5) == 1
    assert sign_factor(3, 5) == 1


def test_N_carries_sign_at_n3_d3():
    key = RealKey(3, 3, "tau", (5, 5, 3))
    assert real_N(key) == -real_bracket(key)


@pytest.mark.parametrize("key, expected", [
    (RealKey(2, 3, "tau", (3, 3, 3)), False),
    (RealKey(2, 3, "tau", (5, 3)), True),
    (RealKey(2, 1, "tau", (3, 3)), True),
    (RealKey(2, 3, "tau", (4, 3, 3)), True),
])
def test_real_vanishes(key, expected):
    assert real_vanishes(key) is expected


def test_k1_high_degree_vanishes():
    assert real_bracket(RealKey(2, 3, "tau", (7,))) == 0


@pytest.mark.parametrize("key, value", [
    (RealKey(2, 5, "tau", (3,) * 5), -5),
    (RealKey(3, 5, "tau", (5, 5, 5, 5, 1)), 5),
    (RealKey(2, 3, "tau", (3, 3, 3, 1)), 3),
])
def test_larger_values(key, value):
    assert real_bracket(key) == value


@pytest.mark.parametrize("n, d_max", [(2, 7), (3, 5)])
def test_against_complex_count_of_doubled_constraints(n, d_max):
    # non-real curves pair up under conjugation: |signed real| <= complex, same parity
    store = MemoStore()
    for key in table_keys(n, d_max, 6):
        real = real_bracket(key, store)
        cx = complex_invariant(ComplexKey(2 * n - 1, key.d, key.insertions * 2), store)
        assert abs(real) <= cx
        assert (real - cx) % 2 == 0


def _dimension_valid(n, d, head):
    last = n * (d + 1) - 2 + len(head) + 1 - sum(head)
    if last < 1 or last >= 2 * n or last % 2 == 0:
        return None
    return (*head, last)


real_cases = st.builds(
    lambda n, d, head: (n, d, head),
    st.integers(1, 3), st.sampled_from([1, 3, 5]),
    st.lists(st.sampled_from([1, 3, 5]), min_size=1, max_size=4))


@settings(max_examples=80, deadline=None)
@given(real_cases)
def test_divisor_consistency(case):
    n, d, head = case
    head = [c for c in head if c < 2 * n]
    ins = _dimension_valid(n, d, head)
    if ins is None:
        return
    store = MemoStore()
    key = RealKey(n, d, "tau", ins)
    with_one = RealKey(n, d, "tau", (*ins, 1))
    # put the 1 first so it is a pivot in the forced recursion
    pos = with_one.insertions.index(1)
    other = 0 if pos else 1
    assert recursion_value(with_one, store, (pos, other), force=True) == d * real_bracket(key, store)
    assert real_bracket(with_one, store) == d * real_bracket(key, store)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.lists(st.sampled_from([1, 3, 5, 7, 9]), min_size=1, max_size=5))
def test_degree_one_saturation(n, head):
    head = [c for c in head if c < 2 * n]
    ins = _dimension_valid(n, 1, head)
    if ins is None:
        return
    key = RealKey(n, 1, "tau", ins)
    expected = (-1) ** (n - 1)
    assert real_bracket(key) == expected
    for p in range(key.k):
        for q in range(key.k):
            if p != q:
                assert recursion_value(key, pivots=(p, q), force=True) == expected


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 7), st.lists(st.integers(1, 6), max_size=5))
def test_linearity_in_involution(n, d, ins):
    tau = RealKey(n, d, "tau", ins)
    store = MemoStore()
    assert real_bracket(tau.with_involution("eta"), store) == -real_bracket(tau, store)
    assert real_N(tau.with_involution("eta"), store) == -real_N(tau, store)


def test_recursion_value_rejects_bad_pivots():
    key = RealKey(2, 3, "tau", (3, 3, 3))
    with pytest.raises(ValueError):
        recursion_value(key, pivots=(1, 1))
    with pytest.raises(ValueError):
        recursion_value(key, pivots=(0, 3))
    with pytest.raises(ValueError):
        recursion_value(RealKey(2, 1, "tau", (3,)))


def test_cache_holds_tau_only():
    store = MemoStore()
    real_bracket(RealKey(2, 5, "eta", (3,) * 5), store)
    assert store.real_map and all(k.involution == "tau" for k in store.real_map)
