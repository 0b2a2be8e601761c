import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenwave.qubo import QuboMatrix, VariableLayout, new_qubo

from oracles import dense_energy


def test_new_qubo_is_empty():
    q = new_qubo(6)
    assert q.evaluate([1, 0, 1, 1, 0, 1]) == 0.0
    assert len(q) == 0


def test_new_qubo_grid_dimension():
    assert new_qubo(216).n == 216


def test_new_qubo_rejects_zero():
    with pytest.raises(ValueError):
        new_qubo(0)


def test_add_term_canonicalizes_to_upper_triangle():
    q = new_qubo(6)
    q.add_term(3, 1, 2.0)
    assert q.terms == {(1, 3): 2.0}


def test_add_term_accumulates():
    q = new_qubo(6)
    q.add_term(2, 4, 1.5)
    q.add_term(4, 2, 1.5)
    assert q.coefficient(2, 4) == 3.0


def test_add_term_range_check():
    q = new_qubo(6)
    with pytest.raises(IndexError):
        q.add_term(7, 0, 1.0)
    with pytest.raises(IndexError):
        q.add_term(0, -1, 1.0)


def test_add_then_subtract_restores_matrix():
    q = new_qubo(4)
    q.add_term(0, 2, 1.25)
    before = dict(q.terms)
    q.add_term(2, 0, 0.5)
    q.add_term(0, 2, -0.5)
    assert q.terms == before


def test_evaluate_single_diagonal():
    q = new_qubo(1)
    q.add_term(0, 0, -5.0)
    assert q.evaluate([1]) == -5.0
    assert q.evaluate([0]) == 0.0


def test_evaluate_length_mismatch():
    q = new_qubo(3)
    with pytest.raises(ValueError):
        q.evaluate([1, 0])


def test_evaluate_matches_dense_reference():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = 20
        q = new_qubo(n)
        for _ in range(60):
            r = int(rng.integers(0, n))
            c = int(rng.integers(0, n))
            q.add_term(r, c, float(rng.integers(-50, 51)))
        x = rng.integers(0, 2, size=n)
        assert q.evaluate(x) == dense_energy(q.to_dense(), x)


def test_evaluate_is_order_invariant():
    entries = [(0, 3, 1.7), (2, 2, -4.1), (1, 3, 0.3), (0, 0, 2.9)]
    q1 = new_qubo(4)
    q2 = new_qubo(4)
    for r, c, w in entries:
        q1.add_term(r, c, w)
    for r, c, w in reversed(entries):
        q2.add_term(r, c, w)
    x = [1, 1, 1, 1]
    assert q1.evaluate(x) == q2.evaluate(x)


@settings(max_examples=50, deadline=None)
@given(
    entries=st.lists(
        st.tuples(
            st.integers(0, 9), st.integers(0, 9), st.integers(-100, 100).map(float)
        ),
        max_size=30,
    ),
    bits=st.lists(st.integers(0, 1), min_size=10, max_size=10),
)
def test_merge_is_linear(entries, bits):
    half = len(entries) // 2
    qa, qb, qsum = new_qubo(10), new_qubo(10), new_qubo(10)
    for r, c, w in entries[:half]:
        qa.add_term(r, c, w)
        qsum.add_term(r, c, w)
    for r, c, w in entries[half:]:
        qb.add_term(r, c, w)
        qsum.add_term(r, c, w)
    assert qsum.evaluate(bits) == qa.evaluate(bits) + qb.evaluate(bits)


def test_var_index_examples():
    layout = VariableLayout(6)
    assert layout.var_index(0, 1) == 0
    assert layout.var_index(5, 6) == 35


def test_var_index_round_trip_full_grid():
    layout = VariableLayout(36)
    for index in range(216):
        i, j = layout.decode(index)
        assert layout.var_index(i, j) == index


def test_var_index_range_checks():
    layout = VariableLayout(4)
    with pytest.raises(IndexError):
        layout.var_index(4, 1)
    with pytest.raises(IndexError):
        layout.var_index(0, 7)
    with pytest.raises(IndexError):
        layout.var_index(0, 0)
    with pytest.raises(IndexError):
        layout.decode(24)


def test_dump_terms_sorted_and_parseable():
    q = new_qubo(5)
    q.add_term(4, 0, 1.5)
    q.add_term(1, 1, -2.0)
    q.add_term(2, 3, 0.25)
    lines = q.dump_terms().splitlines()
    keys = [tuple(int(v) for v in line.split()[:2]) for line in lines]
    assert keys == sorted(keys)
    rebuilt = new_qubo(5)
    for line in lines:
        r, c, w = line.split()
        rebuilt.add_term(int(r), int(c), float(w))
    assert rebuilt.terms == q.terms
