import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import colored_complexes
from cfhelly.collapse import (
    BudgetExhausted,
    CollapseSequence,
    CollapseStep,
    InvalidWitness,
    NotCollapsible,
    boost,
    boost_by_splitting,
    boost_witness,
    elementary_collapse,
    find_collapse,
    find_special_collapse,
    replay,
    split_vertex,
    split_witness,
)
from cfhelly.complex import ColoredComplex, from_mask, full_simplex

TRIANGLE = ColoredComplex((3,), [[0, 1], [1, 2], [0, 2]])


def explicit(cx):
    return frozenset(frozenset(from_mask(m)) for m in cx.faces())


def test_cone_point_removal():
    assert elementary_collapse(full_simplex((3,)), [0], 1).maximal_faces() == [(1, 2)]


def test_vertex_of_two_edges_is_not_free():
    with pytest.raises(NotCollapsible):
        elementary_collapse(TRIANGLE, [0], 1)


def test_collapsing_a_maximal_edge():
    # removing every face through {0,1} leaves the isolated vertex 0 and the edge {1,2}
    out = elementary_collapse(ColoredComplex((3,), [[0, 1], [1, 2]]), [0, 1], 2)
    assert out.maximal_faces() == [(0,), (1, 2)]


def test_face_too_large_for_d():
    with pytest.raises(NotCollapsible):
        elementary_collapse(full_simplex((3,)), [0, 1], 1)


def test_search_examples():
    seq = find_collapse(full_simplex((3,)), 1)
    replay(full_simplex((3,)), seq)
    assert find_collapse(TRIANGLE, 1) is None
    replay(TRIANGLE, find_collapse(TRIANGLE, 2))
    point = ColoredComplex((1,), [[0]])
    special = find_special_collapse(point, 2)
    # removing the vertex leaves the empty face, which is removed as a maximal face of its own
    assert special.steps == [CollapseStep((0,), (0,)), CollapseStep((), ())]
    assert special.is_special()


def test_special_sequence_for_simplex():
    seq = find_special_collapse(full_simplex((3,)), 1)
    replay(full_simplex((3,)), seq, require_special=True)


def test_void_and_empty_face_complexes():
    assert find_collapse(ColoredComplex((2,), []), 1).steps == []
    seq = find_collapse(ColoredComplex((2,), [[]]), 1)
    assert seq.steps == [CollapseStep((), ())]


def test_replay_rejects_bad_witnesses():
    with pytest.raises(InvalidWitness):
        replay(TRIANGLE, CollapseSequence(1, [CollapseStep((0,), (0, 1))]))
    with pytest.raises(InvalidWitness):
        replay(full_simplex((3,)), CollapseSequence(1, [CollapseStep((0,), (0, 1, 2))]))


def test_budget_exhaustion_is_reported():
    # octahedron boundary with a dangling edge: one collapse, then stuck
    sphere = ColoredComplex((7,), [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)] + [[0, 6]])
    with pytest.raises(BudgetExhausted):
        find_collapse(sphere, 2, budget=1)
    assert find_collapse(sphere, 2) is None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_search_matches_brute_force_on_all_small_complexes(n):
    for faces in oracles.all_complexes(n):
        maximal = [sorted(F) for F in faces if not any(F < G for G in faces)]
        cx = ColoredComplex((n,), maximal)
        for d in range(1, n + 1):
            want = oracles.brute_collapsible(faces, d)
            seq = find_collapse(cx, d)
            assert (seq is not None) == want, (maximal, d)
            if seq is not None:
                replay(cx, seq)
                special = find_special_collapse(cx, d)
                assert special is not None and special.is_special()
                replay(cx, special, require_special=True)


def test_split_examples():
    assert split_vertex(ColoredComplex((2,), [[0, 1]]), 0).maximal_faces() == [(0, 1, 2)]
    lonely = ColoredComplex((3,), [[1, 2]])
    assert split_vertex(lonely, 0).maximal_faces() == [(2, 3)]


def test_boost_examples():
    cx = ColoredComplex((2,), [[0], [1]])
    assert boost(cx, 1) == cx
    out = boost(cx, 2)
    assert out.n_per_color == (4,)
    assert out.maximal_faces() == [(0, 1), (2, 3)]


@settings(max_examples=80)
@given(colored_complexes(max_colors=2, max_per_color=3, max_faces=4), st.integers(1, 3), st.data())
def test_splitting_preserves_collapsibility(data, d, draw):
    cx = ColoredComplex(*data)
    seq = find_collapse(cx, d)
    v = draw.draw(st.integers(0, cx.n - 1))
    split = split_vertex(cx, v)
    images = [[u + (u > v) for u in F] + ([v + 1] if v in F else []) for F in cx.maximal_faces()]
    assert explicit(split) == (oracles.closure(images) if images else frozenset())
    if seq is not None:
        replay(split, split_witness(seq, v))
    else:
        assert find_collapse(split, d) is None


@settings(max_examples=40)
@given(colored_complexes(max_colors=2, max_per_color=2, max_faces=3), st.integers(1, 2), st.integers(1, 3))
def test_boost_agrees_with_repeated_splitting(data, d, m):
    cx = ColoredComplex(*data)
    boosted = boost(cx, m)
    assert boosted == boost_by_splitting(cx, m)
    seq = find_collapse(cx, d)
    if seq is not None:
        replay(boosted, boost_witness(cx, seq, m))
        for k in cx.all_k():
            if sum(k) and all(ki <= ni for ki, ni in zip(k, cx.n_per_color)):
                assert boosted.density(k) >= cx.density(k) - 1e-12
