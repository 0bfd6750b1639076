import json

import pytest
from hypothesis import given

import oracles
from conftest import colored_complexes
from cfhelly.complex import ColoredComplex, from_mask, full_simplex, to_mask


def test_color_of_block_boundaries():
    cx = ColoredComplex((2, 3), [])
    assert [cx.color_of(v) for v in (0, 1, 2, 4)] == [1, 1, 2, 2]


def test_is_face_examples():
    assert full_simplex((3,)).is_face([0, 2])
    assert not ColoredComplex((3,), [[0, 1], [1, 2]]).is_face([0, 2])
    assert ColoredComplex((3,), [[1]]).is_face([])
    assert not ColoredComplex((3,), []).is_face([])


def test_induced_subcomplex():
    cx = ColoredComplex((3,), [[0, 1], [1, 2]])
    assert cx.induced([0, 1]).maximal_faces() == [(0, 1)]
    assert cx.induced([]).maximal_faces() == [()]
    assert cx.induced([0, 1, 2]) == cx


def test_colorful_f_examples():
    complete = ColoredComplex((2, 2), [[0, 2], [0, 3], [1, 2], [1, 3]])
    assert complete.colorful_f((1, 1)) == 4
    assert ColoredComplex((2, 2), []).colorful_f((1, 1)) == 0
    assert ColoredComplex((2, 2), [[0, 2], [0, 3], [1, 2]]).colorful_f((1, 1)) == 3


def test_dim_in_color():
    assert full_simplex((3,)).dim_in_color(1) == 2
    assert ColoredComplex((2, 2), [[0, 2], [1, 3]]).dim_in_color(1) == 0
    assert ColoredComplex((2, 2), [[2, 3]]).dim_in_color(1) == -1


def test_rejects_out_of_range_vertices():
    with pytest.raises(ValueError):
        ColoredComplex.from_dict({"n_per_color": [2], "maximal_faces": [[0, 2]]})


def test_json_round_trip_is_canonical():
    text = json.dumps({"maximal_faces": [[0, 2], [1, 3]], "n_per_color": [2, 2]}, sort_keys=True)
    cx = ColoredComplex.from_dict(json.loads(text))
    assert json.dumps(cx.to_dict(), sort_keys=True) == text


@given(colored_complexes())
def test_faces_match_explicit_closure(data):
    n, faces = data
    cx = ColoredComplex(n, faces)
    expected = oracles.closure(faces) if faces else frozenset()
    assert {frozenset(from_mask(m)) for m in cx.faces()} == expected
    assert cx.num_faces() == len(expected)
    for i in range(1, cx.c + 1):
        assert cx.dim_in_color(i) == oracles.color_dim(expected, n, i - 1)


@given(colored_complexes(max_faces=7))
def test_colorful_f_methods_agree(data):
    n, faces = data
    cx = ColoredComplex(n, faces)
    explicit = oracles.closure(faces) if faces else frozenset()
    counts = cx.signature_counts()
    for k in cx.all_k():
        want = oracles.colorful_count(explicit, n, k)
        assert cx.colorful_f(k, method="enumerate") == want
        assert cx.colorful_f(k, method="inclusion_exclusion") == want
        assert counts.get(k, 0) == want
        assert 0 <= cx.density(k) <= 1


@given(colored_complexes())
def test_maximal_faces_form_an_antichain(data):
    cx = ColoredComplex(*data)
    masks = [to_mask(F) for F in cx.maximal_faces()]
    assert all(a == b or a & ~b for a in masks for b in masks)
    assert ColoredComplex.from_dict(cx.to_dict()) == cx
