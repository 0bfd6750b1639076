from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cfhelly.extremal import ExtremalSpec, build_extremal
from cfhelly.geometry import (
    Constraint,
    ConvexBody,
    FaceCapExceeded,
    GeometricFamily,
    check_generic,
    family_from_dict,
    family_to_dict,
    feasible,
    nerve,
    random_generic_hyperplanes,
    realize_extremal,
)

LINES = [ConvexBody.hyperplane([1, 0], 0), ConvexBody.hyperplane([0, 1], 0), ConvexBody.hyperplane([1, 1], 1)]


def test_disjoint_boxes():
    assert not feasible([ConvexBody.box([0, 0], [1, 1]), ConvexBody.box([2, 2], [3, 3])], 2)
    assert feasible([ConvexBody.box([0, 0], [1, 1]), ConvexBody.box([1, 1], [3, 3])], 2)


def test_whole_space_only():
    assert feasible([ConvexBody.whole(), ConvexBody.whole()], 3)


def test_three_lines():
    assert all(feasible([a, b], 2) for a, b in [(0, 1), (0, 2), (1, 2)] for a, b in [(LINES[a], LINES[b])])
    assert not feasible(LINES, 2)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ValueError):
        feasible([ConvexBody.hyperplane([1, 0, 0], 0)], 2)


def test_nerve_examples():
    assert nerve(GeometricFamily(2, [[ConvexBody.box([0, 0], [1, 1])]])).maximal_faces() == [(0,)]
    fam = GeometricFamily(2, [[ConvexBody.whole()], [ConvexBody.box([0, 0], [1, 1]), ConvexBody.box([2, 2], [3, 3])]])
    assert nerve(fam).maximal_faces() == [(0, 1), (0, 2)]
    lines = GeometricFamily(2, [LINES])
    assert nerve(lines).maximal_faces() == [(0, 1), (0, 2), (1, 2)]


def test_face_cap():
    fam = GeometricFamily(1, [[ConvexBody.whole()] * 4])
    with pytest.raises(FaceCapExceeded):
        nerve(fam, max_face_size=3)
    assert nerve(fam, max_face_size=4).maximal_faces() == [(0, 1, 2, 3)]


def test_genericity_examples():
    planes, cert = random_generic_hyperplanes(3, 2, seed=5)
    assert cert.ok and cert.independent_subsets_checked == 3 and cert.inconsistent_subsets_checked == 1
    assert not feasible(planes, 2)
    points, _ = random_generic_hyperplanes(4, 1, seed=1)
    assert all(not feasible([a, b], 1) for i, a in enumerate(points) for b in points[i + 1:])
    assert check_generic([[1, 0]], [3], 2)[0]
    assert not check_generic([[1, 2], [2, 4]], [0, 1], 2)[0]
    assert not check_generic([[1, 0], [0, 1], [1, 1]], [0, 0, 0], 2)[0]


def test_family_json_round_trip():
    data = {
        "d": 2,
        "blocks": [
            [{"kind": "hpoly", "constraints": [{"a": ["1", "0"], "b": "1/2", "rel": "<="}, {"a": [0, 1], "b": 2, "rel": ">="}]}],
            [{"kind": "whole"}],
        ],
    }
    fam = family_from_dict(data)
    body = fam.blocks[0][0]
    assert body.constraints[0].b == Fraction(1, 2)
    assert body.constraints[1] == Constraint((Fraction(0), Fraction(-1)), Fraction(-2), "<=")
    assert family_from_dict(family_to_dict(fam)) == fam


@st.composite
def small_systems(draw):
    d = draw(st.integers(1, 3))
    count = draw(st.integers(1, 5))
    rows = []
    for _ in range(count):
        a = draw(st.lists(st.integers(-3, 3), min_size=d, max_size=d))
        b = draw(st.integers(-4, 4))
        rel = draw(st.sampled_from(["<=", "<=", "="]))
        rows.append((a, b, rel))
    return d, rows


@settings(max_examples=150)
@given(small_systems())
def test_simplex_matches_fourier_motzkin(system):
    d, rows = system
    bodies = [ConvexBody("hpoly", (Constraint(tuple(map(Fraction, a)), Fraction(b), rel),)) for a, b, rel in rows]
    assert feasible(bodies, d) == oracles.fm_feasible(rows)


@settings(max_examples=30)
@given(st.integers(1, 2), st.integers(1, 3), st.integers(0, 10**6))
def test_helly_shortcut_does_not_change_the_nerve(d, count, seed):
    import random

    rnd = random.Random(seed)
    boxes = []
    for _ in range(count + 2):
        lo = [rnd.randint(0, 4) for _ in range(d)]
        boxes.append(ConvexBody.box(lo, [x + rnd.randint(0, 3) for x in lo]))
    fam = GeometricFamily(d, [boxes[: len(boxes) // 2], boxes[len(boxes) // 2:] + [ConvexBody.whole()]])
    assert nerve(fam, helly=True) == nerve(fam, helly=False)


@pytest.mark.parametrize("spec", [ExtremalSpec(2, 1, 4, (2, 2)), ExtremalSpec(2, 2, 4, (1, 3)), ExtremalSpec(3, 2, 3, (0, 1, 2))])
def test_realized_extremal_family(spec):
    fam, cert = realize_extremal(spec, seed=11)
    assert cert.ok
    assert nerve(fam) == build_extremal(spec).complex
