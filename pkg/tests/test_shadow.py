import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridkk.grid import GridShape, PointSet
from gridkk.shadow import (
    ShadowKind,
    binary_lower_shadow,
    binary_upper_shadow,
    complement,
    complement_point,
    d_plus_shadow,
    d_shadow,
    gamma_shadow,
    point_shadow_indices,
    shadow,
)

from oracles import d_plus_ref, d_ref, gamma_ref, grid


@st.composite
def families(draw, max_n=4, max_k=4, binary=False):
    n = draw(st.integers(1, max_n))
    k = 2 if binary else draw(st.integers(2, max_k))
    pts = grid(n, k)
    chosen = draw(st.lists(st.sampled_from(pts), max_size=len(pts), unique=True))
    return GridShape(n, k), set(chosen)


def test_examples():
    s = GridShape(3, 3)
    assert d_shadow(PointSet.parse(s, ["012"])).points() == [(0, 0, 2), (0, 1, 0)]
    assert len(d_shadow(PointSet.parse(s, ["000"]))) == 0
    assert set(d_plus_shadow(PointSet.parse(s, ["012"])).points()) == {(1, 1, 2), (2, 1, 2)}
    b = GridShape.from_bounds((2, 2))
    assert gamma_shadow(PointSet.parse(b, ["(1,1)"])).points() == [(0, 1), (1, 0)]


@given(families())
def test_d_shadow_matches_reference(fam):
    shape, pts = fam
    assert set(d_shadow(PointSet.from_points(shape, pts)).points()) == d_ref(pts)


@given(families())
def test_d_plus_shadow_matches_reference(fam):
    shape, pts = fam
    assert set(d_plus_shadow(PointSet.from_points(shape, pts)).points()) == d_plus_ref(pts, shape.k)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3).map(sorted), st.data())
def test_gamma_shadow_matches_reference(bounds, data):
    shape = GridShape.from_bounds(bounds)
    pts = list(itertools.product(*[range(b + 1) for b in bounds]))
    chosen = set(data.draw(st.lists(st.sampled_from(pts), unique=True)))
    assert set(gamma_shadow(PointSet.from_points(shape, chosen)).points()) == gamma_ref(chosen)


@given(families(max_n=5, binary=True))
def test_complement_swaps_lower_and_upper(fam):
    shape, pts = fam
    a = PointSet.from_points(shape, pts)
    assert set(complement(a).points()) == {complement_point(x) for x in pts}
    assert binary_upper_shadow(a) == complement(binary_lower_shadow(complement(a)))


def test_kind_dispatch_and_errors():
    s = GridShape(2, 3)
    a = PointSet.parse(s, ["11"])
    assert shadow(a, "d_lower") == d_shadow(a) and shadow(a, ShadowKind.D_UPPER) == d_plus_shadow(a)
    assert list(point_shadow_indices(s, 4)) == [1, 3]
    for bad in (lambda: binary_lower_shadow(a), lambda: complement(a), lambda: shadow(a, "gamma"),
                lambda: complement_point((2, 0)), lambda: shadow(a, "nope"),
                lambda: d_shadow(PointSet.empty(GridShape.from_bounds((1, 2))))):
        with pytest.raises(ValueError):
            bad()
