import functools
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridkk.grid import GridShape, PointSet, Signature, digits, weight_slice
from gridkk.order import (
    OrderId,
    chain,
    check_signature,
    cl_initial_segment,
    cl_slice,
    cmp_aux,
    cmp_binary,
    cmp_colex,
    cmp_lex,
    cmp_shadow,
    colex_rank_keys,
    component_of,
    enumerate_class,
    initial_segment,
    initial_segment_ranked,
    is_initial_segment,
    rank,
    shadow_sort_keys,
    slice_order,
    slice_size,
    sorted_points,
    successor,
    unrank,
    working_bound,
)

from oracles import chain_ref, cmp_ref

SMALL = [(1, 2), (1, 5), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 3), (2, 7)]


def test_chain_on_3x3():
    assert ["".join(map(str, p)) for p in chain(GridShape(2, 3)).points()] == [
        "00", "10", "01", "20", "02", "11", "21", "12", "22"
    ]


@pytest.mark.parametrize("n,k", SMALL)
def test_chain_matches_comparator_sort(n, k):
    assert chain(GridShape(n, k)).points() == chain_ref(n, k)


@given(st.data())
def test_cmp_shadow_matches_reference(data):
    n = data.draw(st.integers(1, 6))
    pt = st.lists(st.integers(0, 9), min_size=n, max_size=n).map(tuple)
    x, y = data.draw(pt), data.draw(pt)
    assert cmp_shadow(x, y) == cmp_ref(x, y) == -cmp_shadow(y, x)


@given(st.integers(1, 4), st.integers(2, 6), st.data())
@settings(max_examples=60)
def test_sort_keys_agree_with_comparator(n, k, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, k - 1), min_size=n, max_size=n), min_size=1, max_size=30))
    pts = np.array(rows, dtype=np.int64)
    ordered = [tuple(int(v) for v in pts[i]) for i in shadow_sort_keys(pts)]
    assert ordered == sorted(map(tuple, rows), key=functools.cmp_to_key(cmp_ref))


def test_cmp_errors_and_binary():
    with pytest.raises(ValueError):
        cmp_shadow((0, 1), (0, 1, 2))
    assert cmp_binary({1, 3}, {2, 3}) == -1 and cmp_binary({3}, {1, 2}) == 1 and cmp_binary(set(), set()) == 0


def test_rank_examples():
    s = GridShape(2, 3)
    assert rank((1, 1), s) == 5 and unrank(5, s) == (1, 1)
    assert successor((0, 2), s) == (1, 1) and successor((2, 2), s) is None
    with pytest.raises(ValueError):
        unrank(9, s)
    with pytest.raises(ValueError):
        rank((0, 3), s)


def test_per_axis_grids_have_no_shadow_order():
    with pytest.raises(ValueError):
        chain(GridShape.from_bounds((1, 2)))


@pytest.mark.parametrize("n,k", [(3, 3), (2, 4)])
def test_segments_are_nested_down_sets_of_the_order(n, k):
    s = GridShape(n, k)
    prev = PointSet.empty(s)
    for m in range(s.size + 1):
        seg = initial_segment(s, m)
        assert len(seg) == m and prev <= seg and is_initial_segment(seg)
        prev = seg
    assert not is_initial_segment(PointSet.parse(s, ["1" + "0" * (n - 1)]))


def test_colex_and_lex():
    assert cmp_colex((1, 1, 0), (1, 0, 1)) == -1
    assert cmp_lex((1, 1, 0), (1, 0, 1)) == -1
    assert cmp_colex((0, 1, 1), (1, 0, 1)) == 1
    assert cmp_lex((0, 1, 1), (1, 0, 1)) == 1
    with pytest.raises(ValueError):
        cmp_colex((1, 0), (1, 1))
    with pytest.raises(ValueError):
        cmp_colex((2, 0), (1, 0))
    assert cmp_aux(OrderId.SHADOW, (1, 0), (0, 1)) == -1
    assert cmp_aux("cl_lex", (0, 2), (1, 0)) == -1
    pts = [p for p in itertools.product((0, 1), repeat=4) if sum(p) == 2]
    keyed = sorted(pts, key=lambda p: colex_rank_keys([p])[0])
    assert keyed == sorted(pts, key=functools.cmp_to_key(cmp_colex))


@pytest.mark.parametrize("n", range(1, 7))
def test_shadow_order_is_colex_on_binary_slices(n):
    for w in range(n + 1):
        pts = [p for p in itertools.product((0, 1), repeat=n) if sum(p) == w]
        for x, y in itertools.product(pts, repeat=2):
            assert cmp_shadow(x, y) == cmp_colex(x, y)


def test_ranked_segment_examples():
    seg = initial_segment_ranked(2, 2, 2)
    assert sorted(seg.points()) == [(1, 1), (2, 1)]
    # colex start {1,2}, {1,3}, {2,3}
    assert sorted(initial_segment_ranked(4, 2, 3, 2).points()) == [(0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0)]
    assert is_initial_segment(seg)
    assert working_bound(2, 2, 4) == 3 and working_bound(3, 0, 1) == 2
    with pytest.raises(ValueError):
        working_bound(3, 0, 2)
    with pytest.raises(ValueError):
        initial_segment_ranked(2, 2, 5, 3)


@pytest.mark.parametrize("n,r", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_ranked_segments_stable_in_k(n, r):
    """The first m weight-r points do not depend on the ambient alphabet."""
    for m in range(0, slice_size(n, 3, r) + 1):
        base = sorted(initial_segment_ranked(n, r, m, 3).points())
        for k in (4, 5):
            assert sorted(initial_segment_ranked(n, r, m, k).points()) == base


def test_slice_order_is_the_restricted_chain():
    s = GridShape(3, 3)
    for r in range(4):
        d = digits(s)
        pts = [tuple(int(v) for v in d[i]) for i in slice_order(s, r)]
        assert pts == [p for p in chain_ref(3, 3) if sum(v != 0 for v in p) == r]
        assert len(pts) == slice_size(3, 3, r) == len(weight_slice(s, r))


def test_classes_are_intervals():
    s = GridShape(3, 4)
    pts = chain(s).points()
    sigs = [component_of(p) for p in pts]
    seen = set()
    for a, b in zip(sigs, sigs[1:]):
        if a != b:
            assert b not in seen
            seen.add(a)
    for sig in set(sigs):
        check_signature(sig, s)
        assert sorted(enumerate_class(s, sig).points()) == sorted(p for p in pts if component_of(p) == sig)


def test_signature_validation():
    s = GridShape(3, 4)
    for bad in [Signature(2, frozenset(), 0), Signature(2, frozenset({4}), 0), Signature(0, frozenset({1}), 3),
                Signature(2, frozenset({1, 2}), 2), Signature(1, frozenset({1}), 1), Signature(4, frozenset({1}), 0)]:
        with pytest.raises(ValueError):
            check_signature(bad, s)


def test_cl_lex_segments():
    s = GridShape.from_bounds((2, 2))
    d = digits(s)
    assert [tuple(int(v) for v in d[i]) for i in cl_slice(s, 2)] == [(0, 2), (1, 1), (2, 0)]
    assert cl_initial_segment(s, 2, 2).points() == [(0, 2), (1, 1)]
    assert sorted_points(cl_initial_segment(s, 2, 3)) == [(0, 2), (1, 1), (2, 0)]
