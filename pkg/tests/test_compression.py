import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridkk.compression import (
    PAIRWISE_LIMIT,
    compress_fixpoint,
    compress_once,
    implication_violations,
    insert_coordinate,
    is_compressed,
    is_down_set,
    potential,
    section,
    structure_report,
)
from gridkk.grid import GridShape, PointSet
from gridkk.order import initial_segment
from gridkk.shadow import d_shadow

from oracles import compress_ref, grid


@st.composite
def families(draw, max_n=3, max_k=4):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(2, max_k))
    pts = grid(n, k)
    chosen = draw(st.lists(st.sampled_from(pts), max_size=len(pts), unique=True))
    return GridShape(n, k), set(chosen)


def test_examples():
    s = GridShape(2, 3)
    a = PointSet.parse(s, ["00", "11"])
    assert section(a, 1, 0).points() == [(0,)] and section(a, 1, 1).points() == [(1,)]
    assert potential(a) == 7
    assert sorted(compress_once(a, 1).points()) == [(0, 0), (1, 0)]
    trace = compress_fixpoint(a)
    assert sorted(trace.final.points()) == [(0, 0), (1, 0)] and len(trace.steps) == 1
    assert trace.to_dict() == {
        "shape": {"n": 2, "k": 3},
        "steps": [{"axis": 1, "potential_before": 7, "potential_after": 3}],
        "final": ["00", "10"],
    }
    assert insert_coordinate(2, 2, (0, 1)) == (0, 2, 1)
    with pytest.raises(ValueError):
        insert_coordinate(0, 4, (0, 1))
    with pytest.raises(ValueError):
        section(a, 3, 0)
    with pytest.raises(ValueError):
        section(a, 1, 3)


@given(families())
def test_compress_once_matches_reference(fam):
    shape, pts = fam
    a = PointSet.from_points(shape, pts)
    for s in range(1, shape.n + 1):
        got = set(compress_once(a, s).points())
        assert got == (pts if shape.n == 1 else compress_ref(pts, s, shape.n, shape.k))


@given(families())
@settings(max_examples=150)
def test_compression_never_grows_the_shadow(fam):
    shape, pts = fam
    a = PointSet.from_points(shape, pts)
    for s in range(1, shape.n + 1):
        c = compress_once(a, s)
        assert len(c) == len(a) and len(d_shadow(c)) <= len(d_shadow(a))
        assert (potential(c) < potential(a)) == (c != a)
    trace = compress_fixpoint(a)
    pots = [potential(a)] + [st_.potential_after for st_ in trace.steps]
    assert all(b < a_ for a_, b in zip(pots, pots[1:]))
    assert is_compressed(trace.final)
    rep = structure_report(trace.final)
    if shape.n >= 2:
        assert is_down_set(trace.final)
        assert rep.passed, rep.to_dict()
    else:
        assert not rep.applicable


@pytest.mark.parametrize("n,k", [(3, 3), (2, 4), (2, 3)])
def test_initial_segments_are_compressed_down_sets(n, k):
    s = GridShape(n, k)
    for m in range(s.size + 1):
        seg = initial_segment(s, m)
        assert is_compressed(seg) and is_down_set(seg)
        assert compress_fixpoint(seg).steps == []


def test_implication_matches_compressedness_on_small_grid():
    """The shared-coordinate implication and compressedness agree on every family of [2]^3 and [3]^2."""
    for s in (GridShape(3, 2), GridShape(2, 3)):
        for mask in range(1 << s.size):
            a = PointSet.from_indices(s, [i for i in range(s.size) if mask >> i & 1])
            assert (not implication_violations(a, limit=1)) == is_compressed(a)


def test_structure_report_edge_cases():
    s = GridShape(2, 3)
    rep = structure_report(PointSet.parse(s, ["00", "10", "01", "20"]))
    assert rep.passed and rep.p == 1
    full = structure_report(PointSet.full(s))
    assert full.passed and full.p == 0
    empty = structure_report(PointSet.empty(s))
    assert empty.passed and empty.p is None
    loose = structure_report(PointSet.parse(s, ["11"]))
    assert not loose.compressed and not loose.applicable and loose.notes
    assert set(loose.failures()) >= {"down_set", "implication_ok"}
    with pytest.raises(ValueError):
        implication_violations(PointSet.empty(GridShape(13, 2)))
    assert GridShape(13, 2).size > PAIRWISE_LIMIT


def test_per_axis_grid_rejected():
    with pytest.raises(ValueError):
        compress_once(PointSet.empty(GridShape.from_bounds((1, 2))), 1)
