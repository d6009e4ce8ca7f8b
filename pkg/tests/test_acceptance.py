"""Exit criteria for the package; the terminal summary prints one PASS/FAIL line per criterion."""

import math
import time

import pytest

from gridkk._jit import HAVE_NUMBA
from gridkk.grid import GridShape
from gridkk.order import chain, initial_segment, is_initial_segment, rank, successor, unrank
from gridkk.shadow import d_shadow
from gridkk.verify import (
    Mode,
    min_d_shadow_ranked,
    verify_plane_formula,
    verify_successor_steps,
    verify_run_equality,
    verify_clements_lindstrom,
    verify_compression,
    verify_extremal_families,
    verify_kk_coincide,
    verify_grid_minimum,
    verify_slice_minimum,
)

from oracles import kk_shadow_ref

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


def acceptance(cid, title):
    return pytest.mark.acceptance(str(cid), title)


def assert_clean(report):
    assert report.checked > 0
    assert report.passed, report.to_json()


@acceptance(1, "Least shadow exhaustive on [3]^2, [2]^3, [2]^4, [4]^2 in under 60 s")
@pytest.mark.parametrize("backend", BACKENDS)
def test_c1_grid_exhaustive(backend):
    t0 = time.perf_counter()
    for n, k, families in [(2, 3, 2**9), (3, 2, 2**8), (4, 2, 2**16), (2, 4, 2**16)]:
        rep = verify_grid_minimum(GridShape(n, k), backend=backend)
        assert_clean(rep)
        assert rep.checked >= families
    assert time.perf_counter() - t0 < 60


@acceptance(2, "Least shadow sampled on [3]^3: 10^5 seeded families plus all of size <= 4, under 120 s")
def test_c2_grid_sampled():
    t0 = time.perf_counter()
    rep = verify_grid_minimum(GridShape(3, 3), Mode.sampled(10**5, 1))
    assert_clean(rep)
    small = sum(math.comb(27, m) for m in range(5))
    assert rep.checked == 10**5 + small
    assert time.perf_counter() - t0 < 120


@acceptance(3, "Ranked least shadow exhaustive on [3]_2^2, [3]_2^3, [3]_1^3, [2]_r^4; k=2 minima equal Kruskal-Katona")
def test_c3_slices_exhaustive():
    for n, r, k, families in [(2, 2, 3, 2**4), (3, 2, 3, 2**12), (3, 1, 3, 2**6)]:
        rep = verify_slice_minimum(n, r, k)
        assert_clean(rep)
        assert rep.checked == families
    for r in range(5):
        assert_clean(verify_slice_minimum(4, r, 2))


@acceptance(3, "Ranked least shadow exhaustive on [3]_2^2, [3]_2^3, [3]_1^3, [2]_r^4; k=2 minima equal Kruskal-Katona")
def test_c3_binary_minima_equal_colex_oracle():
    for r in range(5):
        for m in range(math.comb(4, r) + 1):
            assert min_d_shadow_ranked(4, r, m, 2) == kk_shadow_ref(4, r, m)


@acceptance(4, "Closed form on [k]^2 for k in {3,4,5,6}")
@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_c4_plane_formula(k):
    rep = verify_plane_formula(k)
    assert_clean(rep)
    assert rep.checked == k * k


@pytest.fixture(scope="module")
def compression_reports():
    return [verify_compression(GridShape(n, k), Mode.sampled(10**4, seed)) for n, k, seed in [(3, 3, 5), (2, 4, 6)]]


def _problems(report, structural):
    out = []
    for v in report.violations:
        for p in str(v.got).split(";"):
            if p.startswith("structure:") == structural:
                out.append((v.family, p))
    return out


@acceptance(5, "Compression suite on 10^4 seeded families over [3]^3 and [4]^2")
def test_c5_compression(compression_reports):
    for rep in compression_reports:
        assert rep.checked == 10**4
        assert _problems(rep, structural=False) == []


@acceptance(6, "Structure suite: compressed results pass down-set, implication and sandwich checks")
def test_c6_structure(compression_reports):
    for rep in compression_reports:
        assert _problems(rep, structural=True) == []


@acceptance(7, "Order suite: rank/unrank/successor, colex coincidence, shadows of segments are segments")
@pytest.mark.parametrize("n,k", [(4, 4), (3, 5)])
def test_c7_rank_unrank(n, k):
    s = GridShape(n, k)
    pts = chain(s).points()
    assert len(set(pts)) == s.size
    for i, p in enumerate(pts):
        assert rank(p, s) == i and unrank(i, s) == p
        assert successor(p, s) == (pts[i + 1] if i + 1 < len(pts) else None)


@acceptance(7, "Order suite: rank/unrank/successor, colex coincidence, shadows of segments are segments")
def test_c7_colex_coincidence():
    for n in range(1, 7):
        assert_clean(verify_kk_coincide(n))


@acceptance(7, "Order suite: rank/unrank/successor, colex coincidence, shadows of segments are segments")
@pytest.mark.parametrize("n,k", [(3, 3), (2, 4)])
def test_c7_shadow_of_segment_is_segment(n, k):
    s = GridShape(n, k)
    for m in range(s.size + 1):
        assert is_initial_segment(d_shadow(initial_segment(s, m)))


@acceptance(8, "Successor properties on [5]^3, [4]^4; run-equality condition on [4]^2, [4]^3")
def test_c8_successors_and_runs():
    for n, k, runs in [(3, 5, 63), (4, 4, 80)]:
        rep = verify_successor_steps(GridShape(n, k))
        assert_clean(rep)
        assert rep.checked == runs
    for n, k, runs in [(2, 4, 11), (3, 4, 33)]:
        rep = verify_run_equality(GridShape(n, k))
        assert_clean(rep)
        assert rep.checked == runs


@acceptance(9, "Extremal families [t]_r^n and B_{>=r} on [3]^2, [3]_r^3, [2]^4")
def test_c9_extremal_families():
    assert_clean(verify_extremal_families(GridShape(2, 3)))
    assert_clean(verify_extremal_families(GridShape(4, 2)))
    for r in range(4):
        assert_clean(verify_extremal_families(GridShape(3, 3), r=r))


@acceptance(10, "Clements-Lindstrom baseline on bounds (2,2), (2,3), (1,2,2), all r")
@pytest.mark.parametrize("bounds", [(2, 2), (2, 3), (1, 2, 2)])
def test_c10_clements_lindstrom(bounds):
    assert_clean(verify_clements_lindstrom(bounds))


@acceptance(11, "Determinism: same inputs and seed give byte-identical JSON reports")
def test_c11_determinism():
    runs = [
        lambda be: verify_grid_minimum(GridShape(3, 3), Mode.sampled(2000, 1), backend=be),
        lambda be: verify_grid_minimum(GridShape(2, 4), backend=be),
        lambda be: verify_slice_minimum(3, 2, 3, backend=be),
        lambda be: verify_compression(GridShape(3, 3), Mode.sampled(300, 2)),
        lambda be: verify_clements_lindstrom((1, 2, 2), backend=be),
    ]
    for run in runs:
        texts = {run(be).to_json() for be in BACKENDS for _ in range(2)}
        assert len(texts) == 1
