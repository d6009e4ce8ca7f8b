"""Minimal-shadow oracles and exhaustive verification campaigns.

Two independent routes meet here.  The *segment* route builds an initial
segment of the shadow order and measures its d-shadow.  The *brute* route
enumerates families bit by bit (``kernels``) and knows nothing about the
order.  Every campaign compares the two and records any disagreement.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .compression import (
    compress_fixpoint,
    compress_once,
    is_compressed,
    potential,
    structure_report,
)
from .grid import (
    GridShape,
    PointSet,
    digits,
    enumerate_at_least,
    format_point,
    subcube,
    weight_slice,
    zero_counts,
)
from .order import (
    chain,
    cl_initial_segment,
    cl_slice,
    cmp_colex,
    cmp_shadow,
    initial_segment,
    initial_segment_ranked,
    slice_order,
    sorted_points,
)
from .shadow import ShadowKind, d_shadow, gamma_shadow, shadow

log = logging.getLogger(__name__)

DEFAULT_FAMILY_BUDGET = 2**26
DEFAULT_SOFT_SECONDS = 60.0
MAX_REPORTED_VIOLATIONS = 64

TARGETS = (
    "T1",
    "T2",
    "compression",
    "claim3",
    "claim11",
    "claim12",
    "kk_coincide",
    "clements_lindstrom",
    "extremal_families",
)


class BudgetExceeded(ValueError):
    """A campaign would enumerate more families than its budget allows."""


@dataclass(frozen=True)
class Budget:
    families: int = DEFAULT_FAMILY_BUDGET
    seconds: float = DEFAULT_SOFT_SECONDS


@dataclass(frozen=True)
class Mode:
    kind: str = "exhaustive"
    samples: int | None = None
    seed: int | None = None

    @classmethod
    def sampled(cls, samples: int, seed: int = 0) -> Mode:
        return cls("sampled", int(samples), int(seed))

    def __post_init__(self) -> None:
        if self.kind not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.kind!r}")
        if self.kind == "sampled" and (self.samples is None or self.samples < 0):
            raise ValueError("sampled mode needs a non-negative sample count")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "sampled":
            out["samples"] = self.samples
            out["seed"] = self.seed if self.seed is not None else 0
        return out


EXHAUSTIVE = Mode()


@dataclass
class Violation:
    family: list[str]
    expected: int | str
    got: int | str

    def to_dict(self) -> dict:
        return {"family": list(self.family), "expected": self.expected, "got": self.got}

    def sort_key(self) -> tuple:
        return (self.family, str(self.expected), str(self.got))


@dataclass
class VerifyReport:
    target: str
    universe: dict
    mode: Mode
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        vs = sorted(self.violations, key=Violation.sort_key)
        return {
            "target": self.target,
            "universe": dict(self.universe),
            "mode": self.mode.to_dict(),
            "checked": int(self.checked),
            "violations": [v.to_dict() for v in vs],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.target} {json.dumps(self.universe)} checked={self.checked} violations={len(self.violations)}"


class _Clock:
    def __init__(self, target: str, budget: Budget) -> None:
        self.target, self.budget, self.t0 = target, budget, time.perf_counter()

    def done(self) -> None:
        elapsed = time.perf_counter() - self.t0
        log.info("%s finished in %.2fs", self.target, elapsed)
        if elapsed > self.budget.seconds:
            log.warning("%s exceeded its soft wall of %.0fs (%.1fs)", self.target, self.budget.seconds, elapsed)


# -- universes and shadow tables ------------------------------------------------


@dataclass(frozen=True)
class Universe:
    """Points a campaign draws families from, numbered by grid index."""

    shape: GridShape
    members: np.ndarray
    targets: np.ndarray
    table: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)

    def family(self, mask: int) -> PointSet:
        chosen = [int(self.members[b]) for b in range(self.size) if mask >> b & 1]
        return PointSet.from_indices(self.shape, chosen)

    def mask_of(self, family: PointSet) -> int:
        pos = {int(i): b for b, i in enumerate(self.members)}
        return sum(1 << pos[int(i)] for i in family.indices())


def build_universe(family: PointSet, kind: ShadowKind | str = ShadowKind.D_LOWER) -> Universe:
    members = family.indices()
    if len(members) > kernels.MAX_UNIVERSE:
        raise BudgetExceeded(f"universe of {len(members)} points exceeds {kernels.MAX_UNIVERSE}")
    rows = []
    for i in members:
        single = np.zeros(family.shape.size, dtype=bool)
        single[i] = True
        rows.append(shadow(PointSet(family.shape, single), kind).indices())
    targets = np.unique(np.concatenate(rows)) if rows else np.zeros(0, dtype=np.int64)
    if len(targets) > 64:
        raise BudgetExceeded(f"shadow targets ({len(targets)}) exceed 64 bits")
    table = np.zeros(len(members), dtype=np.uint64)
    for b, row in enumerate(rows):
        for t in np.searchsorted(targets, row):
            table[b] |= np.uint64(1) << np.uint64(t)
    return Universe(family.shape, members, targets, table)


def _family_text(family: PointSet) -> list[str]:
    return [format_point(p, family.shape) for p in sorted_points(family)]


# -- oracles -------------------------------------------------------------------


def min_d_shadow(shape: GridShape, m: int) -> int:
    """Least d-shadow over ``m``-point families of ``[k]^n`` (size of the segment's shadow)."""
    return len(d_shadow(initial_segment(shape, m)))


def min_d_shadow_ranked(n: int, r: int, m: int, k: int | None = None) -> int:
    return len(d_shadow(initial_segment_ranked(n, r, m, k).base))


def shadow_profile(shape: GridShape) -> np.ndarray:
    """``out[m] = |d(first m points of the shadow order)|`` for every ``m``.

    A point enters the shadow at the first rank of a point that covers it.
    """
    return _entry_profile(shape, chain(shape).order)


def ranked_profile(shape: GridShape, r: int) -> np.ndarray:
    return _entry_profile(shape, slice_order(shape, r))


def _entry_profile(shape: GridShape, order: np.ndarray) -> np.ndarray:
    d = digits(shape)[order]
    first = np.full(shape.size, len(order), dtype=np.int64)
    pos = np.arange(len(order), dtype=np.int64)
    for j, stride in enumerate(shape.strides):
        hit = d[:, j] != 0
        np.minimum.at(first, order[hit] - d[hit, j] * stride, pos[hit])
    entered = np.bincount(first[first < len(order)] + 1, minlength=len(order) + 1)
    return np.cumsum(entered)


def kk_min_shadow(m: int, r: int) -> int:
    """Kruskal-Katona: least lower shadow of ``m`` sets of size ``r``.

    Uses the ``r``-cascade ``m = C(a_r, r) + C(a_{r-1}, r-1) + ...``.
    """
    if m < 0 or r < 0:
        raise ValueError("m and r must be non-negative")
    if m == 0 or r == 0:
        return 0
    total = 0
    i = r
    while m > 0 and i >= 1:
        a = i
        while math.comb(a + 1, i) <= m:
            a += 1
        m -= math.comb(a, i)
        total += math.comb(a, i - 1)
        i -= 1
    return total


def kk_min_shadow_unrestricted(n: int, m: int) -> int:
    """Least lower shadow of ``m`` points of the cube ``{0,1}^n``.

    Fill the weights 0, 1, ... in turn; the partial top weight contributes a
    Kruskal-Katona term and the full weights below it contribute everything
    under them.
    """
    if not 0 <= m <= 2**n:
        raise ValueError(f"m={m} outside 0..{2**n}")
    w = 0
    full = 0
    while w <= n and full + math.comb(n, w) <= m:
        full += math.comb(n, w)
        w += 1
    rest = m - full
    below = sum(math.comb(n, i) for i in range(max(0, w - 1)))
    return below + kk_min_shadow(rest, w)


def colex_segment_shadow(n: int, r: int, m: int) -> int:
    """Shadow size of the first ``m`` ``r``-subsets of ``{1..n}`` in colex order, by set arithmetic."""
    subsets = sorted(itertools.combinations(range(1, n + 1), r), key=lambda s: sum(1 << i for i in s))
    if m > len(subsets):
        raise ValueError(f"only {len(subsets)} subsets of size {r}")
    out = set()
    for s in subsets[:m]:
        for i in range(len(s)):
            out.add(s[:i] + s[i + 1 :])
    return len(out)


def brute_min_shadow(
    universe: PointSet,
    m: int,
    kind: ShadowKind | str = ShadowKind.D_LOWER,
    budget: int = DEFAULT_FAMILY_BUDGET,
    backend: str | None = None,
) -> tuple[int, PointSet]:
    """Exact least shadow over every ``m``-subset of ``universe``, with a witness."""
    u = build_universe(universe, kind)
    if not 0 <= m <= u.size:
        raise ValueError(f"family size {m} outside 0..{u.size}")
    if math.comb(u.size, m) > budget:
        raise BudgetExceeded(f"C({u.size},{m}) families exceed the budget of {budget}")
    best, mask, _ = kernels.min_over_size(u.table, m, backend)
    return best, u.family(mask)


def brute_min_table(
    u: Universe, sizes: Sequence[int], budget: int, backend: str | None = None
) -> dict[int, tuple[int, int]]:
    """Least shadow and witness mask for each requested size; sizes over budget are left out."""
    if (1 << u.size) <= budget:
        best, masks = kernels.sweep_all(u.table, backend)
        return {m: (int(best[m]), int(masks[m])) for m in sizes}
    out = {}
    for m in sizes:
        if math.comb(u.size, m) <= budget:
            b, mask, _ = kernels.min_over_size(u.table, m, backend)
            out[m] = (b, mask)
        else:
            log.info("skipping size %d: C(%d,%d) over budget", m, u.size, m)
    return out


def _minimize(u: Universe, mask: int, violates: Callable[[int], bool]) -> int:
    """Greedily drop members while the family still violates, until no single removal does."""
    changed = True
    while changed:
        changed = False
        for b in range(u.size):
            if mask >> b & 1 and violates(mask & ~(1 << b)):
                mask &= ~(1 << b)
                changed = True
    return mask


def sample_families(size: int, count: int, seed: int) -> np.ndarray:
    """``count`` random families of a ``size``-point universe as masks.

    The family size is uniform on ``0..size`` and the family uniform among
    those of that size.  Philox is counter-based, so the stream depends only
    on the seed.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    sizes = rng.integers(0, size + 1, count)
    keys = rng.random((count, size))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    member = ranks < sizes[:, None]
    weights = np.uint64(1) << np.arange(size, dtype=np.uint64)
    return np.bitwise_or.reduce(np.where(member, weights, np.uint64(0)), axis=1)


def small_families(size: int, max_members: int) -> np.ndarray:
    masks = [sum(1 << b for b in c) for m in range(max_members + 1) for c in itertools.combinations(range(size), m)]
    return np.array(masks, dtype=np.uint64)


# -- campaigns -----------------------------------------------------------------


def _check_against_table(
    report: VerifyReport, u: Universe, expected: np.ndarray, mode: Mode, budget: Budget, backend, small: int
) -> None:
    """Compare every enumerated/sampled family with the segment shadow of its size."""

    def violates(mask: int) -> bool:
        got = int(kernels.shadow_sizes(u.table, np.array([mask], dtype=np.uint64), backend)[0])
        return got < expected[bin(mask).count("1")]

    seen: set[int] = set()

    def record(mask: int) -> None:
        # several starting families can shrink to the same witness
        if mask in seen or len(seen) >= MAX_REPORTED_VIOLATIONS:
            return
        seen.add(mask)
        fam = u.family(mask)
        report.violations.append(
            Violation(_family_text(fam), int(expected[len(fam)]), len(shadow(fam, ShadowKind.D_LOWER)))
        )

    if mode.kind == "exhaustive":
        if (1 << u.size) > budget.families:
            raise BudgetExceeded(f"2^{u.size} families exceed the budget of {budget.families}")
        best, masks = kernels.sweep_all(u.table, backend)
        report.checked += 1 << u.size
        for m in range(u.size + 1):
            if best[m] < expected[m]:
                record(_minimize(u, int(masks[m]), violates))
            elif best[m] > expected[m]:
                # the segment itself is a family of this size, so this is an oracle fault
                record(int(masks[m]))
        return
    if mode.samples > budget.families:
        raise BudgetExceeded(f"{mode.samples} samples exceed the budget of {budget.families}")
    masks = sample_families(u.size, mode.samples, mode.seed or 0)
    if small:
        masks = np.concatenate([small_families(u.size, small), masks])
    got = kernels.shadow_sizes(u.table, masks, backend)
    sizes = np.bitwise_count(masks).astype(np.int64)
    report.checked += len(masks)
    for i in np.flatnonzero(got < expected[sizes]):
        record(_minimize(u, int(masks[i]), violates))
        if len(seen) >= MAX_REPORTED_VIOLATIONS:
            break


def verify_grid_minimum(
    shape: GridShape,
    mode: Mode = EXHAUSTIVE,
    budget: Budget = Budget(),
    backend: str | None = None,
    small: int = 4,
) -> VerifyReport:
    """Every checked family has at least the d-shadow of the segment of its size.

    Sampled mode also runs every family with at most ``small`` members.  On
    ``k = 2`` the segment minima are compared with Kruskal-Katona as well.
    """
    clock = _Clock("T1", budget)
    report = VerifyReport("T1", shape.describe(), mode)
    if mode.kind == "exhaustive" and shape.size > kernels.MAX_UNIVERSE:
        raise BudgetExceeded(f"{shape} has {shape.size} points; exhaustive sweeps handle at most {kernels.MAX_UNIVERSE}")
    u = build_universe(PointSet.full(shape))
    expected = shadow_profile(shape)
    _check_against_table(report, u, expected, mode, budget, backend, small if mode.kind == "sampled" else 0)
    if shape.k == 2:
        for m in range(shape.size + 1):
            kk = kk_min_shadow_unrestricted(shape.n, m)
            if kk != expected[m]:
                fam = initial_segment(shape, m)
                report.violations.append(Violation(_family_text(fam), kk, int(expected[m])))
        report.checked += shape.size + 1
    clock.done()
    return report


def verify_slice_minimum(
    n: int,
    r: int,
    k: int,
    mode: Mode = EXHAUSTIVE,
    budget: Budget = Budget(),
    backend: str | None = None,
    small: int = 4,
) -> VerifyReport:
    """The same check on the weight-``r`` slice, with the ranked segments as oracle."""
    clock = _Clock("T2", budget)
    shape = GridShape(n, k)
    report = VerifyReport("T2", {"n": n, "k": k, "r": r}, mode)
    u = build_universe(weight_slice(shape, r))
    expected = ranked_profile(shape, r)
    _check_against_table(report, u, expected, mode, budget, backend, small if mode.kind == "sampled" else 0)
    if k == 2:
        for m in range(u.size + 1):
            kk = kk_min_shadow(m, r)
            colex = colex_segment_shadow(n, r, m)
            if not kk == colex == expected[m]:
                fam = initial_segment_ranked(n, r, m, k).base
                report.violations.append(Violation(_family_text(fam), f"kk={kk},colex={colex}", int(expected[m])))
        report.checked += u.size + 1
    clock.done()
    return report


def plane_formula(k: int, m: int) -> int:
    """Closed form of the least d-shadow in ``[k]^2``."""
    if m <= 1:
        return 0
    if m <= 2 * k - 1:
        return 1
    # 1 + ceil(sqrt(x)) with ceil(sqrt(x)) = isqrt(x - 1) + 1 for x >= 1
    return 2 + math.isqrt(4 * (m - 2 * k + 1) - 1)


def verify_plane_formula(k: int, budget: Budget = Budget()) -> VerifyReport:
    clock = _Clock("claim3", budget)
    shape = GridShape(2, k)
    report = VerifyReport("claim3", shape.describe(), EXHAUSTIVE)
    prof = shadow_profile(shape)
    for m in range(1, k * k + 1):
        want = plane_formula(k, m)
        report.checked += 1
        if prof[m] != want:
            report.violations.append(Violation(_family_text(initial_segment(shape, m)), want, int(prof[m])))
    clock.done()
    return report


def verify_successor_steps(shape: GridShape, budget: Budget = Budget()) -> VerifyReport:
    """Successor structure for consecutive points without zero coordinates."""
    clock = _Clock("claim11", budget)
    report = VerifyReport("claim11", shape.describe(), EXHAUSTIVE)
    pts = chain(shape).points()
    for x, y in zip(pts, pts[1:]):
        if 0 in x or 0 in y:
            continue
        report.checked += 1
        up = [i for i in range(shape.n) if y[i] > x[i]]
        problems = []
        if len(up) != 1:
            problems.append("a")
        if any(y[j] < x[j] and y[j] != 1 for j in range(shape.n)):
            problems.append("b")
        if len(up) == 1 and 1 not in y and not all(v > x[up[0]] for v in y):
            problems.append("c")
        if problems:
            fam = [format_point(x, shape), format_point(y, shape)]
            report.violations.append(Violation(fam, "a,b,c", ",".join(problems)))
    clock.done()
    return report


def verify_run_equality(shape: GridShape, budget: Budget = Budget()) -> VerifyReport:
    """Runs ``x_1..x_{L-1}`` in ``{1..L-1}^n`` leave the shadow unchanged iff they are ``i(L-1)...(L-1)``."""
    clock = _Clock("claim12", budget)
    report = VerifyReport("claim12", shape.describe(), EXHAUSTIVE)
    pts = chain(shape).points()
    prof = shadow_profile(shape)
    n = shape.n
    for L in range(2, shape.k + 1):
        for start in range(len(pts) - (L - 2)):
            run = pts[start : start + L - 1]
            if not all(1 <= v <= L - 1 for p in run for v in p):
                continue
            report.checked += 1
            equal = prof[start + 1] == prof[start + L - 1]
            pattern = all(run[i] == (i + 1,) + (L - 1,) * (n - 1) for i in range(L - 1))
            if equal != pattern:
                fam = [format_point(p, shape) for p in run]
                report.violations.append(Violation(fam, f"equal={pattern}", f"equal={bool(equal)}"))
    clock.done()
    return report


def verify_kk_coincide(n: int, budget: Budget = Budget()) -> VerifyReport:
    """On each weight slice of ``{0,1}^n`` the shadow order is colex."""
    clock = _Clock("kk_coincide", budget)
    report = VerifyReport("kk_coincide", {"n": n, "k": 2}, EXHAUSTIVE)
    for w in range(n + 1):
        pts = [p for p in itertools.product((0, 1), repeat=n) if sum(p) == w]
        for x in pts:
            for y in pts:
                report.checked += 1
                a, b = cmp_shadow(x, y), cmp_colex(x, y)
                if a != b:
                    report.violations.append(Violation([format_point(x), format_point(y)], b, a))
    clock.done()
    return report


def verify_clements_lindstrom(
    bounds: Sequence[int], r: int | None = None, budget: Budget = Budget(), backend: str | None = None
) -> VerifyReport:
    """Lexicographic segments of ``F_r`` attain the least gamma-shadow."""
    clock = _Clock("clements_lindstrom", budget)
    shape = GridShape.from_bounds(bounds)
    universe = shape.describe()
    if r is not None:
        universe["r"] = r
    report = VerifyReport("clements_lindstrom", universe, EXHAUSTIVE)
    levels = [r] if r is not None else range(sum(shape.bounds) + 1)
    for level in levels:
        members = cl_slice(shape, level)
        if (1 << len(members)) > budget.families:
            raise BudgetExceeded(f"|F_{level}| = {len(members)} is too large for a full sweep")
        u = build_universe(PointSet.from_indices(shape, members), ShadowKind.GAMMA)
        best, masks = kernels.sweep_all(u.table, backend)
        report.checked += 1 << u.size
        for m in range(u.size + 1):
            seg = cl_initial_segment(shape, level, m)
            want = len(gamma_shadow(seg))
            if best[m] != want:
                fam = u.family(int(masks[m]))
                report.violations.append(Violation(_family_text(fam), want, int(best[m])))
    clock.done()
    return report


def verify_extremal_families(
    shape: GridShape, r: int | None = None, budget: Budget = Budget(), backend: str | None = None
) -> VerifyReport:
    """``[t]_r^n`` is extremal in its slice and ``B_{>=z}`` in the grid.

    ``r`` restricts the check to one slice (and skips the ``B_{>=z}`` part).
    Sizes whose brute force is over budget are skipped and not counted.
    """
    clock = _Clock("extremal_families", budget)
    universe = shape.describe()
    if r is not None:
        universe["r"] = r
    report = VerifyReport("extremal_families", universe, EXHAUSTIVE)
    weights = [r] if r is not None else range(shape.n + 1)
    for w in weights:
        u = build_universe(weight_slice(shape, w))
        fams = [subcube(shape, t, w) for t in range(1, shape.k + 1)]
        table = brute_min_table(u, sorted({len(f) for f in fams}), budget.families, backend)
        for fam in fams:
            if len(fam) not in table:
                continue
            report.checked += 1
            got = len(d_shadow(fam))
            if got != table[len(fam)][0]:
                report.violations.append(Violation(_family_text(fam), table[len(fam)][0], got))
    if r is None and shape.size <= kernels.MAX_UNIVERSE:
        u = build_universe(PointSet.full(shape))
        fams = [enumerate_at_least(shape, z) for z in range(shape.n + 1)]
        table = brute_min_table(u, sorted({len(f) for f in fams}), budget.families, backend)
        for fam in fams:
            if len(fam) not in table:
                continue
            report.checked += 1
            got = len(d_shadow(fam))
            if got != table[len(fam)][0]:
                report.violations.append(Violation(_family_text(fam), table[len(fam)][0], got))
    clock.done()
    return report


def _compression_problems(family: PointSet) -> list[str]:
    problems = []
    size, shadow_size, f = len(family), len(d_shadow(family)), potential(family)
    for s in range(1, family.shape.n + 1):
        c = compress_once(family, s)
        if len(c) != size:
            problems.append(f"C{s}:size")
        if len(d_shadow(c)) > shadow_size:
            problems.append(f"C{s}:shadow")
        g = potential(c)
        if g > f or (g == f) != (c == family):
            problems.append(f"C{s}:potential")
    trace = compress_fixpoint(family)
    final = trace.final
    pots = [f] + [st.potential_after for st in trace.steps]
    if any(b >= a for a, b in zip(pots, pots[1:])):
        problems.append("fixpoint:potential")
    if len(final) != size:
        problems.append("fixpoint:size")
    if len(d_shadow(final)) > shadow_size:
        problems.append("fixpoint:shadow")
    if not is_compressed(final):
        problems.append("fixpoint:compressed")
    rep = structure_report(final)
    if rep.applicable:
        problems.extend(f"structure:{name}" for name in rep.failures())
    return problems


def verify_compression(
    shape: GridShape, mode: Mode = Mode.sampled(10_000, 0), budget: Budget = Budget()
) -> VerifyReport:
    """Compressions keep size, never grow the shadow, and reach compressed down-sets."""
    clock = _Clock("compression", budget)
    report = VerifyReport("compression", shape.describe(), mode)
    n_points = shape.size
    if mode.kind == "exhaustive":
        if n_points > kernels.MAX_UNIVERSE or (1 << n_points) > budget.families:
            raise BudgetExceeded(f"2^{n_points} families exceed the budget of {budget.families}")
        masks = np.arange(1 << n_points, dtype=np.uint64)
    else:
        if n_points > kernels.MAX_UNIVERSE:
            raise BudgetExceeded(f"{shape} has too many points for mask sampling")
        masks = sample_families(n_points, mode.samples, mode.seed or 0)
    bits = np.arange(n_points, dtype=np.uint64)
    for mask in masks:
        member = ((mask >> bits) & np.uint64(1)).astype(bool)
        family = PointSet(shape, member)
        report.checked += 1
        problems = _compression_problems(family)
        if problems:
            report.violations.append(Violation(_family_text(family), "ok", ";".join(problems)))
    clock.done()
    return report


def zero_level_sizes(shape: GridShape) -> list[int]:
    z = zero_counts(shape)
    return [int((z >= r).sum()) for r in range(shape.n + 1)]
