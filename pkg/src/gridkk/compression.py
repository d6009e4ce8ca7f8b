"""Codimension-1 compressions and the structure of compressed families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .grid import GridShape, Point, PointSet, digits, enumerate_at_least, format_point, zero_counts
from .order import chain, sorted_points
from .shadow import d_shadow

PAIRWISE_LIMIT = 2**12


def _axis(shape: GridShape, s: int) -> None:
    if not 1 <= s <= shape.n:
        raise ValueError(f"axis {s} outside 1..{shape.n}")


def _sections(family: PointSet, s: int) -> np.ndarray:
    """Row ``t`` is the membership mask of the ``(s, t)``-section."""
    shape = family.shape
    grid = family.mask.reshape(shape.radices)
    return np.moveaxis(grid, s - 1, 0).reshape(shape.radices[s - 1], -1)


def section(family: PointSet, s: int, t: int) -> PointSet:
    """``A_{s,t} = {y : t_s y in A}``, a family of ``[k]^{n-1}``."""
    shape = family.shape
    _axis(shape, s)
    if shape.n < 2:
        raise ValueError("sections need n >= 2")
    if not 0 <= t < shape.k:
        raise ValueError(f"value {t} outside 0..{shape.k - 1}")
    return PointSet(GridShape(shape.n - 1, shape.k), _sections(family, s)[t])


def insert_coordinate(t: int, s: int, y: Sequence[int], k: int | None = None) -> Point:
    """``t_s y``: put ``t`` in front of ``y_s`` (1-based ``s``)."""
    y = tuple(y)
    if not 1 <= s <= len(y) + 1:
        raise ValueError(f"axis {s} outside 1..{len(y) + 1}")
    if t < 0 or (k is not None and t >= k):
        raise ValueError(f"value {t} outside the alphabet")
    return y[: s - 1] + (t,) + y[s - 1 :]


def _compress_mask(mask: np.ndarray, shape: GridShape, s: int) -> np.ndarray:
    if shape.n == 1:
        # every section is a subset of the one-point grid [k]^0
        return mask
    k = shape.k
    grid = mask.reshape(shape.radices)
    sec = np.moveaxis(grid, s - 1, 0).reshape(k, -1)
    counts = sec.sum(axis=1)
    sub_rank = chain(GridShape(shape.n - 1, k)).rank
    new = sub_rank[None, :] < counts[:, None]
    rest = shape.radices[: s - 1] + shape.radices[s:]
    new = np.moveaxis(new.reshape((k,) + rest), 0, s - 1)
    return new.reshape(-1)


def compress_once(family: PointSet, s: int) -> PointSet:
    """``C_s``: replace every ``(s, t)``-section by the initial segment of its size."""
    _axis(family.shape, s)
    if family.shape.per_axis:
        raise ValueError("compressions are defined on uniform grids")
    return PointSet(family.shape, _compress_mask(family.mask, family.shape, s))


def potential(family: PointSet) -> int:
    """Sum of the 1-based shadow-order positions of the members."""
    ranks = chain(family.shape).rank[family.mask]
    return int(ranks.sum(dtype=np.int64)) + len(ranks)


@dataclass(frozen=True)
class CompressionStep:
    axis: int
    potential_before: int
    potential_after: int


@dataclass(frozen=True)
class CompressionTrace:
    steps: list[CompressionStep]
    final: PointSet
    initial_potential: int = 0

    def to_dict(self) -> dict:
        return {
            "shape": self.final.shape.describe(),
            "steps": [
                {"axis": st.axis, "potential_before": st.potential_before, "potential_after": st.potential_after}
                for st in self.steps
            ],
            "final": [format_point(p, self.final.shape) for p in sorted_points(self.final)],
        }


def compress_fixpoint(family: PointSet) -> CompressionTrace:
    """Apply ``C_1, ..., C_n`` round-robin until a full pass changes nothing.

    Only effective compressions are recorded; each strictly lowers the
    potential, so the loop ends after at most ``potential(A)`` steps.
    """
    shape = family.shape
    current = family
    f = potential(current)
    start = f
    steps: list[CompressionStep] = []
    clean = 0
    s = 1
    while clean < shape.n:
        nxt = compress_once(current, s)
        if nxt == current:
            clean += 1
        else:
            g = potential(nxt)
            if g >= f:
                raise AssertionError(f"potential did not drop on axis {s}: {f} -> {g}")
            steps.append(CompressionStep(s, f, g))
            current, f = nxt, g
            clean = 1
            if len(steps) > start:
                raise AssertionError("compression did not terminate within potential(A) steps")
        s = s % shape.n + 1
    return CompressionTrace(steps, current, start)


def is_compressed(family: PointSet) -> bool:
    return all(
        np.array_equal(_compress_mask(family.mask, family.shape, s), family.mask)
        for s in range(1, family.shape.n + 1)
    )


def is_down_set(family: PointSet) -> bool:
    """Closed under lowering any coordinate."""
    shape = family.shape
    idx = family.indices()
    d = digits(shape)[idx]
    for j, stride in enumerate(shape.strides):
        below = idx[d[:, j] > 0] - stride
        if not family.mask[below].all():
            return False
    return True


def implication_violations(family: PointSet, limit: int = 16) -> list[tuple[Point, Point]]:
    """Pairs ``(x, y)`` with ``x <= y``, ``y`` in A, a shared coordinate, ``x`` not in A.

    Pair by pair, so only on grids up to ``PAIRWISE_LIMIT`` points.
    """
    shape = family.shape
    if shape.size > PAIRWISE_LIMIT:
        raise ValueError(f"pairwise implication check is capped at {PAIRWISE_LIMIT} grid points")
    d = digits(shape)
    rank = chain(shape).rank
    ys = family.indices()
    out: list[tuple[Point, Point]] = []
    missing = ~family.mask
    step = max(1, 2**20 // shape.size)
    for lo in range(0, len(ys), step):
        yy = ys[lo : lo + step]
        share = (d[:, None, :] == d[None, yy, :]).any(axis=2)
        bad = share & (rank[:, None] <= rank[None, yy]) & missing[:, None]
        for xi, yj in zip(*np.nonzero(bad)):
            out.append((tuple(int(v) for v in d[xi]), tuple(int(v) for v in d[yy[yj]])))
            if len(out) >= limit:
                return out
    return out


@dataclass
class StructureReport:
    compressed: bool
    down_set: bool
    shadow_down_set: bool
    implication_ok: bool
    p: int | None
    sandwich_lower: bool
    sandwich_upper: bool
    notes: list[str] = field(default_factory=list)
    n: int = 2

    @property
    def applicable(self) -> bool:
        # on [k]^1 every family is compressed, so the structure checks start at n = 2
        return self.compressed and self.n >= 2

    @property
    def passed(self) -> bool:
        return self.applicable and all(
            (self.down_set, self.shadow_down_set, self.implication_ok, self.sandwich_lower, self.sandwich_upper)
        )

    def failures(self) -> list[str]:
        names = ["down_set", "shadow_down_set", "implication_ok", "sandwich_lower", "sandwich_upper"]
        return [name for name in names if not getattr(self, name)]

    def to_dict(self) -> dict:
        return {
            "compressed": self.compressed,
            "down_set": self.down_set,
            "shadow_down_set": self.shadow_down_set,
            "implication_ok": self.implication_ok,
            "p": self.p,
            "sandwich_lower": self.sandwich_lower,
            "sandwich_upper": self.sandwich_upper,
            "applicable": self.applicable,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def structure_report(family: PointSet) -> StructureReport:
    """Down-set checks, the shared-coordinate implication and the shadow sandwich.

    With ``p`` the least zero count among the members, a compressed family
    satisfies ``d(B_{>=p+1}) <= d(A) <= d(B_{>=p})``.  On a family that is not
    compressed the checks are still evaluated but only informational.
    """
    shape = family.shape
    compressed = is_compressed(family)
    shadow = d_shadow(family)
    notes = [] if compressed else ["input is not compressed; checks are informational"]
    if shape.n == 1:
        notes.append("n = 1: compressions are the identity; checks are informational")
    if shape.size <= PAIRWISE_LIMIT:
        implication_ok = not implication_violations(family, limit=1)
    else:
        # equivalent: every (s, t)-section is an initial segment
        implication_ok = compressed
        notes.append("implication checked through sections (grid too large for pairs)")
    if len(family):
        p = int(zero_counts(shape)[family.mask].min())
        lower = d_shadow(enumerate_at_least(shape, p + 1)) if p < shape.n else PointSet.empty(shape)
        upper = d_shadow(enumerate_at_least(shape, p))
        sandwich_lower = lower.issubset(shadow)
        sandwich_upper = shadow.issubset(upper)
    else:
        p = None
        sandwich_lower = sandwich_upper = True
        notes.append("empty family; sandwich is vacuous")
    return StructureReport(
        compressed=compressed,
        down_set=is_down_set(family),
        shadow_down_set=is_down_set(shadow),
        implication_ok=implication_ok,
        p=p,
        sandwich_lower=sandwich_lower,
        sandwich_upper=sandwich_upper,
        notes=notes,
        n=shape.n,
    )
