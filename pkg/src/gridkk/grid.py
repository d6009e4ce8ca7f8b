"""Points, grids and dense point families.

A point is a plain tuple of non-negative ints.  Coordinates are 0-based in
storage; anything that names a *position* to a user (level sets, signatures,
axes) is 1-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

Point = tuple[int, ...]

MAX_POINTSET_SIZE = 2**25


@dataclass(frozen=True)
class GridShape:
    """The grid ``[k]^n``, or the Clements-Lindstrom box ``prod [0, k_i]``.

    When ``bounds`` is given, coordinate ``i`` ranges over ``0..bounds[i]``
    and ``k`` is ignored.
    """

    n: int
    k: int = 2
    bounds: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.bounds is None:
            if self.k < 2:
                raise ValueError(f"k must be >= 2, got {self.k}")
            return
        bounds = tuple(int(b) for b in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if len(bounds) != self.n:
            raise ValueError(f"expected {self.n} bounds, got {len(bounds)}")
        if bounds[0] < 1 or any(a > b for a, b in zip(bounds, bounds[1:])):
            raise ValueError(f"bounds must satisfy 1 <= k_1 <= ... <= k_n, got {bounds}")

    @classmethod
    def from_bounds(cls, bounds: Sequence[int]) -> GridShape:
        bounds = tuple(int(b) for b in bounds)
        return cls(n=len(bounds), k=max(bounds) + 1, bounds=bounds)

    @property
    def per_axis(self) -> bool:
        return self.bounds is not None

    @property
    def radices(self) -> tuple[int, ...]:
        if self.bounds is None:
            return (self.k,) * self.n
        return tuple(b + 1 for b in self.bounds)

    @property
    def size(self) -> int:
        return math.prod(self.radices)

    @property
    def strides(self) -> tuple[int, ...]:
        out = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            out[i] = out[i + 1] * self.radices[i + 1]
        return tuple(out)

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.n and all(0 <= v < r for v, r in zip(x, self.radices))

    def check(self, x: Sequence[int]) -> Point:
        x = tuple(int(v) for v in x)
        if len(x) != self.n:
            raise ValueError(f"point {x} has length {len(x)}, expected {self.n}")
        for i, (v, r) in enumerate(zip(x, self.radices), start=1):
            if not 0 <= v < r:
                raise ValueError(f"coordinate {i} of {x} is {v}, outside 0..{r - 1}")
        return x

    def describe(self) -> dict:
        if self.bounds is not None:
            return {"n": self.n, "bounds": list(self.bounds)}
        return {"n": self.n, "k": self.k}

    def __str__(self) -> str:
        if self.bounds is not None:
            return "F(" + ",".join(map(str, self.bounds)) + ")"
        return f"[{self.k}]^{self.n}"


@lru_cache(maxsize=64)
def digits(shape: GridShape) -> np.ndarray:
    """Coordinates of every grid point, row ``i`` is the point with index ``i``."""
    _check_capacity(shape)
    idx = np.arange(shape.size, dtype=np.int64)
    out = np.stack(np.unravel_index(idx, shape.radices), axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


def _check_capacity(shape: GridShape) -> None:
    if shape.size > MAX_POINTSET_SIZE:
        raise ValueError(f"{shape} has {shape.size} points; the dense cap is 2^25")


# -- text formats -----------------------------------------------------------


def uses_digit_form(shape: GridShape) -> bool:
    return max(shape.radices) <= 10


def format_point(x: Sequence[int], shape: GridShape | None = None) -> str:
    """Digit string when every coordinate fits in one digit, else comma form."""
    if shape is not None:
        compact = uses_digit_form(shape)
    else:
        compact = all(0 <= v <= 9 for v in x)
    if compact:
        return "".join(str(v) for v in x)
    return ",".join(str(v) for v in x)


def parse_point(text: str, shape: GridShape) -> Point:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ValueError(f"empty point text {text!r}")
    if "," in s:
        parts = [p.strip() for p in s.split(",")]
        if not all(re.fullmatch(r"\d+", p) for p in parts):
            raise ValueError(f"malformed point {text!r}")
        coords = [int(p) for p in parts]
    elif re.fullmatch(r"\d+", s) and shape.n == 1:
        # a lone coordinate reads the same in both forms
        coords = [int(s)]
    elif re.fullmatch(r"\d+", s):
        if not uses_digit_form(shape):
            raise ValueError(f"digit-string points need k <= 10; use commas in {text!r}")
        coords = [int(c) for c in s]
    else:
        raise ValueError(f"malformed point {text!r}")
    return shape.check(coords)


_RUN = re.compile(r"\(\s*(\d+)\s*[·*]\s*(\d+)\s*\)")


def expand_run_length(text: str) -> Point:
    """Expand ``(3·0)(2·4)56`` into ``(0, 0, 0, 4, 4, 5, 6)``.

    ``*`` is accepted in place of ``·``.  Literal digits outside a group are
    single coordinates.
    """
    s = text.strip()
    out: list[int] = []
    pos = 0
    while pos < len(s):
        ch = s[pos]
        if ch.isspace():
            pos += 1
        elif ch == "(":
            m = _RUN.match(s, pos)
            if m is None:
                raise ValueError(f"malformed run group at offset {pos} in {text!r}")
            count, value = int(m.group(1)), int(m.group(2))
            if count == 0:
                raise ValueError(f"zero-length run at offset {pos} in {text!r}")
            out.extend([value] * count)
            pos = m.end()
        elif ch.isdigit():
            out.append(int(ch))
            pos += 1
        else:
            raise ValueError(f"unexpected {ch!r} at offset {pos} in {text!r}")
    if not out:
        raise ValueError(f"empty run-length text {text!r}")
    return tuple(out)


def format_run_length(x: Sequence[int]) -> str:
    parts = []
    i = 0
    while i < len(x):
        j = i
        while j < len(x) and x[j] == x[i]:
            j += 1
        if j - i == 1 and x[i] < 10:
            parts.append(str(x[i]))
        else:
            parts.append(f"({j - i}·{x[i]})")
        i = j
    return "".join(parts)


# -- per-point statistics ---------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """Component signature: maximum value, where it sits, how many zeros."""

    max_value: int
    max_positions: frozenset[int]
    zero_count: int

    def as_tuple(self) -> tuple[int, tuple[int, ...], int]:
        return (self.max_value, tuple(sorted(self.max_positions)), self.zero_count)


@dataclass(frozen=True)
class PointStats:
    weight: int
    level_sets: dict[int, frozenset[int]] = field(hash=False)
    max_value: int
    signature: Signature

    def level(self, i: int) -> frozenset[int]:
        return self.level_sets.get(i, frozenset())


def weight(x: Sequence[int]) -> int:
    return sum(1 for v in x if v != 0)


def level_set(x: Sequence[int], i: int) -> frozenset[int]:
    return frozenset(j for j, v in enumerate(x, start=1) if v == i)


def signature(x: Sequence[int]) -> Signature:
    m = max(x)
    return Signature(m, level_set(x, m), sum(1 for v in x if v == 0))


def point_stats(x: Sequence[int]) -> PointStats:
    levels: dict[int, set[int]] = {}
    for j, v in enumerate(x, start=1):
        levels.setdefault(v, set()).add(j)
    frozen = {v: frozenset(js) for v, js in sorted(levels.items())}
    return PointStats(weight(x), frozen, max(x), signature(x))


# -- dense families ---------------------------------------------------------


def encode_index(x: Sequence[int], shape: GridShape) -> int:
    x = shape.check(x)
    return sum(v * s for v, s in zip(x, shape.strides))


def decode_index(i: int, shape: GridShape) -> Point:
    if not 0 <= i < shape.size:
        raise ValueError(f"index {i} outside 0..{shape.size - 1}")
    out = []
    for r in reversed(shape.radices):
        i, v = divmod(i, r)
        out.append(v)
    return tuple(reversed(out))


class PointSet:
    """Immutable dense family of points of one grid.

    Membership is a boolean array indexed by the mixed-radix code of a point
    (first coordinate most significant).
    """

    __slots__ = ("shape", "mask")

    def __init__(self, shape: GridShape, mask: np.ndarray) -> None:
        _check_capacity(shape)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (shape.size,):
            raise ValueError(f"mask of shape {mask.shape} does not fit {shape}")
        if mask.flags.writeable:
            mask = mask.copy()
            mask.setflags(write=False)
        self.shape = shape
        self.mask = mask

    @classmethod
    def empty(cls, shape: GridShape) -> PointSet:
        return cls(shape, np.zeros(shape.size, dtype=bool))

    @classmethod
    def full(cls, shape: GridShape) -> PointSet:
        return cls(shape, np.ones(shape.size, dtype=bool))

    @classmethod
    def from_points(cls, shape: GridShape, points: Iterable[Sequence[int]]) -> PointSet:
        mask = np.zeros(shape.size, dtype=bool)
        for x in points:
            mask[encode_index(x, shape)] = True
        return cls(shape, mask)

    @classmethod
    def from_indices(cls, shape: GridShape, indices: Iterable[int]) -> PointSet:
        mask = np.zeros(shape.size, dtype=bool)
        mask[np.fromiter(indices, dtype=np.int64)] = True
        return cls(shape, mask)

    @classmethod
    def parse(cls, shape: GridShape, texts: Iterable[str]) -> PointSet:
        return cls.from_points(shape, (parse_point(t, shape) for t in texts))

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def points(self) -> list[Point]:
        d = digits(self.shape)
        return [tuple(int(v) for v in d[i]) for i in self.indices()]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points())

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, (tuple, list)) or not self.shape.contains(x):
            return False
        return bool(self.mask[encode_index(x, self.shape)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash((self.shape, self.mask.tobytes()))

    def _same(self, other: PointSet) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __or__(self, other: PointSet) -> PointSet:
        self._same(other)
        return PointSet(self.shape, self.mask | other.mask)

    def __and__(self, other: PointSet) -> PointSet:
        self._same(other)
        return PointSet(self.shape, self.mask & other.mask)

    def __sub__(self, other: PointSet) -> PointSet:
        self._same(other)
        return PointSet(self.shape, self.mask & ~other.mask)

    def issubset(self, other: PointSet) -> bool:
        self._same(other)
        return not bool((self.mask & ~other.mask).any())

    __le__ = issubset

    def __repr__(self) -> str:
        shown = [format_point(x, self.shape) for x in self.points()[:12]]
        more = ", ..." if len(self) > 12 else ""
        return f"PointSet({self.shape}, {{{', '.join(shown)}{more}}})"


@dataclass(frozen=True)
class RankedFamily:
    """A family whose members all have exactly ``r`` nonzero coordinates."""

    base: PointSet
    r: int

    def __post_init__(self) -> None:
        w = (digits(self.base.shape)[self.base.mask] != 0).sum(axis=1)
        if np.any(w != self.r):
            raise ValueError(f"family has members of weight other than {self.r}")

    def __len__(self) -> int:
        return len(self.base)

    def points(self) -> list[Point]:
        return self.base.points()


def zero_counts(shape: GridShape) -> np.ndarray:
    return (digits(shape) == 0).sum(axis=1)


def enumerate_level(shape: GridShape, zero_count: int) -> PointSet:
    """``B_r``: the points with exactly ``zero_count`` zero coordinates."""
    if not 0 <= zero_count <= shape.n:
        raise ValueError(f"zero count {zero_count} outside 0..{shape.n}")
    return PointSet(shape, zero_counts(shape) == zero_count)


def enumerate_at_least(shape: GridShape, zero_count: int) -> PointSet:
    """``B_{>=r}``: points with at least ``zero_count`` zeros."""
    if not 0 <= zero_count <= shape.n:
        raise ValueError(f"zero count {zero_count} outside 0..{shape.n}")
    return PointSet(shape, zero_counts(shape) >= zero_count)


def weight_slice(shape: GridShape, r: int) -> PointSet:
    """``[k]_r^n``: points with exactly ``r`` nonzero coordinates."""
    return enumerate_level(shape, shape.n - r)


def subcube(shape: GridShape, t: int, r: int | None = None) -> PointSet:
    """``[t]^n`` (or ``[t]_r^n`` when ``r`` is given) inside ``shape``."""
    d = digits(shape)
    mask = (d < t).all(axis=1)
    if r is not None:
        mask &= (d != 0).sum(axis=1) == r
    return PointSet(shape, mask)


def level_size(n: int, k: int, zero_count: int) -> int:
    return math.comb(n, zero_count) * (k - 1) ** (n - zero_count)
