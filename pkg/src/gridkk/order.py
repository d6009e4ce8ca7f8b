"""The shadow order on ``[k]^n`` and the auxiliary orders around it.

``x < y`` when ``x`` has more zero coordinates, or the zero counts agree and,
at the largest value ``i`` whose level sets differ, ``R_i(x)`` precedes
``R_i(y)`` in the binary order (compare ``sum 2^j``).  Nothing in the
definition depends on ``k``, so ``cmp_shadow`` works on bare tuples.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from typing import AbstractSet, Sequence

import numpy as np

from .grid import (
    GridShape,
    Point,
    PointSet,
    RankedFamily,
    Signature,
    decode_index,
    digits,
    encode_index,
    level_set,
)

MAX_CHAIN_SIZE = 2**20


class OrderId(enum.Enum):
    SHADOW = "shadow_order"
    BINARY = "binary_set_order"
    COLEX = "colex"
    LEX = "lex"
    CL_LEX = "cl_lex"


def cmp_binary(x: AbstractSet[int], y: AbstractSet[int]) -> int:
    """Binary order on finite sets: ``X < Y`` iff ``max(X ^ Y)`` lies in ``Y``."""
    x, y = frozenset(x), frozenset(y)
    if x == y:
        return 0
    return -1 if max(x ^ y) in y else 1


def cmp_shadow(x: Sequence[int], y: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``x`` is below, equal to or above ``y``."""
    if len(x) != len(y):
        raise ValueError(f"shape mismatch: {len(x)} vs {len(y)} coordinates")
    x, y = tuple(x), tuple(y)
    if x == y:
        return 0
    zx, zy = x.count(0), y.count(0)
    if zx != zy:
        return -1 if zx > zy else 1
    for i in range(max(max(x), max(y)), 0, -1):
        rx, ry = level_set(x, i), level_set(y, i)
        if rx != ry:
            return cmp_binary(rx, ry)
    # equal zero counts and equal R_i for all i >= 1 force x == y
    raise AssertionError("unreachable: level sets agree but points differ")


def _support(x: Sequence[int]) -> frozenset[int]:
    if any(v not in (0, 1) for v in x):
        raise ValueError(f"{tuple(x)} is not a 0/1 point")
    return frozenset(j for j, v in enumerate(x, start=1) if v)


def _fixed_weight_pair(a: Sequence[int], b: Sequence[int]) -> tuple[frozenset[int], frozenset[int]]:
    if len(a) != len(b):
        raise ValueError("colex/lex operands must have equal length")
    sa, sb = _support(a), _support(b)
    if len(sa) != len(sb):
        raise ValueError("colex/lex compare points of equal weight only")
    return sa, sb


def cmp_colex(a: Sequence[int], b: Sequence[int]) -> int:
    sa, sb = _fixed_weight_pair(a, b)
    if sa == sb:
        return 0
    return -1 if max(sa ^ sb) in sb else 1


def cmp_lex(a: Sequence[int], b: Sequence[int]) -> int:
    sa, sb = _fixed_weight_pair(a, b)
    if sa == sb:
        return 0
    return -1 if min(sa ^ sb) in sa else 1


def cmp_cl_lex(a: Sequence[int], b: Sequence[int]) -> int:
    """Plain lexicographic order on integer vectors (first difference decides)."""
    if len(a) != len(b):
        raise ValueError("cl_lex operands must have equal length")
    for u, v in zip(a, b):
        if u != v:
            return -1 if u < v else 1
    return 0


def cmp_aux(order: OrderId | str, a, b) -> int:
    order = OrderId(order)
    if order is OrderId.SHADOW:
        return cmp_shadow(a, b)
    if order is OrderId.BINARY:
        return cmp_binary(a, b)
    if order is OrderId.COLEX:
        return cmp_colex(a, b)
    if order is OrderId.LEX:
        return cmp_lex(a, b)
    return cmp_cl_lex(a, b)


# -- chains -------------------------------------------------------------------


def shadow_sort_keys(points: np.ndarray) -> np.ndarray:
    """Sort order (argsort) of the rows of ``points`` under the shadow order.

    Each point becomes ``(-#zeros, c_1, ..., c_n)`` where ``c`` lists the pairs
    ``(value, position)`` in decreasing order, packed as ``value*(n+1)+pos``.
    Lexicographic comparison of these keys reproduces the order: the common
    prefix covers the equal upper level sets and the first difference sits in
    the top differing level, where descending positions compare like the
    binary order.
    """
    m, n = points.shape
    pos = np.arange(1, n + 1, dtype=np.int64)
    packed = points.astype(np.int64) * (n + 1) + pos
    packed = -np.sort(-packed, axis=1)
    zeros = (points == 0).sum(axis=1)
    keys = [packed[:, j] for j in range(n - 1, -1, -1)] + [-zeros]
    return np.lexsort(keys)


@dataclass(frozen=True)
class Chain:
    """The full shadow order of one grid: ``order[r]`` is the index of rank ``r``."""

    shape: GridShape
    order: np.ndarray
    rank: np.ndarray

    def __len__(self) -> int:
        return len(self.order)

    def point(self, r: int) -> Point:
        return decode_index(int(self.order[r]), self.shape)

    def points(self) -> list[Point]:
        d = digits(self.shape)
        return [tuple(int(v) for v in d[i]) for i in self.order]


_chains: dict[GridShape, Chain] = {}
_chain_lock = threading.Lock()


def _uniform(shape: GridShape) -> None:
    if shape.per_axis:
        raise ValueError("the shadow order is defined on uniform grids [k]^n only")


def chain(shape: GridShape) -> Chain:
    """Memoized shadow-order chain of ``shape``; thread-safe."""
    _uniform(shape)
    c = _chains.get(shape)
    if c is not None:
        return c
    with _chain_lock:
        c = _chains.get(shape)
        if c is None:
            if shape.size > MAX_CHAIN_SIZE:
                raise ValueError(f"{shape} has {shape.size} points; chains are capped at 2^20")
            order = shadow_sort_keys(digits(shape))
            rank = np.empty_like(order)
            rank[order] = np.arange(len(order))
            order.setflags(write=False)
            rank.setflags(write=False)
            c = Chain(shape, order, rank)
            _chains[shape] = c
    return c


def rank(x: Sequence[int], shape: GridShape) -> int:
    return int(chain(shape).rank[encode_index(x, shape)])


def unrank(i: int, shape: GridShape) -> Point:
    c = chain(shape)
    if not 0 <= i < len(c):
        raise ValueError(f"rank {i} outside 0..{len(c) - 1}")
    return c.point(i)


def successor(x: Sequence[int], shape: GridShape) -> Point | None:
    """Least point above ``x``; ``None`` marks the end of the order."""
    c = chain(shape)
    r = int(c.rank[encode_index(x, shape)])
    if r + 1 == len(c):
        return None
    return c.point(r + 1)


def initial_segment(shape: GridShape, m: int) -> PointSet:
    c = chain(shape)
    if not 0 <= m <= len(c):
        raise ValueError(f"segment size {m} outside 0..{len(c)}")
    return PointSet(shape, c.rank < m)


def slice_order(shape: GridShape, r: int) -> np.ndarray:
    """Indices of ``[k]_r^n`` in shadow order."""
    if not 0 <= r <= shape.n:
        raise ValueError(f"weight {r} outside 0..{shape.n}")
    c = chain(shape)
    w = (digits(shape) != 0).sum(axis=1)
    return c.order[w[c.order] == r]


def slice_size(n: int, k: int, r: int) -> int:
    return math.comb(n, r) * (k - 1) ** r


def working_bound(n: int, r: int, m: int) -> int:
    """Smallest ``k >= 2`` whose slice ``[k]_r^n`` holds at least ``m`` points."""
    if not 0 <= r <= n:
        raise ValueError(f"weight {r} outside 0..{n}")
    if r == 0:
        if m > 1:
            raise ValueError(f"the weight-0 slice has a single point, cannot take {m}")
        return 2
    k = 2
    while slice_size(n, k, r) < m:
        k += 1
    return k


def _ranked_segment_at(n: int, r: int, m: int, k: int) -> RankedFamily:
    shape = GridShape(n, k)
    members = slice_order(shape, r)
    if m > len(members):
        raise ValueError(f"segment size {m} exceeds |[{k}]_{r}^{n}| = {len(members)}")
    mask = np.zeros(shape.size, dtype=bool)
    mask[members[:m]] = True
    return RankedFamily(PointSet(shape, mask), r)


def initial_segment_ranked(n: int, r: int, m: int, k: int | None = None) -> RankedFamily:
    """The ``m`` smallest weight-``r`` points.

    Without ``k`` the family lives in the unbounded slice; it is built in the
    smallest grid that can hold it and checked against the next grid up.
    """
    if m < 0:
        raise ValueError(f"segment size must be non-negative, got {m}")
    if k is not None:
        return _ranked_segment_at(n, r, m, k)
    kw = working_bound(n, r, m)
    fam = _ranked_segment_at(n, r, m, kw)
    wider = _ranked_segment_at(n, r, m, kw + 1)
    if sorted(fam.points()) != sorted(wider.points()):
        raise AssertionError(f"ranked segment unstable between k={kw} and k={kw + 1}")
    return fam


def is_initial_segment(family: PointSet | RankedFamily) -> bool:
    if isinstance(family, RankedFamily):
        shape = family.base.shape
        members = slice_order(shape, family.r)
        m = len(family)
        return bool(family.base.mask[members[:m]].all())
    c = chain(family.shape)
    ranks = c.rank[family.mask]
    return bool(len(ranks) == 0 or ranks.max() == len(ranks) - 1)


def colex_rank_keys(points: Sequence[Sequence[int]]) -> list[int]:
    """Colex position keys for 0/1 points: ``sum 2^j`` over the support."""
    return [sum(1 << j for j, v in enumerate(p) if v) for p in points]


# -- components ---------------------------------------------------------------


def component_of(x: Sequence[int]) -> Signature:
    m = max(x)
    return Signature(m, level_set(x, m), tuple(x).count(0))


def check_signature(sig: Signature, shape: GridShape) -> None:
    n = shape.n
    pos = sig.max_positions
    if not pos:
        raise ValueError("signature needs at least one max position")
    if not all(1 <= p <= n for p in pos):
        raise ValueError(f"max positions {sorted(pos)} outside 1..{n}")
    if not 0 <= sig.max_value < shape.k:
        raise ValueError(f"max value {sig.max_value} outside 0..{shape.k - 1}")
    if sig.max_value == 0:
        if sig.zero_count != n or len(pos) != n:
            raise ValueError("an all-zero class has every position maximal and n zeros")
        return
    free = n - len(pos)
    if not 0 <= sig.zero_count <= free:
        raise ValueError(f"zero count {sig.zero_count} inconsistent with {len(pos)} max positions")
    if sig.max_value == 1 and sig.zero_count != free:
        raise ValueError("with max value 1 every non-max position must be zero")


def enumerate_class(shape: GridShape, sig: Signature) -> PointSet:
    _uniform(shape)
    check_signature(sig, shape)
    d = digits(shape)
    m = d.max(axis=1)
    at_max = np.zeros(d.shape, dtype=bool)
    at_max[:, [p - 1 for p in sig.max_positions]] = True
    mask = (m == sig.max_value) & ((d == sig.max_value) == at_max).all(axis=1)
    mask &= (d == 0).sum(axis=1) == sig.zero_count
    return PointSet(shape, mask)


# -- Clements-Lindstrom order ------------------------------------------------


def cl_slice(shape: GridShape, r: int) -> np.ndarray:
    """Indices of ``F_r`` (coordinate sum ``r``) in lexicographic order.

    The mixed-radix index already runs in lexicographic order.
    """
    total = digits(shape).sum(axis=1)
    return np.flatnonzero(total == r)


def cl_initial_segment(shape: GridShape, r: int, m: int) -> PointSet:
    members = cl_slice(shape, r)
    if not 0 <= m <= len(members):
        raise ValueError(f"segment size {m} outside 0..{len(members)}")
    mask = np.zeros(shape.size, dtype=bool)
    mask[members[:m]] = True
    return PointSet(shape, mask)


def sorted_points(family: PointSet) -> list[Point]:
    """Members in shadow order (lexicographic order on per-axis grids)."""
    idx = family.indices()
    if not family.shape.per_axis:
        idx = idx[np.argsort(chain(family.shape).rank[idx], kind="stable")]
    d = digits(family.shape)
    return [tuple(int(v) for v in d[i]) for i in idx]
