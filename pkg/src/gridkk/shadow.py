"""Shadow operators on dense families.

Every operator returns a family of the same grid; the shadow of the empty
family is empty.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .grid import GridShape, Point, PointSet, digits


class ShadowKind(enum.Enum):
    D_LOWER = "d_lower"
    D_UPPER = "d_upper"
    BINARY_LOWER = "binary_lower"
    BINARY_UPPER = "binary_upper"
    GAMMA = "gamma"


def _require_uniform(shape: GridShape, what: str) -> None:
    if shape.per_axis:
        raise ValueError(f"{what} is defined on uniform grids [k]^n only")


def _require_binary(shape: GridShape) -> None:
    if shape.per_axis or shape.k != 2:
        raise ValueError("binary shadows and complements need k = 2")


def d_shadow(family: PointSet) -> PointSet:
    """Zero one nonzero coordinate of some member, in every possible way."""
    shape = family.shape
    _require_uniform(shape, "the d-shadow")
    idx = family.indices()
    d = digits(shape)[idx]
    out = np.zeros(shape.size, dtype=bool)
    for j, stride in enumerate(shape.strides):
        v = d[:, j]
        hit = v != 0
        out[idx[hit] - v[hit] * stride] = True
    return PointSet(shape, out)


def d_plus_shadow(family: PointSet) -> PointSet:
    """Raise one zero coordinate of some member to each value in ``1..k-1``."""
    shape = family.shape
    _require_uniform(shape, "the d+-shadow")
    idx = family.indices()
    d = digits(shape)[idx]
    out = np.zeros(shape.size, dtype=bool)
    for j, stride in enumerate(shape.strides):
        base = idx[d[:, j] == 0]
        for value in range(1, shape.k):
            out[base + value * stride] = True
    return PointSet(shape, out)


def gamma_shadow(family: PointSet) -> PointSet:
    """Clements-Lindstrom shadow: decrement one positive coordinate."""
    shape = family.shape
    idx = family.indices()
    d = digits(shape)[idx]
    out = np.zeros(shape.size, dtype=bool)
    for j, stride in enumerate(shape.strides):
        out[idx[d[:, j] > 0] - stride] = True
    return PointSet(shape, out)


def binary_lower_shadow(family: PointSet) -> PointSet:
    _require_binary(family.shape)
    return d_shadow(family)


def binary_upper_shadow(family: PointSet) -> PointSet:
    _require_binary(family.shape)
    return d_plus_shadow(family)


def complement_point(x: Sequence[int]) -> Point:
    if any(v not in (0, 1) for v in x):
        raise ValueError(f"complement is defined for 0/1 points only, got {tuple(x)}")
    return tuple(1 - v for v in x)


def complement(family: PointSet) -> PointSet:
    """``{x^c : x in A}``; on ``{0,1}^n`` this reverses the index order."""
    _require_binary(family.shape)
    return PointSet(family.shape, family.mask[::-1])


def shadow(family: PointSet, kind: ShadowKind | str) -> PointSet:
    kind = ShadowKind(kind)
    if kind is ShadowKind.D_LOWER:
        return d_shadow(family)
    if kind is ShadowKind.D_UPPER:
        return d_plus_shadow(family)
    if kind is ShadowKind.BINARY_LOWER:
        return binary_lower_shadow(family)
    if kind is ShadowKind.BINARY_UPPER:
        return binary_upper_shadow(family)
    if not family.shape.per_axis:
        raise ValueError("the gamma shadow needs a grid with per-axis bounds")
    return gamma_shadow(family)


def point_shadow_indices(shape: GridShape, index: int, kind: ShadowKind | str = ShadowKind.D_LOWER) -> np.ndarray:
    """Grid indices in the shadow of the single point with index ``index``."""
    mask = np.zeros(shape.size, dtype=bool)
    mask[index] = True
    return shadow(PointSet(shape, mask), kind).indices()
