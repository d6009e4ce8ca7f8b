"""Bitmask kernels for exhaustive and sampled shadow campaigns.

A *universe* of at most 62 points is numbered 0..N-1 and a family is an
N-bit mask.  ``table[b]`` is the shadow of universe point ``b`` as a mask over
at most 64 target points, so the shadow of a family is the OR of the table
rows of its members.

Every kernel has a numba implementation and a numpy one.  Both report, for
each family size, the least shadow size and the numerically smallest mask
attaining it, so their outputs are identical.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ._jit import njit, resolve_backend

MAX_UNIVERSE = 62
RECHECK_PERIOD = 1 << 12
NO_SHADOW = 1 << 30

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit
def _lowest_bit(x):
    return _popcount((x & (~x + np.uint64(1))) - np.uint64(1))


@njit
def _or_shadow(table, mask):
    acc = np.uint64(0)
    while mask:
        acc |= table[_lowest_bit(mask)]
        mask &= mask - np.uint64(1)
    return acc


@njit
def _sweep_range_numba(table, start, stop, best, best_mask):
    """Gray-code sweep over families ``gray(start) .. gray(stop - 1)``.

    Keeps a coverage count per target point so each step costs one table row.
    Every ``RECHECK_PERIOD`` steps the shadow is rebuilt from scratch and
    compared; returns the number of mismatches (always 0 for a sound kernel).
    """
    counts = np.zeros(64, dtype=np.int64)
    g = np.uint64(start ^ (start >> 1))
    size = 0
    covered = 0
    m = g
    b = 0
    while m:
        if m & np.uint64(1):
            size += 1
            row = table[b]
            while row:
                t = _lowest_bit(row)
                if counts[t] == 0:
                    covered += 1
                counts[t] += 1
                row &= row - np.uint64(1)
        m >>= np.uint64(1)
        b += 1
    mismatches = 0
    for i in range(start, stop):
        if i > start:
            ng = np.uint64(i ^ (i >> 1))
            flip = ng ^ g
            b = _lowest_bit(flip)
            row = table[b]
            if ng & flip:
                size += 1
                while row:
                    t = _lowest_bit(row)
                    if counts[t] == 0:
                        covered += 1
                    counts[t] += 1
                    row &= row - np.uint64(1)
            else:
                size -= 1
                while row:
                    t = _lowest_bit(row)
                    counts[t] -= 1
                    if counts[t] == 0:
                        covered -= 1
                    row &= row - np.uint64(1)
            g = ng
            if (i & (RECHECK_PERIOD - 1)) == 0:
                if _popcount(_or_shadow(table, g)) != covered:
                    mismatches += 1
        if covered < best[size] or (covered == best[size] and g < best_mask[size]):
            best[size] = covered
            best_mask[size] = g
    return mismatches


def _sweep_numba(table: np.ndarray, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    n = len(table)
    best = np.full(n + 1, NO_SHADOW, dtype=np.int64)
    best_mask = np.zeros(n + 1, dtype=np.uint64)
    bad = _sweep_range_numba(table, start, stop, best, best_mask)
    if bad:
        raise RuntimeError(f"incremental shadow drifted from recomputation {bad} times")
    return best, best_mask


def _subset_or_table(table: np.ndarray, bits: int) -> np.ndarray:
    """``out[mask]`` = OR of ``table[b]`` over the set bits of ``mask``."""
    out = np.zeros(1 << bits, dtype=np.uint64)
    for b in range(bits):
        out[1 << b : 2 << b] = out[: 1 << b] | table[b]
    return out


def _fold_best(best, best_mask, sizes, shadow, masks) -> None:
    order = np.lexsort((masks, shadow, sizes))
    sizes, shadow, masks = sizes[order], shadow[order], masks[order]
    first = np.ones(len(sizes), dtype=bool)
    first[1:] = sizes[1:] != sizes[:-1]
    for s, sh, mk in zip(sizes[first], shadow[first], masks[first]):
        if sh < best[s] or (sh == best[s] and mk < best_mask[s]):
            best[s] = sh
            best_mask[s] = mk


def _sweep_numpy(table: np.ndarray, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Same families as the Gray sweep over ``[start, stop)``, via a subset DP."""
    n = len(table)
    best = np.full(n + 1, NO_SHADOW, dtype=np.int64)
    best_mask = np.zeros(n + 1, dtype=np.uint64)
    low = min(n, 18)
    low_or = _subset_or_table(table, low)
    low_masks = np.arange(1 << low, dtype=np.uint64)
    low_sizes = np.bitwise_count(low_masks).astype(np.int64)
    block = 1 << low
    # Gray indices [start, stop) cover gray codes whose set we enumerate by block
    gray_idx = np.arange(start, stop, dtype=np.uint64) if stop - start <= block else None
    if gray_idx is not None:
        masks = gray_idx ^ (gray_idx >> np.uint64(1))
        shadow = _eval_numpy(table, masks)
        _fold_best(best, best_mask, np.bitwise_count(masks).astype(np.int64), shadow, masks)
        return best, best_mask
    if start % block or stop % block:
        raise ValueError("numpy sweep shards must be aligned to 2^18 families")
    for blk in range(start // block, stop // block):
        # gray codes of indices in one aligned block share their high bits
        high = np.uint64(blk ^ (blk >> 1)) << np.uint64(low)
        high_or = _or_high(table, low, int(high))
        shadow = np.bitwise_count(low_or | np.uint64(high_or)).astype(np.int64)
        sizes = low_sizes + int(np.bitwise_count(high))
        _fold_best(best, best_mask, sizes, shadow, low_masks | high)
    return best, best_mask


def _or_high(table: np.ndarray, low: int, high: int) -> int:
    acc = 0
    for b in range(low, len(table)):
        if high >> b & 1:
            acc |= int(table[b])
    return acc


def sweep_all(table: np.ndarray, backend: str | None = None, shards: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Least shadow size and witness mask for every family size, over all 2^N families.

    The family space is split into contiguous Gray-index shards whose results
    are merged by (shadow, mask), so the answer does not depend on sharding.
    """
    backend = resolve_backend(backend)
    table = np.ascontiguousarray(table, dtype=np.uint64)
    n = len(table)
    if n > MAX_UNIVERSE:
        raise ValueError(f"universe of {n} points exceeds {MAX_UNIVERSE}")
    total = 1 << n
    align = 1 << 18 if backend == "numpy" and n > 18 else 1
    shards = max(1, min(shards, total // align))
    cuts = [((total // align) * i // shards) * align for i in range(shards + 1)]
    best = np.full(n + 1, NO_SHADOW, dtype=np.int64)
    best_mask = np.zeros(n + 1, dtype=np.uint64)
    run = _sweep_numba if backend == "numba" else _sweep_numpy
    for lo, hi in zip(cuts, cuts[1:]):
        if lo == hi:
            continue
        b, bm = run(table, lo, hi)
        _merge(best, best_mask, b, bm)
    return best, best_mask


def _merge(best, best_mask, b, bm) -> None:
    for s in range(len(best)):
        if b[s] < best[s] or (b[s] == best[s] and bm[s] < best_mask[s]):
            best[s] = b[s]
            best_mask[s] = bm[s]


# -- evaluating given families --------------------------------------------------


@njit
def _eval_numba(table, masks, out):
    for i in range(len(masks)):
        out[i] = _popcount(_or_shadow(table, masks[i]))


def _eval_numpy(table: np.ndarray, masks: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(masks), dtype=np.uint64)
    for b in range(len(table)):
        hit = (masks >> np.uint64(b)) & np.uint64(1)
        acc |= hit * table[b]
    return np.bitwise_count(acc).astype(np.int64)


def shadow_sizes(table: np.ndarray, masks: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Shadow size of each family in ``masks``."""
    backend = resolve_backend(backend)
    table = np.ascontiguousarray(table, dtype=np.uint64)
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    if backend == "numba":
        out = np.empty(len(masks), dtype=np.int64)
        _eval_numba(table, masks, out)
        return out
    return _eval_numpy(table, masks)


# -- fixed-size enumeration ---------------------------------------------------------


@njit
def _combo_min_numba(table, m):
    n = len(table)
    if m == 0:
        return 0, np.uint64(0), 1
    mask = np.uint64((1 << m) - 1)
    end = np.uint64(1) << np.uint64(n)
    best = NO_SHADOW
    best_mask = np.uint64(0)
    count = 0
    while mask < end:
        s = _popcount(_or_shadow(table, mask))
        count += 1
        if s < best:
            best = s
            best_mask = mask
        # Gosper's hack: next mask with the same popcount
        c = mask & (~mask + np.uint64(1))
        r = mask + c
        mask = (((r ^ mask) >> np.uint64(2)) // c) | r
    return best, best_mask, count


def _combo_min_numpy(table: np.ndarray, m: int, chunk: int = 1 << 16) -> tuple[int, int, int]:
    n = len(table)
    if m == 0:
        return 0, 0, 1
    best, best_mask, count = NO_SHADOW, 0, 0
    weights = np.uint64(1) << np.arange(n, dtype=np.uint64)
    combos = itertools.combinations(range(n), m)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        idx = block.reshape(-1, m)
        shadow = np.bitwise_count(np.bitwise_or.reduce(table[idx], axis=1)).astype(np.int64)
        masks = np.bitwise_or.reduce(weights[idx], axis=1)
        count += len(idx)
        lo = int(shadow.min())
        cand = int(masks[shadow == lo].min())
        if lo < best or (lo == best and cand < best_mask):
            best, best_mask = lo, cand
    return best, best_mask, count


def min_over_size(table: np.ndarray, m: int, backend: str | None = None) -> tuple[int, int, int]:
    """Least shadow over all ``m``-member families: (size, smallest witness mask, families seen)."""
    backend = resolve_backend(backend)
    table = np.ascontiguousarray(table, dtype=np.uint64)
    n = len(table)
    if n > MAX_UNIVERSE:
        raise ValueError(f"universe of {n} points exceeds {MAX_UNIVERSE}")
    if not 0 <= m <= n:
        raise ValueError(f"family size {m} outside 0..{n}")
    if backend == "numba":
        best, mask, count = _combo_min_numba(table, m)
        return int(best), int(mask), int(count)
    return _combo_min_numpy(table, m)


def family_count(n: int, m: int | None = None) -> int:
    return 1 << n if m is None else math.comb(n, m)
