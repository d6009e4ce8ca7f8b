"""Set files and CSV tables.

A set file holds one point per line in digit or comma form.  Blank lines and
lines starting with ``#`` are skipped.  The grid always comes from the caller.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, TextIO

from .grid import GridShape, PointSet, format_point, parse_point
from .order import sorted_points


class SetFileError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_set(lines: Iterable[str], shape: GridShape) -> PointSet:
    points = []
    for no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            points.append(parse_point(text, shape))
        except ValueError as exc:
            raise SetFileError(no, str(exc)) from None
    return PointSet.from_points(shape, points)


def read_set(source: str | Path | TextIO, shape: GridShape) -> PointSet:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return parse_set(fh, shape)
    return parse_set(source, shape)


def format_set(family: PointSet) -> str:
    """Members in shadow order, one per line."""
    return "".join(format_point(p, family.shape) + "\n" for p in sorted_points(family))


def write_set(family: PointSet, target: str | Path | TextIO) -> None:
    text = format_set(family)
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        target.write(text)


def format_csv(header: Iterable[str], rows: Iterable[Iterable[int]]) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(str(int(v)) for v in row) + "\n")
    return out.getvalue()


def parse_sizes(text: str) -> range:
    """``"a..b"`` (inclusive) or a single ``"m"``."""
    a, sep, b = text.partition("..")
    try:
        lo = int(a)
        hi = int(b) if sep else lo
    except ValueError:
        raise ValueError(f"bad size range {text!r}; expected a..b or m") from None
    if lo < 0 or hi < lo:
        raise ValueError(f"bad size range {text!r}")
    return range(lo, hi + 1)
