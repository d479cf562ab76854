"""Bodies as finite unions of axis-aligned boxes; exact projection volumes.

Boxes may be degenerate (point extent) on some axes, so a box can live in a
proper coordinate subspace.  All endpoints are exact rationals and every
measure below is computed exactly; logarithms appear only in reporting, at a
stated decimal precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    FormatError,
    LOG_DIGITS,
    ProjectionVector,
    _loads_strict,
    canonical_subset_order,
    check_dimension,
    elements,
    format_rational,
    log_fraction,
    parse_rational,
)


@dataclass(frozen=True)
class Box:
    """Product of closed rational intervals, one per axis; lo == hi is allowed."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.intervals:
            raise ValueError("box needs at least one axis")
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")

    @property
    def n(self) -> int:
        return len(self.intervals)

    def side(self, axis: int) -> Fraction:
        """Extent on a 1-based axis."""
        lo, hi = self.intervals[axis - 1]
        return hi - lo

    def translate(self, shift: Fraction) -> "Box":
        return Box(tuple((lo + shift, hi + shift) for lo, hi in self.intervals))


@dataclass(frozen=True)
class BoxUnionBody:
    n: int
    boxes: tuple[Box, ...]

    def __post_init__(self) -> None:
        check_dimension(self.n)
        if not self.boxes:
            raise ValueError("body needs at least one box")
        for box in self.boxes:
            if box.n != self.n:
                raise ValueError("all boxes must share the body dimension")


def projection_volume(body: BoxUnionBody, mask: int) -> Fraction:
    """Exact |A|-dimensional measure of the projection onto the axes in `mask`.

    Coordinate compression: the grid induced by the active boxes' endpoints
    partitions each axis; a cell contributes iff some box spans it entirely.
    Boxes degenerate on any axis of A project to measure zero and drop out.
    """
    if mask == 0 or mask >> body.n:
        raise ValueError(f"mask {mask} is not a nonempty subset of [{body.n}]")
    axes = elements(mask)
    rects = []
    for box in body.boxes:
        iv = tuple(box.intervals[a - 1] for a in axes)
        if all(lo < hi for lo, hi in iv):
            rects.append(iv)
    if not rects:
        return Fraction(0)
    depth_max = len(axes)
    memo: dict[tuple[frozenset, int], Fraction] = {}

    def measure(active: frozenset, depth: int) -> Fraction:
        if depth == depth_max:
            return Fraction(1)
        key = (active, depth)
        cached = memo.get(key)
        if cached is not None:
            return cached
        points = sorted(
            {rects[i][depth][0] for i in active} | {rects[i][depth][1] for i in active}
        )
        total = Fraction(0)
        for a, b in zip(points, points[1:]):
            spanning = frozenset(
                i for i in active if rects[i][depth][0] <= a and b <= rects[i][depth][1]
            )
            if spanning:
                total += (b - a) * measure(spanning, depth + 1)
        memo[key] = total
        return total

    return measure(frozenset(range(len(rects))), 0)


@dataclass(frozen=True)
class ProjectionProfile:
    """Exact volumes plus their logs (rationalized at `digits` precision).

    logs[A] is None exactly where volumes[A] == 0; such a vector is not
    constructible as-is (a positive-volume body has every projection positive).
    """

    n: int
    digits: int
    volumes: dict[int, Fraction]
    logs: dict[int, Optional[Fraction]]

    @property
    def all_positive(self) -> bool:
        return all(v > 0 for v in self.volumes.values())

    def to_projection_vector(self) -> ProjectionVector:
        if not self.all_positive:
            zero = [m for m, v in self.volumes.items() if v == 0]
            raise ValueError(
                "zero projection on "
                + ", ".join("{" + ",".join(map(str, elements(m))) + "}" for m in zero)
            )
        return ProjectionVector(self.n, {m: v for m, v in self.logs.items()})


def log_projection_vector(body: BoxUnionBody, digits: int = LOG_DIGITS) -> ProjectionProfile:
    volumes = {m: projection_volume(body, m) for m in canonical_subset_order(body.n)}
    logs = {
        m: (log_fraction(v, digits) if v > 0 else None) for m, v in volumes.items()
    }
    return ProjectionProfile(body.n, digits, volumes, logs)


def thicken(body: BoxUnionBody, eps: Fraction) -> BoxUnionBody:
    """Add one full-dimensional eps-cube beyond the body's coordinate range.

    Placed past the global maximum on every axis, its projections are
    disjoint from all existing ones, so every projection volume grows by
    exactly eps^{|A|} and becomes strictly positive.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    top = max(hi for box in body.boxes for _, hi in box.intervals)
    base = top + 1
    cube = Box(tuple((base, base + eps) for _ in range(body.n)))
    return BoxUnionBody(body.n, body.boxes + (cube,))


def disjoint_offset(boxes: Sequence[Box]) -> BoxUnionBody:
    """Translate each box along the diagonal so all coordinate intervals are
    pairwise disjoint; projections onto every subspace are then disjoint and
    measures add.  The first box is kept in place."""
    if not boxes:
        raise ValueError("need at least one box")
    n = boxes[0].n
    out: list[Box] = []
    top: Optional[Fraction] = None
    for box in boxes:
        if box.n != n:
            raise ValueError("boxes must share a dimension")
        if top is None:
            shifted = box
        else:
            lo_min = min(lo for lo, _ in box.intervals)
            shifted = box.translate(top + 1 - lo_min)
        out.append(shifted)
        hi_max = max(hi for _, hi in shifted.intervals)
        top = hi_max if top is None else max(top, hi_max)
    return BoxUnionBody(n, tuple(out))


def axiswise_disjoint(body: BoxUnionBody) -> bool:
    """True when on every axis the boxes' intervals are pairwise disjoint."""
    for axis in range(body.n):
        spans = sorted(box.intervals[axis] for box in body.boxes)
        for (_, hi), (lo, _) in zip(spans, spans[1:]):
            if hi >= lo:
                return False
    return True


# ---------------------------------------------------------------------------
# body file format

def write_body(body: BoxUnionBody) -> str:
    return json.dumps(
        {
            "n": body.n,
            "boxes": [
                {
                    "intervals": [
                        [format_rational(lo), format_rational(hi)]
                        for lo, hi in box.intervals
                    ]
                }
                for box in body.boxes
            ],
        },
        indent=2,
    )


def read_body(text: str) -> BoxUnionBody:
    data = _loads_strict(text)
    if not isinstance(data, dict) or "n" not in data or "boxes" not in data:
        raise FormatError("body file must be an object with 'n' and 'boxes'")
    n = data["n"]
    if not isinstance(n, int):
        raise FormatError("'n' must be an integer")
    check_dimension(n)
    if not isinstance(data["boxes"], list) or not data["boxes"]:
        raise FormatError("'boxes' must be a nonempty list")
    boxes = []
    for entry in data["boxes"]:
        if not isinstance(entry, dict) or "intervals" not in entry:
            raise FormatError("each box must be an object with 'intervals'")
        iv = entry["intervals"]
        if not isinstance(iv, list) or len(iv) != n:
            raise FormatError(f"each box needs exactly {n} intervals")
        intervals = []
        for pair in iv:
            if not isinstance(pair, list) or len(pair) != 2:
                raise FormatError("each interval must be a [lo, hi] pair")
            lo, hi = parse_rational(pair[0]), parse_rational(pair[1])
            if lo > hi:
                raise FormatError(f"empty interval [{lo}, {hi}]")
            intervals.append((lo, hi))
        boxes.append(Box(tuple(intervals)))
    return BoxUnionBody(n, tuple(boxes))
