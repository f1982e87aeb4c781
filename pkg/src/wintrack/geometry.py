"""Axis-aligned bounding boxes, IoU, and IoU distance matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box stored as (left, top, width, height).

    Coordinates are continuous pixel units; the layout matches the
    MOTChallenge column order so file rows map onto fields directly.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"box field {name!r} must be finite, got {v!r}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box sides must be positive, got w={self.w}, h={self.h}")

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    @property
    def cx(self) -> float:
        return self.x + self.w / 2.0

    @property
    def cy(self) -> float:
        return self.y + self.h / 2.0

    @property
    def area(self) -> float:
        return self.w * self.h

    def translated(self, dx: float, dy: float) -> "BoundingBox":
        return BoundingBox(self.x + dx, self.y + dy, self.w, self.h)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes, in [0, 1].

    Touching boxes (zero-area intersection) score 0.  Operands are put in
    a canonical order first so iou(a, b) == iou(b, a) bit-for-bit.
    """
    if a == b:
        return 1.0
    if (b.x, b.y, b.w, b.h) < (a.x, a.y, a.w, a.h):
        a, b = b, a
    iw = min(a.right, b.right) - max(a.x, b.x)
    if iw <= 0:
        return 0.0
    ih = min(a.bottom, b.bottom) - max(a.y, b.y)
    if ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def iou_matrix(rows: Sequence[BoundingBox], cols: Sequence[BoundingBox]) -> np.ndarray:
    """IoU of every row box against every column box, shape (len(rows), len(cols))."""
    out = np.zeros((len(rows), len(cols)), dtype=float)
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            out[i, j] = iou(a, b)
    return out


def iou_distance_matrix(
    rows: Sequence[BoundingBox], cols: Sequence[BoundingBox]
) -> np.ndarray:
    """Association cost matrix with entry (i, j) = 1 - iou(rows[i], cols[j]).

    Either side may be empty; the result then has a zero-length dimension.
    All entries lie in [0, 1].
    """
    return 1.0 - iou_matrix(rows, cols)
