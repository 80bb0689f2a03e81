"""Geometric partition of a cropped face into eye and lip rectangles.

The partition is a fixed facial-proportion prior: each region is a pair of
half-open fractional intervals of the face width and height. Fractions are
stored as exact rationals so floor/ceil rounding is deterministic at every
face size; floats given to :class:`RoiFractions` are interpreted by their
decimal literal (``0.55`` means 55/100), matching the run-configuration
file format.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import DegenerateRoiError
from .raster import Rect

__all__ = ["RoiTag", "RoiFractions", "RoiSet", "locate_rois"]


class RoiTag(enum.Enum):
    LEFT_EYE = "left_eye"
    RIGHT_EYE = "right_eye"
    LIPS = "lips"


def _as_fraction(value: Fraction | str | float | int) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class RoiFractions:
    """Region boundaries as fractions of face height (rows) and width (cols).

    Defaults place the eyes in rows [0.20, 0.50) of the face, the left eye
    in columns [0.10, 0.50), the right eye in [0.55, 0.95), and the lips in
    rows [0.65, 0.95) x columns [0.25, 0.75). "Left" is image-left.
    """

    eye_top: Fraction = Fraction(20, 100)
    eye_bottom: Fraction = Fraction(50, 100)
    lip_top: Fraction = Fraction(65, 100)
    lip_bottom: Fraction = Fraction(95, 100)
    left_eye_left: Fraction = Fraction(10, 100)
    left_eye_right: Fraction = Fraction(50, 100)
    right_eye_left: Fraction = Fraction(55, 100)
    right_eye_right: Fraction = Fraction(95, 100)
    lip_left: Fraction = Fraction(25, 100)
    lip_right: Fraction = Fraction(75, 100)

    def __post_init__(self) -> None:
        for field in fields(self):
            value = _as_fraction(getattr(self, field.name))
            if not 0 <= value <= 1:
                raise ValueError(f"{field.name} must be in [0, 1], got {value}")
            object.__setattr__(self, field.name, value)
        spans = {
            "eye rows": (self.eye_top, self.eye_bottom),
            "lip rows": (self.lip_top, self.lip_bottom),
            "left eye cols": (self.left_eye_left, self.left_eye_right),
            "right eye cols": (self.right_eye_left, self.right_eye_right),
            "lip cols": (self.lip_left, self.lip_right),
        }
        for name, (lo, hi) in spans.items():
            if not lo < hi:
                raise ValueError(f"{name}: lower bound {lo} must be < upper bound {hi}")
        if self.left_eye_right > self.right_eye_left:
            raise ValueError("left-eye and right-eye column ranges must be disjoint")
        if self.eye_bottom > self.lip_top:
            raise ValueError("eye rows must end at or above the start of the lip rows")


@dataclass(frozen=True)
class RoiSet:
    """Left-eye, right-eye and lip rectangles in face-local coordinates."""

    left_eye: Rect
    right_eye: Rect
    lips: Rect

    def __post_init__(self) -> None:
        named = dict(self.items())
        tags = list(named)
        for i, a in enumerate(tags):
            for b in tags[i + 1 :]:
                if named[a].intersects(named[b]):
                    raise ValueError(f"ROI rectangles {a.value} and {b.value} overlap")
        eyes_bottom = max(self.left_eye.y1, self.right_eye.y1)
        if eyes_bottom > self.lips.y0:
            raise ValueError("eye rectangles must lie strictly above the lip rectangle")

    def items(self) -> tuple[tuple[RoiTag, Rect], ...]:
        return (
            (RoiTag.LEFT_EYE, self.left_eye),
            (RoiTag.RIGHT_EYE, self.right_eye),
            (RoiTag.LIPS, self.lips),
        )

    def get(self, tag: RoiTag) -> Rect:
        return dict(self.items())[tag]


def _span(low: Fraction, high: Fraction, size: int, name: str) -> tuple[int, int]:
    """Map the half-open fraction interval [low, high) onto pixel indices.

    Returns (start, length): cells floor(low*size) .. ceil(high*size)-1,
    clamped to [0, size).
    """
    start = max(0, math.floor(low * size))
    stop = min(size, math.ceil(high * size))
    if stop - start < 1:
        raise DegenerateRoiError(f"{name} collapses to zero size at extent {size}")
    return start, stop - start


def locate_rois(
    face_width: int,
    face_height: int,
    fractions: RoiFractions | None = None,
) -> RoiSet:
    """Place the three ROI rectangles inside a face of the given size.

    Intended for gate-accepted faces (both sides >= 50); for those sizes the
    default fractions always produce non-empty, pairwise disjoint rectangles.

    Raises:
        DegenerateRoiError: rounding collapsed a rectangle to zero area
            (only possible with extreme custom fractions).
    """
    if face_width < 1 or face_height < 1:
        raise ValueError("face dimensions must be positive")
    f = fractions if fractions is not None else RoiFractions()
    eye_y0, eye_h = _span(f.eye_top, f.eye_bottom, face_height, "eye rows")
    lip_y0, lip_h = _span(f.lip_top, f.lip_bottom, face_height, "lip rows")
    le_x0, le_w = _span(f.left_eye_left, f.left_eye_right, face_width, "left eye cols")
    re_x0, re_w = _span(f.right_eye_left, f.right_eye_right, face_width, "right eye cols")
    lip_x0, lip_w = _span(f.lip_left, f.lip_right, face_width, "lip cols")
    return RoiSet(
        left_eye=Rect(le_x0, eye_y0, le_w, eye_h),
        right_eye=Rect(re_x0, eye_y0, re_w, eye_h),
        lips=Rect(lip_x0, lip_y0, lip_w, lip_h),
    )
