"""Skin-pixel classification, largest-region analysis, and the face gate.

A face candidate is the bounding box of the single largest connected
component of White (skin) cells. The gate accepts a box when it is at
least 50x50 and its height/width ratio lies in [1, 2].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .errors import GateFailedError, OutOfBoundsError
from .raster import BinaryMask, Rect, RgbImage, binarize

__all__ = [
    "Connectivity",
    "SkinConfig",
    "RejectReason",
    "Verdict",
    "FaceBox",
    "MIN_FACE_WIDTH",
    "MIN_FACE_HEIGHT",
    "MAX_HEIGHT_TO_WIDTH",
    "classify_skin",
    "largest_skin_region",
    "face_gate",
    "crop_face",
]

MIN_FACE_WIDTH = 50
MIN_FACE_HEIGHT = 50
MAX_HEIGHT_TO_WIDTH = 2


class Connectivity(enum.IntEnum):
    FOUR = 4
    EIGHT = 8


class RejectReason(enum.Enum):
    """Why a candidate box (or a whole image) is not a face."""

    TOO_SHORT = "too_short"
    TOO_NARROW = "too_narrow"
    RATIO_BELOW_ONE = "ratio_below_one"
    RATIO_ABOVE_TWO = "ratio_above_two"
    NO_SKIN_REGION = "no_skin_region"


@dataclass(frozen=True)
class Verdict:
    is_face: bool
    reason: RejectReason | None = None

    def __post_init__(self) -> None:
        if self.is_face and self.reason is not None:
            raise ValueError("an accepted verdict carries no reason")
        if not self.is_face and self.reason is None:
            raise ValueError("a rejected verdict needs exactly one reason")


@dataclass(frozen=True)
class SkinConfig:
    """Tuning knobs for skin classification and region search.

    ``min_region_pixels`` prunes speckle components before the gate; the
    gate itself still requires a 50x50 box.
    """

    threshold: int = 100
    connectivity: Connectivity = Connectivity.FOUR
    min_region_pixels: int = 25

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must be in 0..255, got {self.threshold}")
        if self.min_region_pixels < 1:
            raise ValueError("min_region_pixels must be >= 1")
        object.__setattr__(self, "connectivity", Connectivity(self.connectivity))


@dataclass(frozen=True)
class FaceBox:
    """Bounding box of a connected skin region, plus the gate verdict.

    ``pixel_count`` is the size of the winning component, not the box area.
    ``verdict`` stays None until :func:`face_gate` fills it.
    """

    x0: int
    y0: int
    width: int
    height: int
    pixel_count: int
    verdict: Verdict | None = None

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("face box must have positive size")
        if not 0 <= self.pixel_count <= self.width * self.height:
            raise ValueError("pixel_count must fit inside the box")
        if self.verdict is not None and self.verdict.is_face:
            if not _gate_ok(self.height, self.width):
                raise ValueError("accepted verdict on a box that fails the gate")

    @property
    def rect(self) -> Rect:
        return Rect(self.x0, self.y0, self.width, self.height)


def classify_skin(image: RgbImage, config: SkinConfig) -> BinaryMask:
    """Mark skin-candidate pixels White via the mean-intensity threshold."""
    return binarize(image, config.threshold)


def largest_skin_region(mask: BinaryMask, config: SkinConfig) -> FaceBox | None:
    """Bounding box of the biggest connected White component, or None.

    Components smaller than ``config.min_region_pixels`` are discarded.
    Ties on size are broken by smaller box y0, then smaller x0. The
    returned box carries no verdict; apply :func:`face_gate` separately.
    """
    structure = None  # scipy default: 4-connected cross
    if config.connectivity is Connectivity.EIGHT:
        structure = np.ones((3, 3), dtype=bool)
    labels, count = ndimage.label(mask.cells, structure=structure)
    if count == 0:
        return None
    sizes = np.bincount(labels.ravel())[1:]
    eligible = np.flatnonzero(sizes >= config.min_region_pixels) + 1
    if eligible.size == 0:
        return None
    best_size = int(sizes[eligible - 1].max())
    tied = [lab for lab in eligible.tolist() if sizes[lab - 1] == best_size]
    slices = ndimage.find_objects(labels)

    def box_origin(lab: int) -> tuple[int, int]:
        ys, xs = slices[lab - 1]
        return ys.start, xs.start

    winner = min(tied, key=box_origin)
    ys, xs = slices[winner - 1]
    return FaceBox(
        x0=int(xs.start),
        y0=int(ys.start),
        width=int(xs.stop - xs.start),
        height=int(ys.stop - ys.start),
        pixel_count=best_size,
    )


def _gate_ok(height: int, width: int) -> bool:
    return (
        height >= MIN_FACE_HEIGHT
        and width >= MIN_FACE_WIDTH
        and width <= height <= MAX_HEIGHT_TO_WIDTH * width
    )


def face_gate(box: FaceBox) -> FaceBox:
    """Fill the verdict: accept iff height >= 50, width >= 50, 1 <= h/w <= 2.

    Rejections report the first failing check, in the fixed order
    TOO_SHORT, TOO_NARROW, RATIO_BELOW_ONE, RATIO_ABOVE_TWO.
    """
    if box.height < MIN_FACE_HEIGHT:
        reason = RejectReason.TOO_SHORT
    elif box.width < MIN_FACE_WIDTH:
        reason = RejectReason.TOO_NARROW
    elif box.height < box.width:
        reason = RejectReason.RATIO_BELOW_ONE
    elif box.height > MAX_HEIGHT_TO_WIDTH * box.width:
        reason = RejectReason.RATIO_ABOVE_TWO
    else:
        return replace(box, verdict=Verdict(is_face=True))
    return replace(box, verdict=Verdict(is_face=False, reason=reason))


def crop_face(mask: BinaryMask, box: FaceBox) -> BinaryMask:
    """Cut the box-bounded sub-mask; its origin becomes (0, 0).

    Raises:
        GateFailedError: the box verdict is absent or rejected.
        OutOfBoundsError: the box does not fit inside the mask.
    """
    if box.verdict is None or not box.verdict.is_face:
        raise GateFailedError("crop_face requires an accepted face box")
    if not box.rect.within_bounds(mask.width, mask.height):
        raise OutOfBoundsError(
            f"box {box.rect} exceeds {mask.width}x{mask.height} mask"
        )
    sub = mask.cells[box.y0 : box.y0 + box.height, box.x0 : box.x0 + box.width]
    return BinaryMask(sub.copy())
