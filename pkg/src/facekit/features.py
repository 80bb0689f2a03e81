"""Feature points per ROI: west/east extremes plus north/south tangent points.

"Tangents" are the axis-aligned supporting lines of the curve: the points
where the horizontal lines y = min and y = max touch it. Together with the
westmost and eastmost cells this gives four deterministic points per ROI.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyCurveError
from .fill import Curve
from .raster import Point
from .roi import RoiTag

__all__ = [
    "FeatureKind",
    "FeaturePoint",
    "FeatureSet",
    "extreme_points",
    "tangent_points",
    "extract_features",
]


class FeatureKind(enum.Enum):
    EXTREME_WEST = "extreme_west"
    EXTREME_EAST = "extreme_east"
    TANGENT_NORTH = "tangent_north"
    TANGENT_SOUTH = "tangent_south"


@dataclass(frozen=True)
class FeaturePoint:
    position: Point
    kind: FeatureKind
    roi_tag: RoiTag


@dataclass(frozen=True)
class FeatureSet:
    """Up to four points per ROI; a ROI is complete iff all four are present."""

    points: tuple[FeaturePoint, ...]
    complete_rois: frozenset[RoiTag]

    def __post_init__(self) -> None:
        for tag in RoiTag:
            kinds = [p.kind for p in self.points if p.roi_tag is tag]
            if len(kinds) != len(set(kinds)):
                raise ValueError(f"duplicate feature kind for {tag.value}")
            if (len(set(kinds)) == len(FeatureKind)) != (tag in self.complete_rois):
                raise ValueError(f"completeness flag inconsistent for {tag.value}")

    def is_complete(self, tag: RoiTag) -> bool:
        return tag in self.complete_rois

    def points_for(self, tag: RoiTag) -> tuple[FeaturePoint, ...]:
        return tuple(p for p in self.points if p.roi_tag is tag)


def _require_cells(curve: Curve) -> frozenset[Point]:
    if not curve.cells:
        raise EmptyCurveError("cannot extract points from an empty curve")
    return curve.cells


def extreme_points(curve: Curve) -> tuple[FeaturePoint, FeaturePoint]:
    """Westmost and eastmost cells; ties broken toward smaller y.

    A single-cell curve yields two coincident points.
    """
    cells = _require_cells(curve)
    west = min(cells, key=lambda p: (p.x, p.y))
    east = min(cells, key=lambda p: (-p.x, p.y))
    return (
        FeaturePoint(west, FeatureKind.EXTREME_WEST, curve.roi_tag),
        FeaturePoint(east, FeatureKind.EXTREME_EAST, curve.roi_tag),
    )


def tangent_points(curve: Curve) -> tuple[FeaturePoint, FeaturePoint]:
    """Touch points of the horizontal supporting lines from above and below.

    North is the cell with minimum y, south the cell with maximum y; ties
    broken toward smaller x.
    """
    cells = _require_cells(curve)
    north = min(cells, key=lambda p: (p.y, p.x))
    south = min(cells, key=lambda p: (-p.y, p.x))
    return (
        FeaturePoint(north, FeatureKind.TANGENT_NORTH, curve.roi_tag),
        FeaturePoint(south, FeatureKind.TANGENT_SOUTH, curve.roi_tag),
    )


def extract_features(curves: Iterable[Curve]) -> FeatureSet:
    """Four points per curve, merged in fixed ROI order.

    ROIs without a curve contribute no points and are flagged incomplete.
    Curves must carry distinct ROI tags.
    """
    by_tag: dict[RoiTag, Curve] = {}
    for curve in curves:
        if curve.roi_tag in by_tag:
            raise ValueError(f"duplicate curve for ROI {curve.roi_tag.value}")
        by_tag[curve.roi_tag] = curve
    points: list[FeaturePoint] = []
    complete: set[RoiTag] = set()
    for tag in RoiTag:
        curve = by_tag.get(tag)
        if curve is None:
            continue
        west, east = extreme_points(curve)
        north, south = tangent_points(curve)
        points.extend((west, east, north, south))
        complete.add(tag)
    return FeatureSet(points=tuple(points), complete_rois=frozenset(complete))
