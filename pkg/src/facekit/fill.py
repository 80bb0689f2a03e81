"""Queue-based scanline flood fill and non-skin curve extraction.

The fill recolors the 4-connected component of the start cell span by
span: dequeue a cell, extend it west and east as far as the target color
runs, recolor the whole span, then enqueue the target-colored cells
directly above and below the span. Only north/south neighbors of spans
are ever enqueued, so reachability is exactly 4-connected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import EmptyCurveError, OutOfBoundsError
from .raster import BinaryMask, Point
from .roi import RoiSet, RoiTag

__all__ = [
    "Grid",
    "Curve",
    "FillStats",
    "scanline_flood_fill",
    "extract_curves",
]


@dataclass
class Grid:
    """Rectangular grid of small-integer color labels, row-major."""

    width: int
    height: int
    cells: list[int]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must be at least 1x1")
        if len(self.cells) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} cells, got {len(self.cells)}"
            )

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "Grid":
        height = len(rows)
        width = len(rows[0]) if rows else 0
        flat = [c for row in rows for c in row]
        return cls(width, height, flat)

    def color_at(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]


@dataclass
class FillStats:
    """Instrumentation hook: counts queue insertions across fill calls."""

    enqueued: int = 0


@dataclass(frozen=True)
class Curve:
    """One 4-connected blob of non-skin cells inside a ROI rectangle.

    Cells are face-local coordinates. Construction verifies the blob is
    non-empty and 4-connected.
    """

    roi_tag: RoiTag
    cells: frozenset[Point]

    def __post_init__(self) -> None:
        if not self.cells:
            raise EmptyCurveError("a curve needs at least one cell")
        object.__setattr__(
            self, "cells", frozenset(Point(x, y) for x, y in self.cells)
        )
        if not _is_four_connected(self.cells):
            raise ValueError("curve cells must form one 4-connected component")

    @property
    def pixel_count(self) -> int:
        return len(self.cells)


def _is_four_connected(cells: frozenset[Point]) -> bool:
    seen = {next(iter(cells))}
    frontier = deque(seen)
    while frontier:
        x, y = frontier.popleft()
        for nb in (Point(x - 1, y), Point(x + 1, y), Point(x, y - 1), Point(x, y + 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return len(seen) == len(cells)


def _fill_spans(
    cells: list[int],
    width: int,
    height: int,
    start_x: int,
    start_y: int,
    target: int,
    replacement: int,
) -> int:
    """Run the span fill in place on a flat buffer; returns the enqueue count.

    Assumes bounds were checked and target != replacement. If the start cell
    does not hold the target color nothing is enqueued or changed.
    """
    if cells[start_y * width + start_x] != target:
        return 0
    queue: deque[tuple[int, int]] = deque()
    queue.append((start_x, start_y))
    enqueued = 1
    while queue:
        x, y = queue.popleft()
        row = y * width
        if cells[row + x] != target:
            continue  # recolored by an earlier span while waiting in the queue
        west = x
        while west > 0 and cells[row + west - 1] == target:
            west -= 1
        east = x
        while east < width - 1 and cells[row + east + 1] == target:
            east += 1
        for cx in range(west, east + 1):
            cells[row + cx] = replacement
        north = row - width
        south = row + width
        for cx in range(west, east + 1):
            if y > 0 and cells[north + cx] == target:
                queue.append((cx, y - 1))
                enqueued += 1
            if y < height - 1 and cells[south + cx] == target:
                queue.append((cx, y + 1))
                enqueued += 1
    return enqueued


def scanline_flood_fill(
    grid: Grid,
    start: Point | tuple[int, int],
    target: int,
    replacement: int,
    stats: FillStats | None = None,
) -> Grid:
    """Recolor the 4-connected target-colored component containing ``start``.

    Returns a new grid; the input is never mutated. Two cases return the
    input unchanged: a start cell that is not target-colored, and
    ``target == replacement`` (a no-op fill; running the span loop in that
    case would recolor cells to their own color and never terminate).

    Raises:
        OutOfBoundsError: ``start`` is outside the grid.
    """
    x, y = start
    if not (0 <= x < grid.width and 0 <= y < grid.height):
        raise OutOfBoundsError(f"start {(x, y)} outside {grid.width}x{grid.height} grid")
    if target == replacement:
        return grid
    if grid.cells[y * grid.width + x] != target:
        return grid
    cells = list(grid.cells)
    enqueued = _fill_spans(cells, grid.width, grid.height, x, y, target, replacement)
    if stats is not None:
        stats.enqueued += enqueued
    return Grid(grid.width, grid.height, cells)


_SKIN = 1
_NON_SKIN = 0
_FIRST_VISITED_LABEL = 2


def extract_curves(face_mask: BinaryMask, rois: RoiSet) -> list[Curve]:
    """Largest non-skin blob per ROI, found by repeated span fills.

    Each ROI rectangle is scanned independently with the rectangle treated
    as the grid boundary, so a blob crossing the ROI edge contributes only
    its inside part. Every unvisited Black cell seeds a fill with a fresh
    visited label; the label with the most cells wins. Ties go to the
    component discovered first in row-major order, i.e. the one whose
    topmost cell is highest, then leftmost. ROIs with no Black cell
    contribute no curve.

    Raises:
        OutOfBoundsError: a ROI rectangle does not fit inside the mask.
    """
    curves: list[Curve] = []
    for tag, rect in rois.items():
        if not rect.within_bounds(face_mask.width, face_mask.height):
            raise OutOfBoundsError(
                f"ROI {tag.value} {rect} exceeds {face_mask.width}x{face_mask.height} mask"
            )
        sub = face_mask.cells[rect.y0 : rect.y1, rect.x0 : rect.x1]
        cells = [(_SKIN if white else _NON_SKIN) for white in sub.ravel().tolist()]
        w, h = rect.width, rect.height
        next_label = _FIRST_VISITED_LABEL
        for idx in range(w * h):
            if cells[idx] == _NON_SKIN:
                _fill_spans(cells, w, h, idx % w, idx // w, _NON_SKIN, next_label)
                next_label += 1
        if next_label == _FIRST_VISITED_LABEL:
            continue
        counts = [0] * (next_label - _FIRST_VISITED_LABEL)
        for color in cells:
            if color >= _FIRST_VISITED_LABEL:
                counts[color - _FIRST_VISITED_LABEL] += 1
        # max() keeps the earliest label on ties: discovery order is the
        # row-major order of each component's topmost-leftmost cell.
        best = max(range(len(counts)), key=lambda i: counts[i])
        winner = best + _FIRST_VISITED_LABEL
        points = frozenset(
            Point(rect.x0 + idx % w, rect.y0 + idx // w)
            for idx, color in enumerate(cells)
            if color == winner
        )
        curves.append(Curve(roi_tag=tag, cells=points))
    return curves
