"""Brute-force reference implementations the real code is checked against.

Everything here is deliberately naive: plain BFS over explicit cell sets,
no spans, no numpy labeling, so the oracles share no code path with the
package.
"""

from __future__ import annotations

from collections import deque


def bfs_flood_fill(
    cells: list[int],
    width: int,
    height: int,
    start: tuple[int, int],
    target: int,
    replacement: int,
) -> list[int]:
    """Cell-at-a-time 4-connected flood fill on a flat row-major buffer."""
    out = list(cells)
    x0, y0 = start
    if out[y0 * width + x0] != target or target == replacement:
        return out
    queue = deque([(x0, y0)])
    out[y0 * width + x0] = replacement
    while queue:
        x, y = queue.popleft()
        for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
            if 0 <= nx < width and 0 <= ny < height and out[ny * width + nx] == target:
                out[ny * width + nx] = replacement
                queue.append((nx, ny))
    return out


def bfs_components(
    white: set[tuple[int, int]], connectivity: int = 4
) -> list[set[tuple[int, int]]]:
    """Connected components of a cell set, in discovery order of a sorted scan."""
    if connectivity == 4:
        offsets = ((-1, 0), (1, 0), (0, -1), (0, 1))
    elif connectivity == 8:
        offsets = tuple(
            (dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0)
        )
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    remaining = set(white)
    components: list[set[tuple[int, int]]] = []
    for cell in sorted(white, key=lambda c: (c[1], c[0])):
        if cell not in remaining:
            continue
        component = {cell}
        remaining.discard(cell)
        queue = deque([cell])
        while queue:
            x, y = queue.popleft()
            for dx, dy in offsets:
                neighbor = (x + dx, y + dy)
                if neighbor in remaining:
                    remaining.discard(neighbor)
                    component.add(neighbor)
                    queue.append(neighbor)
        components.append(component)
    return components


def component_bbox(component: set[tuple[int, int]]) -> tuple[int, int, int, int]:
    """(x0, y0, width, height) of a cell set."""
    xs = [x for x, _ in component]
    ys = [y for _, y in component]
    return min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1


def largest_component_box(
    white: set[tuple[int, int]], min_pixels: int, connectivity: int = 4
) -> tuple[int, int, int, int, int] | None:
    """(x0, y0, w, h, size) of the winner under the package's selection rule:
    biggest surviving component, ties to smaller box y0 then x0."""
    survivors = [
        c for c in bfs_components(white, connectivity) if len(c) >= min_pixels
    ]
    if not survivors:
        return None
    best_size = max(len(c) for c in survivors)
    tied = [c for c in survivors if len(c) == best_size]
    boxes = [component_bbox(c) for c in tied]
    x0, y0, w, h = min(boxes, key=lambda b: (b[1], b[0]))
    return x0, y0, w, h, best_size


def rasterize_ellipse(cx: int, cy: int, a: int, b: int) -> set[tuple[int, int]]:
    """All integer cells with (x-cx)^2*b^2 + (y-cy)^2*a^2 <= a^2*b^2."""
    cells = set()
    for y in range(cy - b, cy + b + 1):
        for x in range(cx - a, cx + a + 1):
            if (x - cx) ** 2 * b * b + (y - cy) ** 2 * a * a <= a * a * b * b:
                cells.add((x, y))
    return cells
