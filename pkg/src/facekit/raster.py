"""Pixel-grid primitives: images, binary masks, codecs, and annotation.

Coordinate convention used everywhere in this package: ``x`` is the column
(increasing west to east), ``y`` is the row (increasing north to south),
origin at the top-left corner. Arrays are indexed ``[y, x]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    CorruptDataError,
    MissingFileError,
    OutOfBoundsError,
    UnsupportedFormatError,
)

__all__ = [
    "Pixel",
    "Point",
    "Rect",
    "RgbImage",
    "BinaryMask",
    "Overlay",
    "DEFAULT_MARKER",
    "load_image",
    "save_image",
    "binarize",
    "render_annotated",
]


class Pixel(NamedTuple):
    """One RGB sample; every channel must be in 0..255."""

    r: int
    g: int
    b: int


class Point(NamedTuple):
    x: int
    y: int


DEFAULT_MARKER = Pixel(255, 0, 0)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with inclusive integer cell coverage."""

    x0: int
    y0: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"rectangle must have positive size, got {self}")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError(f"rectangle origin must be non-negative, got {self}")

    @property
    def x1(self) -> int:
        """Exclusive right edge."""
        return self.x0 + self.width

    @property
    def y1(self) -> int:
        """Exclusive bottom edge."""
        return self.y0 + self.height

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, point: Point) -> bool:
        return self.x0 <= point.x < self.x1 and self.y0 <= point.y < self.y1

    def within_bounds(self, width: int, height: int) -> bool:
        return self.x1 <= width and self.y1 <= height

    def intersects(self, other: "Rect") -> bool:
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
        )


@dataclass(frozen=True, eq=False)
class RgbImage:
    """Immutable rectangular raster of RGB pixels.

    ``pixels`` is a read-only ``(height, width, 3)`` uint8 array.
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (height, width, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("channel values must be in 0..255")
            arr = arr.astype(np.uint8)
        else:
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def filled(cls, width: int, height: int, color: Pixel) -> "RgbImage":
        arr = np.empty((height, width, 3), dtype=np.uint8)
        arr[:, :] = color
        return cls(arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def pixel(self, x: int, y: int) -> Pixel:
        r, g, b = self.pixels[y, x]
        return Pixel(int(r), int(g), int(b))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RgbImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-cell White/Black raster aligned to an image.

    ``cells`` is a read-only ``(height, width)`` bool array where True means
    White (the skin-candidate state) and False means Black.
    """

    cells: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.cells)
        if arr.ndim != 2:
            raise ValueError(f"expected (height, width) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("mask must be at least 1x1")
        arr = arr.astype(bool) if arr.dtype != np.bool_ else arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @classmethod
    def filled(cls, width: int, height: int, white: bool) -> "BinaryMask":
        return cls(np.full((height, width), white, dtype=bool))

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def white_count(self) -> int:
        return int(np.count_nonzero(self.cells))

    @property
    def black_count(self) -> int:
        return self.cells.size - self.white_count

    def cell(self, x: int, y: int) -> bool:
        """True when the cell is White."""
        return bool(self.cells[y, x])

    def to_image(self) -> RgbImage:
        """Render White as (255, 255, 255) and Black as (0, 0, 0)."""
        arr = np.where(self.cells[:, :, None], 255, 0).astype(np.uint8)
        return RgbImage(arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.cells.shape == other.cells.shape and bool(
            np.array_equal(self.cells, other.cells)
        )


@dataclass(frozen=True)
class Overlay:
    """Annotation geometry: labeled boxes and labeled marker points."""

    boxes: tuple[tuple[Rect, str], ...] = ()
    points: tuple[tuple[Point, str], ...] = ()

    @classmethod
    def build(
        cls,
        boxes: Iterable[tuple[Rect, str]] = (),
        points: Iterable[tuple[Point, str]] = (),
    ) -> "Overlay":
        return cls(tuple(boxes), tuple(points))


# ---------------------------------------------------------------------------
# Codecs
# ---------------------------------------------------------------------------

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def load_image(path: str | Path) -> RgbImage:
    """Decode a raster file into an :class:`RgbImage`.

    Supported formats: PPM P3 (ASCII) and P6 (binary) with maxval 255, and
    8-bit RGB/grayscale PNG when Pillow is installed (``facekit[png]``).
    Grayscale inputs are promoted to RGB by channel replication.

    Raises:
        MissingFileError: the path does not exist.
        UnsupportedFormatError: the magic number is not a supported format.
        CorruptDataError: the header or payload is truncated or inconsistent.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError as exc:
        raise MissingFileError(f"no such file: {path}") from exc
    if not data:
        raise CorruptDataError(f"empty file: {path}")
    if data.startswith(b"P3"):
        return _decode_ppm_ascii(data, path)
    if data.startswith(b"P6"):
        return _decode_ppm_binary(data, path)
    if data.startswith(_PNG_MAGIC):
        return _decode_png(data, path)
    raise UnsupportedFormatError(f"unrecognized magic number in {path}")


def save_image(image: RgbImage, path: str | Path, fmt: str | None = None) -> None:
    """Encode ``image`` at ``path``; the format round-trips pixel-exactly.

    ``fmt`` may be ``"p6"`` (binary PPM, the default for ``.ppm``), ``"p3"``
    (ASCII PPM), or ``"png"``; when omitted it is inferred from the suffix.
    I/O failures surface as the original ``OSError``.
    """
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower()
        if suffix == ".ppm":
            fmt = "p6"
        elif suffix == ".png":
            fmt = "png"
        else:
            raise UnsupportedFormatError(
                f"cannot infer output format from suffix {suffix!r}; pass fmt="
            )
    fmt = fmt.lower()
    if fmt == "p6":
        header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
        path.write_bytes(header + image.pixels.tobytes())
    elif fmt == "p3":
        lines = [f"P3\n{image.width} {image.height}\n255"]
        flat = image.pixels.reshape(-1, 3)
        lines.extend(f"{r} {g} {b}" for r, g, b in flat)
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    elif fmt == "png":
        _encode_png(image, path)
    else:
        raise UnsupportedFormatError(f"unknown output format {fmt!r}")


def _ppm_header_tokens(data: bytes, path: Path) -> tuple[list[int], int]:
    """Read the three numeric header tokens after the magic.

    Returns the values and the offset just past the single whitespace byte
    that terminates the header. PPM comments (``#`` to end of line) are
    allowed between tokens.
    """
    pos = 2  # past the magic
    values: list[int] = []
    while len(values) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token:
            raise CorruptDataError(f"truncated header in {path}")
        try:
            values.append(int(token))
        except ValueError as exc:
            raise CorruptDataError(f"non-numeric header token {token!r} in {path}") from exc
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise CorruptDataError(f"missing header terminator in {path}")
    return values, pos + 1


def _check_ppm_dims(width: int, height: int, maxval: int, path: Path) -> None:
    if width < 1 or height < 1:
        raise CorruptDataError(f"invalid dimensions {width}x{height} in {path}")
    if maxval != 255:
        raise UnsupportedFormatError(f"only maxval 255 is supported, got {maxval} in {path}")


def _decode_ppm_binary(data: bytes, path: Path) -> RgbImage:
    (width, height, maxval), offset = _ppm_header_tokens(data, path)
    _check_ppm_dims(width, height, maxval, path)
    expected = width * height * 3
    payload = data[offset:]
    if len(payload) < expected:
        raise CorruptDataError(f"truncated pixel data in {path}")
    if len(payload) > expected:
        raise CorruptDataError(f"trailing bytes after pixel data in {path}")
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return RgbImage(arr)


def _decode_ppm_ascii(data: bytes, path: Path) -> RgbImage:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise CorruptDataError(f"non-ASCII bytes in P3 file {path}") from exc
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    tokens = stripped.split()
    if len(tokens) < 4:
        raise CorruptDataError(f"truncated header in {path}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
        samples = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise CorruptDataError(f"non-numeric token in {path}") from exc
    _check_ppm_dims(width, height, maxval, path)
    expected = width * height * 3
    if len(samples) != expected:
        raise CorruptDataError(
            f"expected {expected} samples, found {len(samples)} in {path}"
        )
    if samples and (min(samples) < 0 or max(samples) > maxval):
        raise CorruptDataError(f"sample out of range in {path}")
    arr = np.array(samples, dtype=np.uint8).reshape(height, width, 3)
    return RgbImage(arr)


def _decode_png(data: bytes, path: Path) -> RgbImage:
    try:
        from PIL import Image as PILImage
    except ImportError as exc:  # pragma: no cover - depends on install extras
        raise UnsupportedFormatError(
            "PNG support requires the optional Pillow dependency (facekit[png])"
        ) from exc
    import io

    try:
        with PILImage.open(io.BytesIO(data)) as img:
            img.load()
            mode = img.mode
            if mode == "L":
                gray = np.asarray(img, dtype=np.uint8)
                arr = np.repeat(gray[:, :, None], 3, axis=2)
            elif mode == "RGB":
                arr = np.asarray(img, dtype=np.uint8)
            else:
                raise UnsupportedFormatError(
                    f"only 8-bit RGB/grayscale PNG is supported, got mode {mode} in {path}"
                )
    except UnsupportedFormatError:
        raise
    except Exception as exc:
        raise CorruptDataError(f"undecodable PNG data in {path}") from exc
    return RgbImage(arr)


def _encode_png(image: RgbImage, path: Path) -> None:
    try:
        from PIL import Image as PILImage
    except ImportError as exc:  # pragma: no cover - depends on install extras
        raise UnsupportedFormatError(
            "PNG support requires the optional Pillow dependency (facekit[png])"
        ) from exc
    PILImage.fromarray(np.asarray(image.pixels), mode="RGB").save(path, format="PNG")


# ---------------------------------------------------------------------------
# Binarization and annotation
# ---------------------------------------------------------------------------


def binarize(image: RgbImage, threshold: int) -> BinaryMask:
    """Threshold on mean intensity: White iff (r + g + b) / 3 >= threshold.

    The comparison is done as ``r + g + b >= 3 * threshold`` in integers, so
    boundary cases are exact.
    """
    if not 0 <= threshold <= 255:
        raise ValueError(f"threshold must be in 0..255, got {threshold}")
    sums = image.pixels.astype(np.int32).sum(axis=2)
    return BinaryMask(sums >= 3 * threshold)


def render_annotated(
    image: RgbImage, overlay: Overlay, marker: Pixel = DEFAULT_MARKER
) -> RgbImage:
    """Copy ``image`` with 1-pixel box outlines and 3x3 point markers drawn.

    Marker blocks are clipped at the image border; boxes must lie fully
    inside it. The input image is never mutated.

    Raises:
        OutOfBoundsError: an overlay box or point exceeds the image bounds.
    """
    w, h = image.width, image.height
    for rect, label in overlay.boxes:
        if not rect.within_bounds(w, h):
            raise OutOfBoundsError(f"box {label!r} {rect} exceeds {w}x{h} image")
    for point, label in overlay.points:
        if not (0 <= point.x < w and 0 <= point.y < h):
            raise OutOfBoundsError(f"point {label!r} {point} exceeds {w}x{h} image")

    arr = image.pixels.copy()
    for rect, _ in overlay.boxes:
        arr[rect.y0, rect.x0 : rect.x1] = marker
        arr[rect.y1 - 1, rect.x0 : rect.x1] = marker
        arr[rect.y0 : rect.y1, rect.x0] = marker
        arr[rect.y0 : rect.y1, rect.x1 - 1] = marker
    for point, _ in overlay.points:
        arr[
            max(0, point.y - 1) : min(h, point.y + 2),
            max(0, point.x - 1) : min(w, point.x + 2),
        ] = marker
    return RgbImage(arr)
