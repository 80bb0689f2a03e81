"""Deterministic synthetic face and non-face images for pipeline testing.

Faces are a bright rectangle on a dark background with dark filled
ellipses placed inside the default eye/lip regions, so the whole pipeline
has analytically known answers: the gate must accept the rectangle and
each ellipse's extreme cells sit exactly at center +/- semi-axis. All
randomness flows from explicit integer seeds; identical seeds give
byte-identical images on every platform.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import FacekitError, SpecInfeasibleError
from .metrics import GroundTruthLabel, write_manifest
from .raster import Pixel, Point, Rect, RgbImage, save_image
from .roi import RoiFractions, RoiTag, locate_rois
from .skin import SkinConfig

__all__ = [
    "GENERATOR_THRESHOLD",
    "TONE_MARGIN",
    "TONE_JITTER",
    "EllipseSpec",
    "SyntheticFaceSpec",
    "NonFaceKind",
    "default_face_spec",
    "random_face_spec",
    "face_specs",
    "generate_face",
    "generate_nonface",
    "generate_corpus",
]

# The generator's declared classification threshold and the margin its
# bright/dark tones keep on either side of it. Per-channel jitter is
# bounded well inside the margin so no rendered pixel ever crosses.
GENERATOR_THRESHOLD = 100
TONE_MARGIN = 40
TONE_JITTER = 10

_BRIGHT_MIN_MEAN = GENERATOR_THRESHOLD + TONE_MARGIN
_DARK_MAX_MEAN = GENERATOR_THRESHOLD - TONE_MARGIN

# Largest bright component allowed in a noise image; matches the default
# speckle filter so the region search finds nothing.
_NOISE_COMPONENT_LIMIT = SkinConfig().min_region_pixels
_NOISE_SIZE = 64
_NOISE_BRIGHT_PROBABILITY = 0.28

_ALL_ROIS = frozenset((RoiTag.LEFT_EYE, RoiTag.RIGHT_EYE, RoiTag.LIPS))


@dataclass(frozen=True)
class EllipseSpec:
    """Filled ellipse in face-local coordinates: cells (x, y) with
    (x-cx)^2*b^2 + (y-cy)^2*a^2 <= a^2*b^2."""

    center: Point
    semi_x: int
    semi_y: int

    def __post_init__(self) -> None:
        if self.semi_x < 1 or self.semi_y < 1:
            raise SpecInfeasibleError("ellipse semi-axes must be >= 1")
        object.__setattr__(self, "center", Point(*self.center))


def _mean_bright(tone: Pixel) -> bool:
    return sum(tone) >= 3 * _BRIGHT_MIN_MEAN


def _mean_dark(tone: Pixel) -> bool:
    return sum(tone) <= 3 * _DARK_MAX_MEAN


@dataclass(frozen=True)
class SyntheticFaceSpec:
    """Full recipe for one synthetic face image.

    Construction fails with :class:`SpecInfeasibleError` when the face box
    cannot pass the size/ratio gate, a tone violates the brightness margin,
    or an ellipse does not fit strictly inside its default ROI rectangle.
    """

    image_width: int
    image_height: int
    face: Rect
    skin_tone: Pixel
    feature_tone: Pixel
    background_tone: Pixel
    left_eye: EllipseSpec
    right_eye: EllipseSpec
    lips: EllipseSpec
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise SpecInfeasibleError("seed must be an unsigned 64-bit integer")
        if not self.face.within_bounds(self.image_width, self.image_height):
            raise SpecInfeasibleError(
                f"face {self.face} exceeds {self.image_width}x{self.image_height} image"
            )
        w, h = self.face.width, self.face.height
        if w < 50 or h < 50 or not w <= h <= 2 * w:
            raise SpecInfeasibleError(f"face box {w}x{h} cannot pass the size/ratio gate")
        for name, tone in (("skin", self.skin_tone),):
            if not all(0 <= c <= 255 for c in tone) or not _mean_bright(tone):
                raise SpecInfeasibleError(
                    f"{name} tone {tone} must average >= {_BRIGHT_MIN_MEAN}"
                )
        for name, tone in (
            ("feature", self.feature_tone),
            ("background", self.background_tone),
        ):
            if not all(0 <= c <= 255 for c in tone) or not _mean_dark(tone):
                raise SpecInfeasibleError(
                    f"{name} tone {tone} must average <= {_DARK_MAX_MEAN}"
                )
        rois = locate_rois(w, h, RoiFractions())
        for tag, ellipse in self.ellipses():
            rect = rois.get(tag)
            cx, cy = ellipse.center
            a, b = ellipse.semi_x, ellipse.semi_y
            inside = (
                rect.x0 + 1 <= cx - a
                and cx + a <= rect.x1 - 2
                and rect.y0 + 1 <= cy - b
                and cy + b <= rect.y1 - 2
            )
            if not inside:
                raise SpecInfeasibleError(
                    f"{tag.value} ellipse {ellipse} is not strictly inside ROI {rect}"
                )

    def ellipses(self) -> tuple[tuple[RoiTag, EllipseSpec], ...]:
        return (
            (RoiTag.LEFT_EYE, self.left_eye),
            (RoiTag.RIGHT_EYE, self.right_eye),
            (RoiTag.LIPS, self.lips),
        )


class NonFaceKind(enum.Enum):
    NOISE = "noise"
    TOO_SMALL_BLOB = "too_small_blob"
    WRONG_RATIO_BLOB = "wrong_ratio_blob"


def default_face_spec(seed: int = 0) -> SyntheticFaceSpec:
    """Canonical 160x200 image with a 100x120 face at (30, 40)."""
    return SyntheticFaceSpec(
        image_width=160,
        image_height=200,
        face=Rect(30, 40, 100, 120),
        skin_tone=Pixel(205, 170, 150),
        feature_tone=Pixel(40, 30, 30),
        background_tone=Pixel(20, 26, 32),
        left_eye=EllipseSpec(Point(29, 41), 12, 10),
        right_eye=EllipseSpec(Point(74, 41), 12, 10),
        lips=EllipseSpec(Point(49, 95), 18, 10),
        seed=seed,
    )


def random_face_spec(seed: int) -> SyntheticFaceSpec:
    """Derive a feasible face spec from a single integer seed."""
    rng = random.Random(seed)
    face_w = rng.randint(60, 110)
    face_h = rng.randint(face_w, 2 * face_w)
    left, top = rng.randint(4, 20), rng.randint(4, 20)
    right, bottom = rng.randint(4, 20), rng.randint(4, 20)

    def bright() -> Pixel:
        return Pixel(rng.randint(150, 230), rng.randint(150, 230), rng.randint(150, 230))

    def dark() -> Pixel:
        return Pixel(rng.randint(0, 55), rng.randint(0, 55), rng.randint(0, 55))

    skin, feature, background = bright(), dark(), dark()
    rois = locate_rois(face_w, face_h, RoiFractions())
    ellipses = {}
    for tag, rect in rois.items():
        cx = rect.x0 + rect.width // 2
        cy = rect.y0 + rect.height // 2
        a_max = min(cx - (rect.x0 + 1), (rect.x1 - 2) - cx)
        b_max = min(cy - (rect.y0 + 1), (rect.y1 - 2) - cy)
        a = rng.randint(max(1, (2 * a_max) // 3), a_max)
        b = rng.randint(max(1, (2 * b_max) // 3), b_max)
        ellipses[tag] = EllipseSpec(Point(cx, cy), a, b)
    return SyntheticFaceSpec(
        image_width=left + face_w + right,
        image_height=top + face_h + bottom,
        face=Rect(left, top, face_w, face_h),
        skin_tone=skin,
        feature_tone=feature,
        background_tone=background,
        left_eye=ellipses[RoiTag.LEFT_EYE],
        right_eye=ellipses[RoiTag.RIGHT_EYE],
        lips=ellipses[RoiTag.LIPS],
        seed=rng.getrandbits(63),
    )


def _corpus_seeds(seed: int, faces: int, nonfaces: int) -> tuple[list[int], list[int]]:
    base = random.Random(seed)
    face_seeds = [base.getrandbits(63) for _ in range(faces)]
    nonface_seeds = [base.getrandbits(63) for _ in range(nonfaces)]
    return face_seeds, nonface_seeds


def face_specs(seed: int, count: int) -> list[SyntheticFaceSpec]:
    """The face specs a corpus run with this seed would generate."""
    face_seeds, _ = _corpus_seeds(seed, count, 0)
    return [random_face_spec(s) for s in face_seeds]


def _paint_ellipse(arr: np.ndarray, cx: int, cy: int, a: int, b: int, tone: Pixel) -> None:
    dy = (np.arange(cy - b, cy + b + 1) - cy)[:, None]
    dx = (np.arange(cx - a, cx + a + 1) - cx)[None, :]
    inside = dx * dx * (b * b) + dy * dy * (a * a) <= a * a * b * b
    region = arr[cy - b : cy + b + 1, cx - a : cx + a + 1]
    region[inside] = tone


def _jitter(arr: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    noise = rng.integers(-TONE_JITTER, TONE_JITTER + 1, size=arr.shape, dtype=np.int16)
    return np.clip(arr.astype(np.int16) + noise, 0, 255).astype(np.uint8)


def generate_face(
    spec: SyntheticFaceSpec, image_id: str = "synthetic-face"
) -> tuple[RgbImage, GroundTruthLabel]:
    """Render the spec; the label expects a face with all three ROIs."""
    arr = np.empty((spec.image_height, spec.image_width, 3), dtype=np.uint8)
    arr[:, :] = spec.background_tone
    face = spec.face
    arr[face.y0 : face.y1, face.x0 : face.x1] = spec.skin_tone
    for _, ellipse in spec.ellipses():
        _paint_ellipse(
            arr,
            face.x0 + ellipse.center.x,
            face.y0 + ellipse.center.y,
            ellipse.semi_x,
            ellipse.semi_y,
            spec.feature_tone,
        )
    arr = _jitter(arr, np.random.default_rng(spec.seed))
    label = GroundTruthLabel(image_id=image_id, is_face=True, expected_rois=_ALL_ROIS)
    return RgbImage(arr), label


def _bright_field(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.integers(150, 231, size=shape, dtype=np.int16).astype(np.uint8)


def _dark_field(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.integers(0, 56, size=shape, dtype=np.int16).astype(np.uint8)


def _generate_noise(seed: int) -> RgbImage:
    base = random.Random(seed)
    for _ in range(1000):
        rng = np.random.default_rng(base.getrandbits(63))
        bright = rng.random((_NOISE_SIZE, _NOISE_SIZE)) < _NOISE_BRIGHT_PROBABILITY
        labels, count = ndimage.label(bright)
        if count and int(np.bincount(labels.ravel())[1:].max()) >= _NOISE_COMPONENT_LIMIT:
            continue  # resample: a speckle grew big enough to survive filtering
        shape = (_NOISE_SIZE, _NOISE_SIZE, 3)
        arr = np.where(bright[:, :, None], _bright_field(rng, shape), _dark_field(rng, shape))
        return RgbImage(arr)
    raise FacekitError("noise resampling failed to converge")  # pragma: no cover


def _generate_blob(seed: int, kind: NonFaceKind) -> RgbImage:
    rng = random.Random(seed)
    if kind is NonFaceKind.TOO_SMALL_BLOB:
        blob_w = rng.randint(8, 49)
        blob_h = rng.randint(8, 49)
    else:  # WRONG_RATIO_BLOB: tall enough to break the height <= 2*width bound
        blob_w = rng.randint(50, 70)
        blob_h = 2 * blob_w + rng.randint(1, 20)
    left, top = rng.randint(4, 20), rng.randint(4, 20)
    width = blob_w + left + rng.randint(4, 20)
    height = blob_h + top + rng.randint(4, 20)
    bright = Pixel(rng.randint(150, 230), rng.randint(150, 230), rng.randint(150, 230))
    dark = Pixel(rng.randint(0, 55), rng.randint(0, 55), rng.randint(0, 55))
    arr = np.empty((height, width, 3), dtype=np.uint8)
    arr[:, :] = dark
    arr[top : top + blob_h, left : left + blob_w] = bright
    arr = _jitter(arr, np.random.default_rng(rng.getrandbits(63)))
    return RgbImage(arr)


def generate_nonface(
    kind: NonFaceKind, seed: int, image_id: str = "synthetic-nonface"
) -> tuple[RgbImage, GroundTruthLabel]:
    """Render an image the pipeline must reject.

    NOISE has no bright component big enough to survive the speckle filter
    (enforced by resampling); TOO_SMALL_BLOB fails the 50-pixel minimum;
    WRONG_RATIO_BLOB is taller than twice its width.
    """
    if kind is NonFaceKind.NOISE:
        image = _generate_noise(seed)
    else:
        image = _generate_blob(seed, kind)
    return image, GroundTruthLabel(image_id=image_id, is_face=False)


def generate_corpus(out_dir: str | Path, faces: int, nonfaces: int, seed: int) -> Path:
    """Write a face/non-face corpus plus its ground-truth manifest.

    Returns the manifest path. Images are binary PPM; non-face kinds cycle
    in a fixed order so every kind appears once at least every three images.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    face_seeds, nonface_seeds = _corpus_seeds(seed, faces, nonfaces)
    labels: list[GroundTruthLabel] = []
    for i, face_seed in enumerate(face_seeds):
        name = f"face_{i:04d}.ppm"
        image, label = generate_face(random_face_spec(face_seed), image_id=name)
        save_image(image, out_dir / name)
        labels.append(label)
    kinds = (NonFaceKind.NOISE, NonFaceKind.TOO_SMALL_BLOB, NonFaceKind.WRONG_RATIO_BLOB)
    for i, nonface_seed in enumerate(nonface_seeds):
        kind = kinds[i % len(kinds)]
        name = f"nonface_{i:04d}_{kind.value}.ppm"
        image, label = generate_nonface(kind, nonface_seed, image_id=name)
        save_image(image, out_dir / name)
        labels.append(label)
    manifest_path = out_dir / "manifest.csv"
    write_manifest(manifest_path, labels)
    return manifest_path
