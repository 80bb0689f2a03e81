"""End-to-end pipeline: classify skin, gate the face, locate ROIs,
extract curves and feature points, with structured per-stage rejection."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from .features import FeatureSet, extract_features
from .fill import Curve, extract_curves
from .raster import Pixel, RgbImage
from .roi import RoiFractions, RoiSet, RoiTag, locate_rois
from .skin import (
    Connectivity,
    FaceBox,
    RejectReason,
    SkinConfig,
    classify_skin,
    crop_face,
    face_gate,
    largest_skin_region,
)

__all__ = ["RunConfig", "PipelineResult", "run_pipeline"]


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; built by the CLI from defaults, the config
    file, and command-line flags, in that precedence order."""

    threshold: int = 100
    connectivity: Connectivity = Connectivity.FOUR
    min_region_pixels: int = 25
    fractions: RoiFractions = field(default_factory=RoiFractions)
    output_format: str = "text"
    marker_color: Pixel = Pixel(255, 0, 0)
    output_dir: Path | None = None
    include_timing: bool = True

    def __post_init__(self) -> None:
        if self.output_format not in ("text", "json"):
            raise ValueError(f"output_format must be text or json, got {self.output_format!r}")
        if not all(0 <= c <= 255 for c in self.marker_color):
            raise ValueError(f"marker color {self.marker_color} out of range")
        object.__setattr__(self, "marker_color", Pixel(*self.marker_color))
        # delegate range checks
        self.skin_config()

    def skin_config(self) -> SkinConfig:
        return SkinConfig(
            threshold=self.threshold,
            connectivity=self.connectivity,
            min_region_pixels=self.min_region_pixels,
        )


@dataclass(frozen=True)
class PipelineResult:
    """Outcome of one image: either a rejection reason or the full chain.

    ``face_box`` is None only for NO_SKIN_REGION rejections. ``rejection``
    is set exactly when no face was accepted.
    """

    image_id: str
    face_box: FaceBox | None
    rejection: RejectReason | None
    rois: RoiSet | None
    curves: tuple[Curve, ...]
    features: FeatureSet | None
    timing_ms: float

    def __post_init__(self) -> None:
        accepted = (
            self.face_box is not None
            and self.face_box.verdict is not None
            and self.face_box.verdict.is_face
        )
        if accepted == (self.rejection is not None):
            raise ValueError("rejection must be present exactly when no face was accepted")

    @property
    def face_detected(self) -> bool:
        return self.rejection is None

    def rois_found(self) -> frozenset[RoiTag]:
        """ROIs where the whole chain succeeded: rectangle, curve, 4 points."""
        if self.features is None:
            return frozenset()
        return self.features.complete_rois

    def to_json_dict(self, include_timing: bool = True) -> dict:
        """Schema-ordered dict for deterministic JSON output."""
        face = None
        if self.face_box is not None:
            box = self.face_box
            verdict = None
            if box.verdict is not None:
                verdict = "face" if box.verdict.is_face else "not_face"
            face = {
                "x0": box.x0,
                "y0": box.y0,
                "width": box.width,
                "height": box.height,
                "pixel_count": box.pixel_count,
                "verdict": verdict,
            }
        rois = None
        if self.rois is not None:
            rois = {
                tag.value: {
                    "x0": rect.x0,
                    "y0": rect.y0,
                    "width": rect.width,
                    "height": rect.height,
                }
                for tag, rect in self.rois.items()
            }
        curves = None
        if self.rois is not None:
            by_tag = {curve.roi_tag: curve for curve in self.curves}
            curves = {
                tag.value: (
                    {"pixel_count": by_tag[tag].pixel_count} if tag in by_tag else None
                )
                for tag in RoiTag
            }
        features = None
        if self.features is not None:
            features = [
                {
                    "roi": point.roi_tag.value,
                    "kind": point.kind.value,
                    "x": point.position.x,
                    "y": point.position.y,
                }
                for point in self.features.points
            ]
        out = {
            "image_id": self.image_id,
            "face": face,
            "rejection": None if self.rejection is None else self.rejection.value,
            "rois": rois,
            "curves": curves,
            "features": features,
            "complete_rois": (
                None
                if self.features is None
                else sorted(tag.value for tag in self.features.complete_rois)
            ),
        }
        if include_timing:
            out["timing_ms"] = self.timing_ms
        return out


def run_pipeline(image: RgbImage, config: RunConfig, image_id: str = "") -> PipelineResult:
    """Run the full detection chain, short-circuiting at the first rejection.

    Stage failures become structured rejection reasons, never exceptions.
    """
    start = time.perf_counter()
    skin_config = config.skin_config()

    def elapsed() -> float:
        return (time.perf_counter() - start) * 1000.0

    mask = classify_skin(image, skin_config)
    box = largest_skin_region(mask, skin_config)
    if box is None:
        return PipelineResult(
            image_id=image_id,
            face_box=None,
            rejection=RejectReason.NO_SKIN_REGION,
            rois=None,
            curves=(),
            features=None,
            timing_ms=elapsed(),
        )
    box = face_gate(box)
    assert box.verdict is not None
    if not box.verdict.is_face:
        return PipelineResult(
            image_id=image_id,
            face_box=box,
            rejection=box.verdict.reason,
            rois=None,
            curves=(),
            features=None,
            timing_ms=elapsed(),
        )
    face_mask = crop_face(mask, box)
    rois = locate_rois(box.width, box.height, config.fractions)
    curves = tuple(extract_curves(face_mask, rois))
    features = extract_features(curves)
    return PipelineResult(
        image_id=image_id,
        face_box=box,
        rejection=None,
        rois=rois,
        curves=curves,
        features=features,
        timing_ms=elapsed(),
    )
