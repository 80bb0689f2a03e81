"""Detection-accuracy scoring over labeled corpora.

Five percentages are reported. With N facial and M non-facial images:

    face accuracy      = 100 * (facial images detected)        / N
    non-face accuracy  = 100 * (non-facial images rejected)    / M
    per-ROI accuracy   = 100 * (facial images with the ROI found) / N

A ROI counts as found only when the ground truth expects it AND the
detection record reports it; with all-expected labels this reduces to the
plain found/N rate. Zero denominators make the metric undefined (None),
never 0 or 100.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DuplicateRecordError,
    ManifestError,
    MissingRecordError,
    UnmatchedRecordError,
)
from .roi import RoiTag

__all__ = [
    "GroundTruthLabel",
    "DetectionRecord",
    "FaceRecognitionScores",
    "RoiDetectionScores",
    "AccuracyReport",
    "ManifestEntry",
    "score_face_recognition",
    "score_roi_detection",
    "aggregate_report",
    "evaluate_records",
    "read_manifest",
    "write_manifest",
]


@dataclass(frozen=True)
class GroundTruthLabel:
    image_id: str
    is_face: bool
    expected_rois: frozenset[RoiTag] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "expected_rois", frozenset(self.expected_rois))
        if not self.is_face and self.expected_rois:
            raise ValueError(f"non-face image {self.image_id!r} cannot expect ROIs")


@dataclass(frozen=True)
class DetectionRecord:
    """Pipeline outcome for one image.

    A ROI belongs in ``rois_found`` only when the whole chain succeeded:
    rectangle located, curve extracted, and all four feature points present.
    """

    image_id: str
    face_detected: bool
    rois_found: frozenset[RoiTag] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rois_found", frozenset(self.rois_found))
        if not self.face_detected and self.rois_found:
            raise ValueError(
                f"record {self.image_id!r} reports ROIs without a detected face"
            )


@dataclass(frozen=True)
class FaceRecognitionScores:
    n: int
    m: int
    i_f: int
    i_nf: int
    a_f: float | None
    a_nf: float | None


@dataclass(frozen=True)
class RoiDetectionScores:
    n: int
    roi_lip: int
    roi_l_eye: int
    roi_r_eye: int
    a_lip: float | None
    a_l_eye: float | None
    a_r_eye: float | None


@dataclass(frozen=True)
class AccuracyReport:
    n: int
    m: int
    i_f: int
    i_nf: int
    roi_lip: int
    roi_l_eye: int
    roi_r_eye: int
    a_f: float | None
    a_nf: float | None
    a_lip: float | None
    a_l_eye: float | None
    a_r_eye: float | None

    def __post_init__(self) -> None:
        for count, bound in (
            (self.i_f, self.n),
            (self.i_nf, self.m),
            (self.roi_lip, self.n),
            (self.roi_l_eye, self.n),
            (self.roi_r_eye, self.n),
        ):
            if not 0 <= count <= bound:
                raise ValueError(f"count {count} outside [0, {bound}]")
        for value in (self.a_f, self.a_nf, self.a_lip, self.a_l_eye, self.a_r_eye):
            if value is not None and not 0.0 <= value <= 100.0:
                raise ValueError(f"percentage {value} outside [0, 100]")

    def to_json_dict(self) -> dict:
        """Schema-ordered dict; undefined percentages serialize as null."""
        return {
            "n": self.n,
            "m": self.m,
            "i_f": self.i_f,
            "i_nf": self.i_nf,
            "roi_lip": self.roi_lip,
            "roi_l_eye": self.roi_l_eye,
            "roi_r_eye": self.roi_r_eye,
            "a_f": self.a_f,
            "a_nf": self.a_nf,
            "a_lip": self.a_lip,
            "a_l_eye": self.a_l_eye,
            "a_r_eye": self.a_r_eye,
        }

    def to_text(self) -> str:
        """Human-readable table; percentages to 2 places, n/a when undefined."""

        def pct(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.2f}"

        rows = [
            ("face", self.i_f, self.n, pct(self.a_f)),
            ("non-face", self.i_nf, self.m, pct(self.a_nf)),
            ("left eye", self.roi_l_eye, self.n, pct(self.a_l_eye)),
            ("right eye", self.roi_r_eye, self.n, pct(self.a_r_eye)),
            ("lips", self.roi_lip, self.n, pct(self.a_lip)),
        ]
        lines = [f"{'metric':<10} {'hit':>5} {'of':>5} {'percent':>8}"]
        lines.extend(
            f"{name:<10} {hit:>5} {total:>5} {percent:>8}"
            for name, hit, total, percent in rows
        )
        return "\n".join(lines)


def _pair(
    labels: Sequence[GroundTruthLabel], records: Sequence[DetectionRecord]
) -> list[tuple[GroundTruthLabel, DetectionRecord]]:
    """Match labels to records one-to-one by image id."""
    label_ids = set()
    for label in labels:
        if label.image_id in label_ids:
            raise DuplicateRecordError(f"duplicate label for {label.image_id!r}")
        label_ids.add(label.image_id)
    by_id: dict[str, DetectionRecord] = {}
    for record in records:
        if record.image_id in by_id:
            raise DuplicateRecordError(f"duplicate record for {record.image_id!r}")
        if record.image_id not in label_ids:
            raise UnmatchedRecordError(f"record {record.image_id!r} has no label")
        by_id[record.image_id] = record
    missing = label_ids - by_id.keys()
    if missing:
        raise MissingRecordError(f"no record for {sorted(missing)[0]!r}")
    return [(label, by_id[label.image_id]) for label in labels]


def _rate(count: int, denominator: int) -> float | None:
    if denominator == 0:
        return None
    return 100.0 * count / denominator


def score_face_recognition(
    labels: Sequence[GroundTruthLabel], records: Sequence[DetectionRecord]
) -> FaceRecognitionScores:
    """Fraction of facial images detected and non-facial images rejected."""
    pairs = _pair(labels, records)
    n = sum(1 for label, _ in pairs if label.is_face)
    m = len(pairs) - n
    i_f = sum(1 for label, rec in pairs if label.is_face and rec.face_detected)
    i_nf = sum(1 for label, rec in pairs if not label.is_face and not rec.face_detected)
    return FaceRecognitionScores(
        n=n, m=m, i_f=i_f, i_nf=i_nf, a_f=_rate(i_f, n), a_nf=_rate(i_nf, m)
    )


def score_roi_detection(
    labels: Sequence[GroundTruthLabel], records: Sequence[DetectionRecord]
) -> RoiDetectionScores:
    """Per-ROI found rates over the facial images.

    An image counts toward a ROI only when the label expects that ROI and
    the record found it.
    """
    pairs = _pair(labels, records)
    facial = [(label, rec) for label, rec in pairs if label.is_face]
    n = len(facial)

    def hits(tag: RoiTag) -> int:
        return sum(
            1
            for label, rec in facial
            if tag in label.expected_rois and tag in rec.rois_found
        )

    roi_lip = hits(RoiTag.LIPS)
    roi_l_eye = hits(RoiTag.LEFT_EYE)
    roi_r_eye = hits(RoiTag.RIGHT_EYE)
    return RoiDetectionScores(
        n=n,
        roi_lip=roi_lip,
        roi_l_eye=roi_l_eye,
        roi_r_eye=roi_r_eye,
        a_lip=_rate(roi_lip, n),
        a_l_eye=_rate(roi_l_eye, n),
        a_r_eye=_rate(roi_r_eye, n),
    )


def aggregate_report(
    face: FaceRecognitionScores, roi: RoiDetectionScores
) -> AccuracyReport:
    """Bundle both scoring passes into one report."""
    if face.n != roi.n:
        raise ValueError(f"scorers disagree on N: {face.n} vs {roi.n}")
    return AccuracyReport(
        n=face.n,
        m=face.m,
        i_f=face.i_f,
        i_nf=face.i_nf,
        roi_lip=roi.roi_lip,
        roi_l_eye=roi.roi_l_eye,
        roi_r_eye=roi.roi_r_eye,
        a_f=face.a_f,
        a_nf=face.a_nf,
        a_lip=roi.a_lip,
        a_l_eye=roi.a_l_eye,
        a_r_eye=roi.a_r_eye,
    )


def evaluate_records(
    labels: Sequence[GroundTruthLabel], records: Sequence[DetectionRecord]
) -> AccuracyReport:
    return aggregate_report(
        score_face_recognition(labels, records),
        score_roi_detection(labels, records),
    )


# ---------------------------------------------------------------------------
# Ground-truth manifest I/O
# ---------------------------------------------------------------------------

MANIFEST_HEADER = "# image_path,is_face,left_eye,right_eye,lips"

_MANIFEST_ROIS = (RoiTag.LEFT_EYE, RoiTag.RIGHT_EYE, RoiTag.LIPS)


@dataclass(frozen=True)
class ManifestEntry:
    """One manifest line: the resolved image path plus its label.

    The label's ``image_id`` is the path exactly as written in the file.
    """

    image_path: Path
    label: GroundTruthLabel


def _parse_flag(token: str, line_no: int, path: Path) -> bool:
    if token not in ("0", "1"):
        raise ManifestError(f"{path}:{line_no}: flag must be 0 or 1, got {token!r}")
    return token == "1"


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Parse a comma-separated ground-truth manifest.

    Format per line: ``image_path,is_face,left_eye,right_eye,lips`` with 0/1
    flags. Blank lines and lines starting with ``#`` are ignored. Image
    paths are resolved relative to the manifest's directory.
    """
    path = Path(path)
    entries: list[ManifestEntry] = []
    with path.open(newline="", encoding="utf-8") as handle:
        for line_no, row in enumerate(csv.reader(handle), start=1):
            if not row or not "".join(row).strip():
                continue
            if row[0].lstrip().startswith("#"):
                continue
            if len(row) != 5:
                raise ManifestError(f"{path}:{line_no}: expected 5 fields, got {len(row)}")
            image_field = row[0].strip()
            if not image_field:
                raise ManifestError(f"{path}:{line_no}: empty image path")
            flags = [_parse_flag(token.strip(), line_no, path) for token in row[1:]]
            is_face = flags[0]
            expected = frozenset(
                tag for tag, present in zip(_MANIFEST_ROIS, flags[1:]) if present
            )
            try:
                label = GroundTruthLabel(
                    image_id=image_field, is_face=is_face, expected_rois=expected
                )
            except ValueError as exc:
                raise ManifestError(f"{path}:{line_no}: {exc}") from exc
            entries.append(ManifestEntry(image_path=path.parent / image_field, label=label))
    return entries


def write_manifest(path: str | Path, labels: Iterable[GroundTruthLabel]) -> None:
    """Write labels as a manifest; image ids are taken as relative paths."""
    path = Path(path)
    lines = [MANIFEST_HEADER]
    for label in labels:
        flags = [label.is_face] + [tag in label.expected_rois for tag in _MANIFEST_ROIS]
        lines.append(label.image_id + "," + ",".join(str(int(f)) for f in flags))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
