"""facekit: skin-color face localization and facial feature-point extraction.

The pipeline: threshold an RGB image on mean intensity, find the largest
connected skin region, gate it on size and aspect ratio, crop, place
eye/lip regions by fixed facial proportions, pull each region's largest
non-skin blob with a queue-based scanline flood fill, and read four
feature points per region. A scoring harness and a deterministic
synthetic-image generator make the whole chain testable end to end.
"""

from .corpus import (
    NonFaceKind,
    SyntheticFaceSpec,
    default_face_spec,
    face_specs,
    generate_corpus,
    generate_face,
    generate_nonface,
    random_face_spec,
)
from .errors import FacekitError
from .features import (
    FeatureKind,
    FeaturePoint,
    FeatureSet,
    extract_features,
    extreme_points,
    tangent_points,
)
from .fill import Curve, FillStats, Grid, extract_curves, scanline_flood_fill
from .metrics import (
    AccuracyReport,
    DetectionRecord,
    GroundTruthLabel,
    aggregate_report,
    evaluate_records,
    read_manifest,
    score_face_recognition,
    score_roi_detection,
    write_manifest,
)
from .pipeline import PipelineResult, RunConfig, run_pipeline
from .raster import (
    BinaryMask,
    Overlay,
    Pixel,
    Point,
    Rect,
    RgbImage,
    binarize,
    load_image,
    render_annotated,
    save_image,
)
from .roi import RoiFractions, RoiSet, RoiTag, locate_rois
from .skin import (
    Connectivity,
    FaceBox,
    RejectReason,
    SkinConfig,
    Verdict,
    classify_skin,
    crop_face,
    face_gate,
    largest_skin_region,
)

__version__ = "0.1.0"
