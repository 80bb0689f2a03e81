"""facekit command line: detect, features, annotate, evaluate, generate.

Exit codes: 0 success, 1 pipeline rejection on single-image commands,
2 usage or I/O errors. `evaluate` always exits 0 once a report is
produced; unreadable images are diagnosed on stderr and counted as
not detected.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .corpus import generate_corpus
from .errors import ConfigError, FacekitError
from .metrics import DetectionRecord, ManifestEntry, evaluate_records, read_manifest
from .pipeline import PipelineResult, RunConfig, run_pipeline
from .raster import Overlay, Pixel, Point, Rect, load_image, render_annotated, save_image
from .roi import RoiFractions
from .skin import Connectivity

__all__ = ["main"]

_FRACTION_KEYS = tuple(f.name for f in dataclasses.fields(RoiFractions))
_SCALAR_KEYS = (
    "threshold",
    "connectivity",
    "min_region_pixels",
    "output_format",
    "marker_color",
    "output_dir",
)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_marker(value: str) -> Pixel:
    parts = value.split(",")
    if len(parts) != 3:
        raise ConfigError(f"marker color must be R,G,B, got {value!r}")
    try:
        channels = [int(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"marker color must be numeric, got {value!r}") from exc
    if not all(0 <= c <= 255 for c in channels):
        raise ConfigError(f"marker channels must be in 0..255, got {value!r}")
    return Pixel(*channels)


def _parse_config_file(path: Path) -> dict[str, str]:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{line_no}: expected key=value")
        key, value = key.strip(), value.strip()
        if key not in _SCALAR_KEYS and key not in _FRACTION_KEYS:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = value
    return values


def _build_config(
    config_path: Path | None,
    include_timing: bool,
    threshold: int | None = None,
    connectivity: int | None = None,
    min_region_pixels: int | None = None,
    output_format: str | None = None,
    marker_color: str | None = None,
) -> RunConfig:
    """Layer the three sources: defaults, then config file, then flags."""
    file_values = _parse_config_file(config_path) if config_path else {}
    defaults = RunConfig()
    try:
        fraction_values = {
            key: file_values[key] for key in _FRACTION_KEYS if key in file_values
        }
        fractions = RoiFractions(**fraction_values) if fraction_values else defaults.fractions

        def pick(flag, key, fallback, convert):
            if flag is not None:
                return convert(flag)
            if key in file_values:
                return convert(file_values[key])
            return fallback

        return RunConfig(
            threshold=pick(threshold, "threshold", defaults.threshold, int),
            connectivity=pick(
                connectivity, "connectivity", defaults.connectivity, lambda v: Connectivity(int(v))
            ),
            min_region_pixels=pick(
                min_region_pixels, "min_region_pixels", defaults.min_region_pixels, int
            ),
            output_format=pick(output_format, "output_format", defaults.output_format, str),
            marker_color=pick(marker_color, "marker_color", defaults.marker_color, _parse_marker),
            output_dir=pick(None, "output_dir", None, Path),
            include_timing=include_timing,
        )
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc


def _pipeline_options(command):
    for option in (
        click.option("--threshold", type=click.IntRange(0, 255), default=None, help="skin threshold T"),
        click.option("--connectivity", type=click.Choice(["4", "8"]), default=None),
        click.option("--min-region-pixels", type=click.IntRange(min=1), default=None),
    ):
        command = option(command)
    return command


def _config_from(ctx: click.Context, **flags) -> RunConfig:
    if flags.get("connectivity") is not None:
        flags["connectivity"] = int(flags["connectivity"])
    try:
        return _build_config(
            ctx.obj["config_path"], not ctx.obj["no_timing"], **flags
        )
    except ConfigError as exc:
        _fail(2, str(exc))
        raise AssertionError  # unreachable; _fail exits


def _load_or_exit(path: Path):
    try:
        return load_image(path)
    except (FacekitError, OSError) as exc:
        _fail(2, f"{type(exc).__name__}: {exc}")
        raise AssertionError


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2)


def _result_text(result: PipelineResult, include_timing: bool) -> str:
    lines = [f"image: {result.image_id}"]
    if result.face_box is None:
        lines.append("face: none")
    else:
        box = result.face_box
        lines.append(
            f"face: x0={box.x0} y0={box.y0} size={box.width}x{box.height} "
            f"pixels={box.pixel_count}"
        )
    if result.rejection is not None:
        lines.append(f"verdict: not a face ({result.rejection.value})")
    else:
        lines.append("verdict: face")
        assert result.rois is not None and result.features is not None
        curves = {c.roi_tag: c for c in result.curves}
        for tag, rect in result.rois.items():
            curve = curves.get(tag)
            curve_text = f"curve {curve.pixel_count} px" if curve else "no curve"
            points = " ".join(
                f"{p.kind.value.split('_')[1]}=({p.position.x},{p.position.y})"
                for p in result.features.points_for(tag)
            )
            lines.append(
                f"roi {tag.value}: cols {rect.x0}..{rect.x1 - 1} "
                f"rows {rect.y0}..{rect.y1 - 1} | {curve_text}"
                + (f" | {points}" if points else "")
            )
    if include_timing:
        lines.append(f"timing: {result.timing_ms:.3f} ms")
    return "\n".join(lines)


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=False, path_type=Path),
    default=None,
    help="run-configuration file (key=value lines)",
)
@click.option("--no-timing", is_flag=True, help="omit timing fields from output")
@click.pass_context
def main(ctx: click.Context, config_path: Path | None, no_timing: bool) -> None:
    """Face localization and feature-point extraction toolkit."""
    ctx.obj = {"config_path": config_path, "no_timing": no_timing}


@main.command()
@click.argument("image_path", type=click.Path(path_type=Path))
@_pipeline_options
@click.pass_context
def detect(ctx, image_path: Path, **flags) -> None:
    """Print the face verdict for one image."""
    config = _config_from(ctx, **flags)
    image = _load_or_exit(image_path)
    result = run_pipeline(image, config, image_id=str(image_path))
    if result.face_detected:
        box = result.face_box
        click.echo(
            f"face: x0={box.x0} y0={box.y0} size={box.width}x{box.height} "
            f"pixels={box.pixel_count}"
        )
    else:
        click.echo(f"not a face: {result.rejection.value}")
        sys.exit(1)


@main.command()
@click.argument("image_path", type=click.Path(path_type=Path))
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default=None)
@_pipeline_options
@click.pass_context
def features(ctx, image_path: Path, output_format: str | None, **flags) -> None:
    """Run the full pipeline on one image and print the result."""
    config = _config_from(ctx, output_format=output_format, **flags)
    image = _load_or_exit(image_path)
    result = run_pipeline(image, config, image_id=str(image_path))
    if config.output_format == "json":
        click.echo(_dump_json(result.to_json_dict(include_timing=config.include_timing)))
    else:
        click.echo(_result_text(result, include_timing=config.include_timing))
    if not result.face_detected:
        sys.exit(1)


@main.command()
@click.argument("image_path", type=click.Path(path_type=Path))
@click.option("-o", "--output", "output_path", type=click.Path(path_type=Path), default=None)
@click.option("--marker-color", default=None, help="marker color as R,G,B")
@_pipeline_options
@click.pass_context
def annotate(ctx, image_path: Path, output_path: Path | None, marker_color: str | None, **flags) -> None:
    """Write a copy of the image with the face box, ROIs, and points drawn."""
    config = _config_from(ctx, marker_color=marker_color, **flags)
    image = _load_or_exit(image_path)
    result = run_pipeline(image, config, image_id=str(image_path))
    if not result.face_detected:
        _fail(1, f"{image_path}: not a face ({result.rejection.value})")
    box = result.face_box
    boxes = [(box.rect, "face")]
    points = []
    assert result.rois is not None and result.features is not None
    for tag, rect in result.rois.items():
        boxes.append(
            (Rect(box.x0 + rect.x0, box.y0 + rect.y0, rect.width, rect.height), tag.value)
        )
    for point in result.features.points:
        points.append(
            (
                Point(box.x0 + point.position.x, box.y0 + point.position.y),
                f"{point.roi_tag.value}:{point.kind.value}",
            )
        )
    annotated = render_annotated(image, Overlay.build(boxes, points), config.marker_color)
    if output_path is None:
        output_path = image_path.with_name(
            image_path.stem + ".annotated" + image_path.suffix
        )
    try:
        save_image(annotated, output_path)
    except (FacekitError, OSError) as exc:
        _fail(2, f"{type(exc).__name__}: {exc}")
    click.echo(str(output_path))


def _evaluate_one(entry: ManifestEntry, config: RunConfig) -> tuple[DetectionRecord, str | None]:
    """Run one manifest entry; load failures count as not detected."""
    try:
        image = load_image(entry.image_path)
    except (FacekitError, OSError) as exc:
        record = DetectionRecord(
            image_id=entry.label.image_id, face_detected=False, rois_found=frozenset()
        )
        return record, f"{entry.image_path}: {type(exc).__name__}: {exc}"
    result = run_pipeline(image, config, image_id=entry.label.image_id)
    record = DetectionRecord(
        image_id=entry.label.image_id,
        face_detected=result.face_detected,
        rois_found=result.rois_found(),
    )
    return record, None


def _effective_jobs(jobs: int) -> int:
    cap = os.environ.get("FACEKIT_THREADS")
    if cap:
        try:
            jobs = min(jobs, int(cap))
        except ValueError as exc:
            raise ConfigError(f"FACEKIT_THREADS must be an integer, got {cap!r}") from exc
    return max(1, jobs)


@main.command()
@click.argument("manifest_path", type=click.Path(path_type=Path))
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="worker threads")
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default=None)
@_pipeline_options
@click.pass_context
def evaluate(ctx, manifest_path: Path, jobs: int, output_format: str | None, **flags) -> None:
    """Score a labeled corpus and print the accuracy report."""
    config = _config_from(ctx, output_format=output_format, **flags)
    try:
        entries = read_manifest(manifest_path)
        jobs = _effective_jobs(jobs)
    except (FacekitError, OSError) as exc:
        _fail(2, f"{type(exc).__name__}: {exc}")
        raise AssertionError
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(pool.map(lambda e: _evaluate_one(e, config), entries))
    for _, diagnostic in outcomes:
        if diagnostic is not None:
            click.echo(diagnostic, err=True)
    records = sorted((record for record, _ in outcomes), key=lambda r: r.image_id)
    labels = sorted((entry.label for entry in entries), key=lambda l: l.image_id)
    report = evaluate_records(labels, records)
    if config.output_format == "json":
        click.echo(_dump_json(report.to_json_dict()))
    else:
        click.echo(report.to_text())


@main.command()
@click.option("--faces", type=click.IntRange(min=0), required=True)
@click.option("--nonfaces", type=click.IntRange(min=0), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", "out_dir", type=click.Path(path_type=Path), required=True)
def generate(faces: int, nonfaces: int, seed: int, out_dir: Path) -> None:
    """Write a synthetic face/non-face corpus plus its manifest."""
    try:
        manifest = generate_corpus(out_dir, faces=faces, nonfaces=nonfaces, seed=seed)
    except (FacekitError, OSError) as exc:
        _fail(2, f"{type(exc).__name__}: {exc}")
        raise AssertionError
    click.echo(str(manifest))


if __name__ == "__main__":
    main()
