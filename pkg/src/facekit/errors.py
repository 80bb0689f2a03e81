"""Exception hierarchy shared by all facekit modules."""

from __future__ import annotations


class FacekitError(Exception):
    """Base class for every error raised by this package."""


class MissingFileError(FacekitError, FileNotFoundError):
    """An input path does not exist."""


class UnsupportedFormatError(FacekitError):
    """The file is not one of the supported raster formats."""


class CorruptDataError(FacekitError):
    """The file matched a supported format but its contents are inconsistent."""


class OutOfBoundsError(FacekitError):
    """A coordinate or rectangle falls outside the target grid."""


class GateFailedError(FacekitError):
    """An operation requiring an accepted face box got a rejected one."""


class DegenerateRoiError(FacekitError):
    """Fraction rounding collapsed a region of interest to zero area."""


class EmptyCurveError(FacekitError):
    """Feature extraction was asked to operate on an empty curve."""


class SpecInfeasibleError(FacekitError):
    """A synthetic-image spec cannot satisfy its own constraints."""


class ConfigError(FacekitError):
    """A run-configuration file or value is invalid."""


class ManifestError(FacekitError):
    """A ground-truth manifest line cannot be parsed."""


class MissingRecordError(FacekitError):
    """A labeled image has no detection record."""


class DuplicateRecordError(FacekitError):
    """The same image id appears more than once."""


class UnmatchedRecordError(FacekitError):
    """A detection record refers to an image id with no label."""
