"""Exception hierarchy for palmid.

ParameterError signals a bad argument (caller bug); DataError signals bad or
inconsistent input data (corrupt files, geometry mismatches). Gallery files
get their own load-error family so callers can distinguish a wrong version
from a truncated or corrupted file.
"""


class PalmidError(Exception):
    """Base class for all palmid errors."""


class ParameterError(PalmidError, ValueError):
    """An argument violates an operation's precondition."""


class DataError(PalmidError, ValueError):
    """Input data is malformed or inconsistent (geometry, bands, fingerprints)."""


class DegenerateProbeError(PalmidError):
    """All gallery distances are zero; the probe matches every template exactly."""


class GalleryLoadError(DataError):
    """Base class for gallery deserialization failures."""


class GalleryVersionError(GalleryLoadError):
    """Gallery file carries an unsupported format version."""


class GalleryTruncatedError(GalleryLoadError):
    """Gallery file ended before the declared payload was read."""


class GalleryIntegrityError(GalleryLoadError):
    """Gallery file content fails an integrity check (bad magic, checksum, fingerprint)."""
