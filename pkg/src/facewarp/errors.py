"""Exception hierarchy shared across facewarp."""


class FaceWarpError(Exception):
    """Base class for all facewarp errors."""


class DegenerateGeometryError(FaceWarpError, ValueError):
    """Raised when points that must be distinct coincide (e.g. eye centers)."""


class LandmarkFormatError(FaceWarpError, ValueError):
    """Raised when a landmark file does not follow the documented JSON schema."""


class ImageFormatError(FaceWarpError, ValueError):
    """Raised for unreadable or unsupported PNG input."""


class DegenerateConfigurationError(FaceWarpError, ValueError):
    """Raised when an MLS control configuration admits no unique solution."""


class DegenerateRigidWarning(RuntimeWarning):
    """Emitted when the rigid MLS direction vector vanishes and a translation is used."""
