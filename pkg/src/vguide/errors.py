"""Exception types shared across the pipeline."""


class VguideError(Exception):
    """Base class for all vguide errors."""


class UnsupportedFormat(VguideError):
    pass


class MissingMeta(VguideError):
    pass


class DimensionMismatch(VguideError):
    pass


class EmptySource(VguideError):
    pass


class DegenerateRegion(VguideError):
    pass


class SchemaViolation(VguideError):
    """Manifest/ground-truth document fails schema or invariant checks.

    The message names the offending JSON path.
    """


class ScriptInvalid(VguideError):
    pass


class TimelineMismatch(VguideError):
    pass
