"""Error taxonomy for the toolkit.

Every exception carries a stable ``kind`` string so callers (and the CLI exit
code mapper) can dispatch without string-matching messages.
"""


class ToolkitError(Exception):
    """Base class; ``kind`` identifies the failure category."""

    kind = "internal-error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class InvalidArgumentError(ToolkitError):
    kind = "invalid-argument"


class TruncationError(ToolkitError):
    """Input not representable at the requested cutoff (tail mass too large)."""

    kind = "truncation-error"


class SupportError(ToolkitError):
    """State has mass outside the support of the reference operator."""

    kind = "support-error"


class CertificationError(ToolkitError):
    """A bound could not be certified (e.g. grid maximum at the search edge)."""

    kind = "certification-failure"


class InconsistencyError(ToolkitError):
    """Two independently computed quantities contradict each other."""

    kind = "inconsistency-error"


class DegenerateInputError(ToolkitError):
    kind = "degenerate-input"


class InternalError(ToolkitError):
    kind = "internal-error"


class UnsupportedError(ToolkitError):
    kind = "unsupported"
