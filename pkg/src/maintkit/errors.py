"""Exception taxonomy shared across the toolkit.

Every error raised on purpose by this package derives from
:class:`MaintkitError`, so callers can catch one base class at a
pipeline boundary and still get precise types for programmatic
handling close to the failure.
"""

from __future__ import annotations


class MaintkitError(Exception):
    """Base class for all toolkit errors."""


class LexError(MaintkitError):
    """Source text could not be tokenized.

    Raised for unterminated strings, illegal characters, and
    inconsistent indentation detected during lexing.
    """

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ParseError(MaintkitError):
    """Source text tokenized but does not parse as a module."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class Unanalyzable(MaintkitError):
    """A source unit could not be analyzed end to end.

    Wraps the underlying :class:`LexError` or :class:`ParseError` so a
    record-level pipeline can flag the unit and keep going instead of
    reporting half-filled metrics.
    """

    def __init__(self, origin: str, cause: Exception) -> None:
        super().__init__(f"{origin}: {cause}")
        self.origin = origin
        self.cause = cause


class DatasetError(MaintkitError):
    """Dataset-level failure, e.g. too many malformed input lines."""


class MissingMetrics(MaintkitError):
    """A prompt or report was requested for a record without metrics."""


class EmptyCorpus(MaintkitError):
    """An aggregate was requested over zero analyzable data points."""


class UnsupportedFormat(MaintkitError):
    """An unknown serialization format name was requested."""


class EmptyCandidate(MaintkitError):
    """Code extraction from a completion left nothing code-like."""


class ConfigError(MaintkitError):
    """The tool configuration is malformed or references missing paths."""


class CompletionError(MaintkitError):
    """Base class for completion-endpoint failures."""


class AuthError(CompletionError):
    """Credential missing or rejected by the endpoint. Not retryable."""


class RateLimited(CompletionError):
    """The endpoint returned 429 after all retries were spent."""


class ServerError(CompletionError):
    """The endpoint kept returning 5xx after all retries were spent."""


class CompletionTimeout(CompletionError):
    """The endpoint kept timing out after all retries were spent."""


class MalformedResponse(CompletionError):
    """The endpoint answered, but not in the expected response shape."""
