"""Error types shared across the platform.

Every error carries a stable machine-readable ``code`` and the HTTP status
the API layer maps it to. The (status, code) pair is unique per class; the
service relies on that to translate failures without inspecting messages.
"""

from __future__ import annotations


class StoryAtlasError(Exception):
    """Base class for all domain errors."""

    code = "Error"
    http_status = 500

    def __init__(self, message: str = "", *, path: str | None = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.path = path


class NotFound(StoryAtlasError):
    code = "NotFound"
    http_status = 404


class MalformedDocument(StoryAtlasError):
    """Input bytes or record structure do not match the expected format."""

    code = "MalformedDocument"
    http_status = 400

    def __init__(self, message: str = "", *, path: str | None = None, errors=None):
        super().__init__(message, path=path)
        self.errors = list(errors or [])


class IntegrityError(StoryAtlasError):
    """A reference does not resolve to a stored record."""

    code = "IntegrityError"
    http_status = 422

    def __init__(self, message: str = "", *, path: str | None = None, errors=None):
        super().__init__(message, path=path)
        self.errors = list(errors or [])


class DuplicateId(StoryAtlasError):
    """Same id ingested twice with differing content."""

    code = "DuplicateId"
    http_status = 409

    def __init__(self, message: str = "", *, path: str | None = None, errors=None):
        super().__init__(message, path=path)
        self.errors = list(errors or [])


class InvariantViolation(StoryAtlasError):
    code = "InvariantViolation"
    http_status = 422


class InvalidConstraint(StoryAtlasError):
    code = "InvalidConstraint"
    http_status = 400


class OutOfRange(StoryAtlasError):
    """Numeric input outside its valid domain (coordinates, radii, viewports)."""

    code = "OutOfRange"
    http_status = 400


class EmptyCluster(StoryAtlasError):
    code = "EmptyCluster"
    http_status = 400


class EmptySelection(StoryAtlasError):
    code = "EmptySelection"
    http_status = 400


class NoDatedEvents(StoryAtlasError):
    code = "NoDatedEvents"
    http_status = 400


class BadIndex(StoryAtlasError):
    code = "BadIndex"
    http_status = 400


class UnknownLayout(StoryAtlasError):
    code = "UnknownLayout"
    http_status = 400


class LayoutSlotError(StoryAtlasError):
    """Slide content does not fit the layout's slot declaration."""

    code = "E_LAYOUT_SLOT"
    http_status = 422


class NestDepthError(StoryAtlasError):
    code = "E_NEST_DEPTH"
    http_status = 422


class QuizNoCorrectError(StoryAtlasError):
    code = "E_QUIZ_NO_CORRECT"
    http_status = 422


class DanglingEventError(StoryAtlasError):
    code = "E_DANGLING_EVENT"
    http_status = 422


class SchemaVersionError(StoryAtlasError):
    code = "E_SCHEMA_VERSION"
    http_status = 422


class InvalidStory(StoryAtlasError):
    """Story document failed validation; carries the violation list."""

    code = "InvalidStory"
    http_status = 422

    def __init__(self, message: str = "", *, path: str | None = None, violations=None):
        super().__init__(message, path=path)
        self.violations = list(violations or [])


class VersionConflict(StoryAtlasError):
    code = "VersionConflict"
    http_status = 409


class NoCoordinates(StoryAtlasError):
    code = "NoCoordinates"
    http_status = 422


class NoVisualization(StoryAtlasError):
    code = "NoVisualization"
    http_status = 422


class StorageCorrupt(StoryAtlasError):
    code = "StorageCorrupt"
    http_status = 500


def error_registry() -> dict[type[StoryAtlasError], tuple[int, str]]:
    """All concrete error classes mapped to their (status, code) pair."""
    registry: dict[type[StoryAtlasError], tuple[int, str]] = {}
    stack = [StoryAtlasError]
    while stack:
        cls = stack.pop()
        stack.extend(cls.__subclasses__())
        if cls is not StoryAtlasError:
            registry[cls] = (cls.http_status, cls.code)
    return registry
