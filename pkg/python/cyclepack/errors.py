"""
Exception hierarchy for cyclepack.

Every error raised by the library derives from ``CyclePackError`` so callers
can catch one type, the same way a driver exposes a single root error.
"""

from __future__ import annotations

from typing import Any


class CyclePackError(Exception):
    """Root of all cyclepack errors"""


class StructuralError(CyclePackError):
    """Shapes, margins or host graphs that do not fit together"""


class EncodingError(StructuralError):
    """Entries outside the allowed alphabet, or an unparsable file"""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(CyclePackError):
    """The request has no mathematical solution (odd sizes, unbalanced digraphs, ...)"""


class ResourceError(CyclePackError):
    """A configured limit was exceeded.

    ``partial`` holds the best result found before giving up, when there is one.
    """

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class CertificateError(CyclePackError):
    """An independent verifier rejected a certificate or a cross-check failed"""
