"""Exception types shared across the engine."""

from __future__ import annotations

from dataclasses import dataclass


class KbError(Exception):
    """Base class for every domain error raised by this package."""


@dataclass(frozen=True)
class SourceLocation:
    """1-based position inside a parsed character stream."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(KbError):
    """Syntax or load error with a source position.

    ``kind`` is one of: UnexpectedToken, UnknownKeyword, UndeclaredEntity,
    MalformedNumber, DuplicateDeclaration, UnsupportedConstruct.
    """

    def __init__(self, location: SourceLocation, kind: str, message: str):
        super().__init__(f"{location}: {kind}: {message}")
        self.location = location
        self.kind = kind
        self.message = message


class UnsupportedConstruct(KbError):
    """Input or query uses a construct outside the supported fragment."""


class ResourceLimit(KbError):
    """The reasoner exceeded its node budget; the answer is unknown, not wrong."""


class InconsistentKB(KbError):
    """Operation requires a consistent knowledge base."""


class NoExistentialFillers(KbError):
    """Closure axiom requested for a class/role pair with no existential restriction."""


class UnmappedName(KbError):
    """A finite interpretation is missing an extension for a referenced name."""


class MissingCoreEntity(KbError):
    """Synchronization needs a class or role the core ontology does not declare."""


class StoreError(KbError):
    """Store file is unreadable, has a wrong schema version, or broken references."""
