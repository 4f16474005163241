"""Exception hierarchy shared by all modules.

Each class maps to one CLI exit code: DomainError -> 1,
ResourceCapError -> 2, MalformedInputError -> 3.
"""


class DgpdError(Exception):
    pass


class DomainError(DgpdError):
    """A mathematical precondition failed (axiom violation, non-cocycle)."""


class ResourceCapError(DgpdError):
    """An enumeration exceeded its configured cap."""


class MalformedInputError(DgpdError):
    """Input data is structurally broken (bad ids, missing fields)."""
