"""Exception types shared across the package."""

from __future__ import annotations


class SizeCapError(RuntimeError):
    """An enumeration or construction would exceed its configured size cap."""


class SchemaError(ValueError):
    """A serialized document violates its schema or an invariant.

    ``path`` points at the offending node, e.g. ``root/children/1``.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
