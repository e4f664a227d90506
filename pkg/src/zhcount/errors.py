"""Exception types shared across the package."""

from __future__ import annotations


class ZhCountError(Exception):
    """Base class for package errors."""


class FormatError(ZhCountError, ValueError):
    """Malformed input text or JSON."""


class BoundExceededError(ZhCountError):
    """An enumeration or tensor-width bound was exceeded."""


class PreconditionError(ZhCountError, ValueError):
    """An operation was called on an input outside its domain."""


class GadgetSelfTestError(ZhCountError, AssertionError):
    """A gadget failed its brute-force or contraction self-test."""
