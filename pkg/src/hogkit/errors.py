"""Exception hierarchy shared across the package."""


class HogkitError(Exception):
    """Base class for every error raised by hogkit."""


class ValidationError(HogkitError, ValueError):
    """An input pattern set violates a required invariant."""


class EmptyPatternError(ValidationError):
    """A pattern with zero length was supplied."""


class DuplicatePatternError(ValidationError):
    """Two byte-identical patterns were supplied under strict policy."""


class ContainedPatternError(ValidationError):
    """A pattern occurs as a substring of another under strict policy."""


class EmptySetError(ValidationError):
    """No pattern survived loading/validation."""


class FormatError(HogkitError, ValueError):
    """Malformed input stream (bad FASTA structure, unparseable graph dump)."""


class InvariantError(HogkitError, RuntimeError):
    """An internal data-structure invariant broke.

    Raised when a guaranteed property fails mid-construction, e.g. a
    suffix-path node turning out to be a leaf (the input was not
    factor-free) or a stack popping a node other than the one being
    closed. Indicates a bug or invalid upstream input, never a normal
    error condition.
    """


class SizeGuardError(HogkitError, ValueError):
    """Input exceeds the size guard for brute-force verification."""
