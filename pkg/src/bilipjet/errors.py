"""Exception hierarchy shared across the package.

Every error raised intentionally by bilipjet derives from :class:`BilipjetError`
so callers can catch library failures without masking genuine bugs.
"""


class BilipjetError(Exception):
    """Base class for all bilipjet errors."""


class InvalidOrderError(BilipjetError, ValueError):
    """Requested derivative order is outside the supported range."""


class InvalidTermError(BilipjetError, ValueError):
    """A term or expansion violates its structural invariants."""


class SerializationError(BilipjetError, ValueError):
    """A JSON payload does not encode a valid expansion."""


class DimensionMismatchError(BilipjetError, ValueError):
    """Multilinear operands have incompatible arity or dimensions."""


class MissingJetError(BilipjetError, KeyError):
    """A jet context lacks an entry required by an expansion factor."""


class ProfileError(BilipjetError, ValueError):
    """A step profile violates its invariants (signs, totals, flags)."""


class SpaceSpecError(BilipjetError, ValueError):
    """A function-space specification is malformed or unsupported."""


class SpecParseError(SpaceSpecError):
    """Space-grammar parse failure; carries the offending position."""

    def __init__(self, message, text, pos):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class NormDivergenceError(BilipjetError, ArithmeticError):
    """An iterative norm computation failed to converge."""


class InversionError(BilipjetError, ArithmeticError):
    """Pointwise Newton inversion failed to converge."""


class DomainError(BilipjetError, ValueError):
    """A point or grid leaves the domain a map is defined on."""


class ConfigError(BilipjetError, ValueError):
    """A verification-suite configuration is invalid."""
