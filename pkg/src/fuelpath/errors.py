"""Exception types shared across the package."""


class FuelpathError(Exception):
    """Base class for every error raised by fuelpath."""


class IncompatibleDimensions(FuelpathError, ValueError):
    """Two quantities (or a quantity and a unit) have different dimensions."""


class MissingFuelProperties(FuelpathError, ValueError):
    """A conversion needs a heating value or HHV/LHV ratio that was not supplied."""


class UnknownUnit(FuelpathError, ValueError):
    """A unit string could not be parsed."""


class NonPositiveIndex(FuelpathError, ValueError):
    """A cost index used for escalation is zero or negative."""


class InvalidYears(FuelpathError, ValueError):
    """A financing horizon is shorter than one year."""


class PolicyExceedsLife(FuelpathError, ValueError):
    """A credit duration is longer than the asset book life."""


class UnknownVariant(FuelpathError, KeyError):
    """A 45Q variant that the policy suite does not define."""


class NonPositiveSize(FuelpathError, ValueError):
    """Power-law scaling was asked for a non-positive plant size."""


class SchemaError(FuelpathError, ValueError):
    """The dataset document does not match the schema."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class InvariantViolation(FuelpathError, ValueError):
    """A dataset value breaks a physical or policy invariant."""


class DanglingReference(FuelpathError, KeyError):
    """A dataset record points at a key that does not exist."""


class NotHydrogenPathway(FuelpathError, ValueError):
    """A hydrogen-only operation was given a liquid-fuel pathway."""


class NotSlfPathway(FuelpathError, ValueError):
    """A liquid-fuel-only operation was given a hydrogen pathway."""


class ZeroCapacityFactor(FuelpathError, ValueError):
    """Annualized costs cannot be spread over zero output."""


class ClaimViolation(FuelpathError, ValueError):
    """A pathway claims a combination of credits the rules forbid."""


class IneligibleRfsCategory(ClaimViolation):
    """RIN revenue was requested for a pathway that cannot generate RINs."""


class NoMitigation(FuelpathError, ValueError):
    """The pathway does not reduce emissions relative to the fossil benchmark."""


class DegeneratePoints(FuelpathError, ValueError):
    """A regression was asked to fit points with no spread."""


class NoCrossing(FuelpathError, ValueError):
    """A breakeven solver found no sign change to bracket."""
