"""Exception types shared across the package."""


class PassklabError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(PassklabError):
    """Trajectory or parameter vector does not fit the policy shape."""


class CapacityError(PassklabError):
    """Trajectory space exceeds the enumeration cap."""


class PartitionError(PassklabError):
    """Mode sets overlap, fail to cover the correct set, or are otherwise invalid."""


class DegenerateModeError(PassklabError):
    """An operation that divides by a mode's mass was given a zero-mass mode."""


class ConfigError(PassklabError):
    """Experiment config file is missing, malformed, or contains unknown keys."""


class ValidationFailure(PassklabError):
    """A numerical self-check (e.g. finite-difference oracle) failed."""
