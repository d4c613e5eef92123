"""Exception types shared across the package."""


class LimitExceeded(ValueError):
    """A hard resource guard was hit (word length, tree depth, grid size)."""


class NotStructured(ValueError):
    """Semigroup lacks the periodic-translate structure the operation needs."""


class UnboundedSingularSet(RuntimeError):
    """A forward image of a singular value left the representable range."""


class EmptySet(ValueError):
    """Pixel-set operation received an empty set."""


class UnknownScenario(KeyError):
    """Requested scenario id is not in the catalog."""


class InvalidConfig(ValueError):
    """Configuration contained an unknown or malformed key."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"invalid configuration key: {key!r}")
