"""Exception types shared by all destpass modules."""


class DpsError(Exception):
    """Base class for every error this package raises deliberately."""


class InvalidBlockSize(DpsError):
    """Requested region block size is below the supported minimum."""


class RegionClosed(DpsError):
    """Operation on a region whose scope has already ended."""


class DoubleFill(DpsError):
    """A second write was attempted on a field that is no longer a hole."""


class FieldIndexOutOfRange(DpsError):
    """Field index outside the arity of the target cell's constructor."""


class RegionMismatch(DpsError):
    """A reference or plug would cross from one region into another."""


class IncompleteRead(DpsError):
    """Decoding reached a field that is still a hole."""


class CyclicStructure(DpsError):
    """Decoding found a cell reachable from itself."""


class ShapeConflict(DpsError):
    """Re-registration of a type id with a different shape."""


class UnknownCtor(DpsError):
    """Constructor descriptor is not registered, or does not fit the hole."""


class UseAfterConsume(DpsError):
    """A token, destination, or incomplete was consumed a second time."""


class LinearityLeak(DpsError):
    """A linear value (token, destination, incomplete) was dropped or smuggled."""


class UnfilledHoles(DpsError):
    """An incomplete still has live destinations and cannot be released."""


class SelfPlug(DpsError):
    """An incomplete was plugged into a destination of its own lineage."""


class DestinationInLeaf(DpsError):
    """A leaf payload may not contain live linear values."""


class OracleMismatch(DpsError):
    """A benchmark engine produced output that disagrees with the oracle."""
