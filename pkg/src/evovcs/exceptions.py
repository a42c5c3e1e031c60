"""Exception hierarchy shared across the package."""


class VCSError(Exception):
    """Base class for every error raised by evovcs."""


class ParameterError(VCSError, ValueError):
    """A scheme or theory parameter is out of its allowed range."""


class PBMParseError(VCSError, ValueError):
    """Malformed PBM stream. ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DimensionError(VCSError, ValueError):
    """Images that must share dimensions do not."""


class DegenerateRegionError(VCSError, ValueError):
    """A region mask is empty, so a light transmission is undefined."""


class StateError(VCSError):
    """A dealer state violates its invariants."""


class ManifestError(StateError):
    """A dealer manifest failed version, checksum or field validation."""


class PartitionError(VCSError, ValueError):
    """A partition is infeasible for the requested group layout."""


class ConvergenceError(VCSError):
    """A contrast curve did not converge within the search bound."""
