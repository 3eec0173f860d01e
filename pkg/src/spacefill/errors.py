"""Exception types shared across the package."""


class SpacefillError(Exception):
    """Base class for all errors raised by this package."""


class FieldFormatError(SpacefillError):
    """A field descriptor or raw data file is missing, malformed, or inconsistent."""


class TreeFormatError(SpacefillError):
    """A multiscale tree file is malformed or inconsistent with its domain."""


class NoHamiltonianPath(SpacefillError):
    """No Hamiltonian path exists for the requested entry vertex and exit face."""


class CycleAssociationError(SpacefillError):
    """Two unit cycles could not be associated into a single cycle."""
