"""Exception hierarchy.

Two top-level families matter for the CLI exit-code contract: ``InputError``
(caller gave us something malformed, exit 1) and ``NumericalError``
(computation failed on valid-looking input, exit 2).
"""


class PolyvolError(Exception):
    pass


class InputError(PolyvolError):
    """Malformed input: bad dimensions, bad files, unsupported combinations."""


class RepresentationError(InputError):
    """Operation not available for this polytope representation."""


class VolumeUnknownError(InputError):
    """Exact volume requested for a body that does not carry one."""


class NumericalError(PolyvolError):
    """Iteration caps, degenerate data, failed schedules."""


class UnboundedPolytopeError(NumericalError):
    """A chord or LP had no blocking constraint in some direction."""


class InfeasibleError(NumericalError):
    """An LP or polytope turned out to be empty."""


class DegenerateError(NumericalError):
    """Rank-deficient input where full dimension was required."""


class PreconditionError(InputError):
    """A documented precondition was violated (e.g. non-interior start point)."""
