"""Exception hierarchy shared by the geometry kernel and the command line."""


class FlatFrontError(Exception):
    """Base class for every error raised by this package."""


class SignatureMismatch(FlatFrontError, ValueError):
    pass


class NotCollinear(FlatFrontError, ValueError):
    pass


class DegenerateConfiguration(FlatFrontError, ValueError):
    pass


class NotHarmonic(FlatFrontError, ValueError):
    """The potential fails the Laplace admissibility test."""


class DegenerateParameter(FlatFrontError, ValueError):
    """Deformation parameter 1/2, where the conserved quantities become null-paired."""


class PotentialOverflow(FlatFrontError, OverflowError):
    pass


class UmbilicEncountered(FlatFrontError, ValueError):
    pass


class ContactSpanDegenerate(FlatFrontError, ValueError):
    """The two fixed spheres span a contact element."""


class PointSphereEncountered(FlatFrontError, ValueError):
    pass


class TransportDiverged(FlatFrontError, RuntimeError):
    pass
