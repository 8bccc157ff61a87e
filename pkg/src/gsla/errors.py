"""Exception hierarchy shared by all gsla modules."""


class GslaError(Exception):
    """Base class for all library errors."""


class InputError(GslaError):
    """Malformed JSON or scalar-literal input; carries the offending path."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class NoSuchRoot(GslaError):
    """The field does not contain a primitive root of unity of the requested order."""


class AmbientMismatch(GslaError):
    """Subspace operation on spaces with different ambient dimensions."""


class FieldMismatch(GslaError):
    """Operands constructed over different fields."""


class DimensionMismatch(GslaError):
    """Matrix or witness dimensions do not match the objects being compared."""


class NotCommutative(GslaError):
    """The algebra handed to the idempotent engine is not commutative/associative."""


class NonSplit(GslaError):
    """No full idempotent decomposition discoverable at the configured bounds."""


class GradingMismatch(GslaError):
    """Base algebra or module is not graded by the expected quotient."""


class NotAnIdeal(GslaError):
    """Subspace is not closed under bracketing with the algebra."""


class NotProper(GslaError):
    """Subspace is zero or the whole space where a proper one is required."""


class AlreadyGraded(GslaError):
    """Refinement was asked for an ideal that is already graded."""


class NotGradedSimpleError(GslaError):
    """Recognition requires a (probably) graded simple input."""


class VerificationFailure(GslaError):
    """A constructed certificate failed its exact re-verification."""


class NotHomomorphism(GslaError):
    """Claimed group map is not a homomorphism or not bijective."""


class KernelMismatch(GslaError):
    """Character does not factor through the quotient required by a twist."""


class WitnessInvalid(GslaError):
    """Supplied isomorphism witness fails verification."""


class NotSemisimple(GslaError):
    """Graded Weyl decomposition requires a nondegenerate Killing form in char 0."""


class NoProjectionFound(GslaError):
    """No equivariant projection exists; a precondition was violated."""


class EmptySubspace(GslaError):
    """size() of the zero subspace is undefined."""


class SearchCapExceeded(GslaError):
    """Subset enumeration exceeded the configured cap."""


class BadCharacteristic(GslaError):
    """Catalog constructor unavailable over a field of this characteristic."""


class DecompositionFailure(GslaError):
    """Loop ideal decomposition failed verification (e.g. char divides |P|)."""
