"""Exception types shared across the package."""


class FinspanError(Exception):
    """Base class for all errors raised by finspan."""


class CapacityError(FinspanError):
    """A construction would exceed a configured size cap.

    ``dimension`` names the offending quantity (e.g. ``"apex objects"``).
    """

    def __init__(self, dimension, size, cap):
        self.dimension = dimension
        self.size = size
        self.cap = cap
        super().__init__(f"capacity exceeded: {dimension} = {size} > cap {cap}")


class ClassViolation(FinspanError):
    """A map falls outside the class (backwards/forwards/norm) it was declared in."""


class InvalidStructure(FinspanError):
    """Tables fail the axioms they are supposed to satisfy."""


class NonIntegralError(FinspanError):
    """A marks vector has no integral preimage in the Burnside ring."""
