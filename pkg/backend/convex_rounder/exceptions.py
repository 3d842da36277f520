"""
filename: exceptions.py
description: Module for the error hierarchy. Every error carries a machine-readable detail and
    the exit code the command line reports for it.
"""


class ConvexRounderError(Exception):
    exit_code = 2

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class SpecError(ConvexRounderError):
    """Malformed body, energy or configuration document"""


class DomainError(ConvexRounderError):
    """Zero direction, or an origin that is not interior to the body"""


class UnboundednessError(ConvexRounderError):
    """Outer polyhedral model that is unbounded in the requested direction"""


class DegeneracyError(ConvexRounderError):
    """Flat (lower-dimensional) input or non-positive radius"""


class DimensionError(ConvexRounderError):
    """Operands living in different dimensions"""


class PreconditionError(ConvexRounderError):
    """Hypothesis of a check is not met (e.g. the delta-ball is not contained)"""


class SamplingError(ConvexRounderError):
    """Could not draw enough admissible samples"""


class BudgetError(ConvexRounderError):
    exit_code = 3


class NonMonotoneError(ConvexRounderError):
    exit_code = 3

    def __init__(self, detail: str, trace=None):
        super().__init__(detail)
        self.trace = trace


class LipschitzBoundError(ConvexRounderError):
    exit_code = 4

    def __init__(self, detail: str, witness=None):
        super().__init__(detail)
        self.witness = witness
