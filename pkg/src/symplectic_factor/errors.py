"""Exception hierarchy shared by every module of the package."""


class SymplecticError(Exception):
    """Base class; ``kind`` is the machine-readable tag used by the CLI."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class DimensionMismatch(SymplecticError, ValueError):
    pass


class CapabilityMissing(SymplecticError):
    pass


class NotUnimodular(SymplecticError):
    pass


class WitnessFailure(NotUnimodular):
    pass


class NonUnitParameter(SymplecticError, ValueError):
    pass


class OutsideNeighborhood(SymplecticError):
    pass


class PivotNotUnit(SymplecticError):
    pass


class CertificateFailure(SymplecticError):
    pass


class MilestoneViolation(SymplecticError, AssertionError):
    """A structural invariant of the elimination failed while strict checks were on."""


class DegenerateRow(SymplecticError):
    pass


class SplitFailure(SymplecticError):
    pass


class LogBranchFailure(SymplecticError):
    pass
