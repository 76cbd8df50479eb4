"""Exception hierarchy shared by every module.

Each error carries an exit code used by the command-line front end:
1 input error, 2 domain/regime error, 3 numerical-invariant failure,
4 degenerate data.
"""


class ABError(Exception):
    exit_code = 1


class InputError(ABError):
    exit_code = 1


class DomainError(ABError):
    exit_code = 2


class InvariantError(ABError):
    exit_code = 3


class DegenerateData(ABError):
    exit_code = 4


# numerics kernel
class PoleError(DomainError):
    pass


class RangeError(DomainError):
    pass


class NonConvergence(InvariantError):
    pass


class PoleOnNode(DomainError):
    pass


# direct scattering
class BlowUp(InvariantError):
    pass


class UnitarityViolation(InvariantError):
    pass


class SolitonsPresent(DomainError):
    pass


class ContourTooCoarse(InvariantError):
    pass


# phase geometry
class WrongRegime(DomainError):
    pass


class NeutralOnContour(DomainError):
    pass


class OnCriticalPoint(DomainError):
    pass


class PoleAtZero(DomainError):
    pass


# conjugation function
class ReflectionAtUnitModulus(InvariantError):
    pass


class OnBand(DomainError):
    pass


class TooCloseToEndpoint(DomainError):
    pass


# local model
class ZeroReflectionAtPhasePoint(DegenerateData):
    pass


# time stepper
class FixedPointDivergence(DomainError):
    pass


class DomainEscape(DomainError):
    pass


class StepTooLarge(DomainError):
    pass
