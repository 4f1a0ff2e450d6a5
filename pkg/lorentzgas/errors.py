class LorentzGasError(Exception):
    pass


class InvalidPhasePointError(LorentzGasError, ValueError):
    pass


class EventBudgetExceededError(LorentzGasError, RuntimeError):
    pass


class EmptyWindowError(LorentzGasError, ValueError):
    pass


class ThresholdDomainError(LorentzGasError, ValueError):
    pass


class DegenerateFitError(LorentzGasError, ValueError):
    pass


class FloorDominatedError(LorentzGasError, ValueError):
    pass


class AliasingError(LorentzGasError, ValueError):
    pass


class UnsupportedDimensionError(LorentzGasError, ValueError):
    pass


class KernelValidationError(LorentzGasError, ValueError):
    pass


class ModeCutoffMismatchError(LorentzGasError, ValueError):
    pass


class InvalidProfileError(LorentzGasError, ValueError):
    pass


class CertificateInvariantError(LorentzGasError, RuntimeError):
    pass


class MalformedFileError(LorentzGasError, ValueError):
    pass


class InconsistentInputsError(LorentzGasError, ValueError):
    pass
