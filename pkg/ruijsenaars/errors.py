class RuijsenaarsException(Exception):
    pass


class DomainError(RuijsenaarsException):
    """Inadmissible input: an invariant of a parameter type is violated."""
    pass


class PoleError(DomainError):
    def __init__(self, message, location=None, order=1):
        super().__init__(message)
        self.location = location
        self.order = order


class BranchError(DomainError):
    pass


class UnsupportedError(DomainError):
    pass


class NumericalError(RuijsenaarsException):
    pass


class DivergenceError(NumericalError):
    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class EvaluationError(NumericalError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class PinchError(NumericalError):
    pass


class PrecisionError(NumericalError):
    pass
