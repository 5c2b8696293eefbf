'''Exceptions raised by the floquetmarkov actions and numerical modules
'''


class ValidationError(Exception):
    '''Invalid user input; carries a dict of field -> list of messages'''

    def __init__(self, error_dict):
        self.error_dict = error_dict
        super(ValidationError, self).__init__(error_dict)

    def __str__(self):
        parts = []
        for key, messages in self.error_dict.items():
            parts.append("{}: {}".format(key, "; ".join(messages)))
        return " | ".join(parts)


class FloquetMarkovError(Exception):
    '''Base class for numerical and contract failures'''

    def __init__(self, message, **diagnostics):
        self.message = message
        self.diagnostics = diagnostics
        super(FloquetMarkovError, self).__init__(message)

    def __str__(self):
        if not self.diagnostics:
            return self.message
        details = ", ".join(
            "{}={}".format(key, value)
            for key, value in sorted(self.diagnostics.items())
        )
        return "{} ({})".format(self.message, details)


class InvalidDimensionError(FloquetMarkovError):
    pass


class ShapeError(FloquetMarkovError):
    pass


class ContractViolationError(FloquetMarkovError):
    pass


class ConfigurationError(FloquetMarkovError):
    pass


class SingularFrameError(FloquetMarkovError):
    '''A drive denominator vanishes (pump on a resonance)'''


class UnstableFrameError(FloquetMarkovError):
    '''The normal-mode transformation yields a non-positive frequency'''


class ConvergenceError(FloquetMarkovError):
    pass


class IntegrationError(FloquetMarkovError):
    pass


class NumericalRankError(FloquetMarkovError):
    pass


class AliasingError(FloquetMarkovError):
    pass


class PreconditionError(FloquetMarkovError):
    pass


class KerrIdentificationError(FloquetMarkovError):
    '''The 0->1 and 1->2 ladder lines could not be found'''

    def __init__(self, message, candidates=(), **diagnostics):
        self.candidates = list(candidates)
        super(KerrIdentificationError, self).__init__(
            message, candidates=len(self.candidates), **diagnostics
        )

    def __str__(self):
        text = super(KerrIdentificationError, self).__str__()
        for line in self.candidates[:10]:
            text += "\n  candidate {}".format(line)
        return text


class TruncationError(FloquetMarkovError):
    pass


class OracleTimeoutError(FloquetMarkovError):
    pass


class FigureDataError(FloquetMarkovError):
    '''Reports lack observables a figure needs'''

    def __init__(self, figure, missing):
        self.figure = figure
        self.missing = sorted(missing)
        super(FigureDataError, self).__init__(
            "{} is missing columns: {}".format(figure, ", ".join(self.missing))
        )
