"""Exception hierarchy.

Evaluator failure modes (empty variety, complex roots, ...) are *data* and
live in :mod:`trioeval.evaluators`; the classes here are raised for bad
inputs and violated preconditions.
"""


class TrioEvalError(ValueError):
    """Base class for all data errors raised by this package."""


class EmptySketch(TrioEvalError):
    pass


class CounterOverflow(TrioEvalError, OverflowError):
    pass


class MissingLabel(TrioEvalError):
    pass


class ParseError(TrioEvalError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class InconsistentTruthColumn(ParseError):
    pass


class InfeasibleMoments(TrioEvalError):
    def __init__(self, message, label=None, event=None, value=None):
        self.label = label
        self.event = event
        self.value = value
        super().__init__(message)


class IndivisibleTestSize(TrioEvalError):
    pass


class NotRational(TrioEvalError, TypeError):
    pass


class NegativeRadicand(TrioEvalError):
    pass


class InvalidBracket(TrioEvalError):
    pass


class DegenerateAgreement(TrioEvalError):
    pass
