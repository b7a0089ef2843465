"""Exception hierarchy shared by every module of the package."""


class TransducerError(ValueError):
    """Base class for invalid machines and invalid inputs."""


class EmptyMachine(TransducerError):
    pass


class UndeclaredSymbol(TransducerError):
    pass


class UndeclaredState(TransducerError):
    pass


class ArityMismatch(TransducerError):
    pass


class DuplicateTransitionOnSequentialFlag(TransducerError):
    """A machine declared sequential has two transitions on one (state, letter)."""


class AlphabetMismatch(TransducerError):
    pass


class NonSequentialComponent(TransducerError):
    pass


class IndexOutOfRange(TransducerError):
    pass


class EmptyWord(TransducerError):
    pass


class BudgetNegative(TransducerError):
    pass


class PredicateNotMonotone(RuntimeError):
    pass


class AmbiguousComponent(TransducerError):
    pass


class DomainMismatch(TransducerError):
    pass


class CapExceeded(TransducerError):
    pass


class FstSyntaxError(TransducerError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class EmptyDocument(FstSyntaxError):
    pass


class DuplicateName(FstSyntaxError):
    pass
