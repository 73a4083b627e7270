"""
errors.py

Exception hierarchy of the reasoning engine.

Reasoning outcomes (chase failure, exhausted budgets, unknown containment) are returned as values.
Exceptions are reserved for bad input and broken internal preconditions.
"""


class ChasekitError(Exception):
    """Base class of every error raised by chasekit."""


class UsageError(ChasekitError):
    """An operation was called with arguments outside its contract."""


class ProgramSyntaxError(ChasekitError):
    """
    The program text does not follow the grammar.

    Attributes:
        line (int): 1-based line of the offending token.
        column (int): 1-based column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ArityMismatchError(ProgramSyntaxError):
    """A predicate is used with two different arities."""


class UnsafeRuleError(ChasekitError):
    """A rule mentions a head variable or constant that is not bound by its body."""


class StaleTriggerError(ChasekitError):
    """A trigger was applied although its body image is no longer in the instance."""


class CloudError(ChasekitError):
    """An atom set mentions nulls that are neither in the anchor nor in the database."""


class CloudBoundViolation(ChasekitError):
    """A computed cloud is larger than the size bound derived from the schema."""


class NonInnocuousEgdError(ChasekitError):
    """
    The blocking chase met an EGD application that did not shrink the instance.

    Attributes:
        step: The offending EGD step record.
    """

    def __init__(self, step):
        super().__init__(f"non-innocuous EGD application: {step}")
        self.step = step
