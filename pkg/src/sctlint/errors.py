"""Exceptions raised while reading and validating rewrite systems."""

from __future__ import annotations


class SctLintError(Exception):
    """Base class; carries an optional (line, column) source location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"

    @property
    def kind(self) -> str:
        return type(self).__name__


class ParseError(SctLintError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.expected = expected
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(message, line, column)


class DuplicateBinder(SctLintError):
    pass


class UnknownSymbol(SctLintError):
    pass


class DuplicateDeclaration(SctLintError):
    pass


class RuleHeadUndeclared(SctLintError):
    pass


# rule validation
class RuleError(SctLintError):
    pass


class HeadNotFunction(RuleError):
    pass


class UnsaturatedHead(RuleError):
    pass


class NonPatternArgument(RuleError):
    def __init__(self, message: str, argument: int, line: int | None = None):
        self.argument = argument
        super().__init__(message, line)


class RhsNotBetaNormal(RuleError):
    pass


class UnboundRhsVariable(RuleError):
    pass


class UnusedRuleVariable(RuleError):
    pass


class DimensionMismatch(SctLintError):
    pass
