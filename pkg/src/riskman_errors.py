#!/usr/bin/env python3
"""
RISKMAN error hierarchy

Every failure a pipeline stage can raise carries a stable ``code`` string.
The command line maps all of them to exit code 2; shape violations and
disjointness clashes are reported as data and never raised.
"""

from typing import Optional


class RiskmanError(Exception):
    """Base class for all pipeline errors"""

    code = "error"
    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class TermError(RiskmanError):
    """Invalid term value (malformed IRI or empty value)"""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ParseError(RiskmanError):
    """Syntax error in an input document or DSL file"""

    code = "syntax-error"

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, source: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.source = source

    def __str__(self) -> str:
        where = ""
        if self.source:
            where = self.source
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        if where:
            return f"{self.code} at {where.lstrip(':')}: {self.message}"
        return f"{self.code}: {self.message}"


class UnsupportedConstruct(ParseError):
    """Turtle feature outside the supported subset"""

    code = "unsupported-construct"


class UnknownPrefix(ParseError):
    """Prefixed name whose prefix was never declared"""

    code = "unknown-prefix"


class UnknownName(ParseError):
    """DSL name that is not part of the active vocabulary"""

    code = "unknown-name"


class TypeMisuse(RiskmanError):
    """Concept name used as predicate, or role name used as a type"""

    code = "type-misuse"


class CyclicHierarchy(RiskmanError):
    """Declared subclass hierarchy contains a cycle"""

    code = "cyclic-hierarchy"

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("subclass cycle through " + " -> ".join(self.cycle))


class UnsupportedAxiom(RiskmanError):
    """Axiom outside the supported EL fragment"""

    code = "unsupported"

    def __init__(self, reason: str, offending: Optional[str] = None):
        message = reason if offending is None else f"{reason}: {offending}"
        super().__init__(message)
        self.reason = reason
        self.offending = offending


class ResourceLimitExceeded(RiskmanError):
    """Saturation exceeded the configured assertion or time limit"""

    code = "resource-limit"

    def __init__(self, limit: str, value, observed):
        super().__init__(f"{limit} limit of {value} exceeded ({observed})")
        self.limit = limit
        self.value = value
        self.observed = observed


class InputNotFound(RiskmanError):
    """Input file is missing or unreadable"""

    code = "file-not-found"


class ConfigError(RiskmanError, ValueError):
    """Invalid configuration value"""

    code = "invalid-config"
