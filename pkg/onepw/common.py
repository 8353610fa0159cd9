from __future__ import annotations

from typing import Optional


class ArgumentError(Exception):
    pass


class StructuralError(Exception):
    pass


class SizeError(Exception):
    pass


class LoadError(Exception):
    pass


class ParseError(Exception):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
