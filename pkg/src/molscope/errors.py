"""Exception types shared across molscope."""


class MolscopeError(Exception):
    pass


class LatinSquareError(MolscopeError, ValueError):
    """Base class for grids that are not latin squares."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BadSymbol(LatinSquareError):
    pass


class DuplicateInRow(LatinSquareError):
    pass


class DuplicateInColumn(LatinSquareError):
    pass


class SizeMismatch(MolscopeError, ValueError):
    pass


class NotOrthogonal(MolscopeError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InvalidColumns(MolscopeError, ValueError):
    pass


class WidthExceeded(MolscopeError, ValueError):
    pass


class CatalogueOverflow(MolscopeError, RuntimeError):
    pass


class NoTransversals(MolscopeError, ValueError):
    pass


class NonIntegral(MolscopeError, ArithmeticError):
    pass


class UnsupportedOrder(MolscopeError, ValueError):
    pass


class ParseError(MolscopeError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
