# -*- coding: utf-8 -*-
"""Exceptions raised by comdef.

Every error derives from a builtin exception so that callers which do not
care about the details can catch ``ValueError`` or ``KeyError``.
"""


class LatticeError(ValueError):
    """Base class for invalid lattice input."""


class NotAPoset(LatticeError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"cover relation has a cycle: {self.cycle}")


class NotALattice(LatticeError):
    def __init__(self, pair, operation, labels=None):
        self.pair = tuple(pair)
        self.operation = operation
        shown = tuple(labels) if labels is not None else self.pair
        super().__init__(f"elements {shown[0]!r} and {shown[1]!r} have no unique {operation}")


class ElementError(LatticeError, KeyError):
    """An element id that is not part of the lattice."""


class FormulaError(ValueError):
    """Base class for formula errors."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message, position, text=None):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class MissingAssignment(FormulaError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"no value assigned to free variable(s) {', '.join(self.missing)}")


class ArityError(FormulaError):
    def __init__(self, expected, free):
        self.expected = expected
        self.free = tuple(free)
        super().__init__(
            f"expected {expected} free variable(s), formula has {len(self.free)}: {list(self.free)}"
        )


class CatalogError(KeyError):
    """Base class for catalog lookups."""

    def __str__(self):
        # KeyError quotes its argument
        return str(self.args[0]) if self.args else ""


class UnknownName(CatalogError):
    pass


class ParamOutOfRange(CatalogError, ValueError):
    pass


class ModelError(ValueError):
    """Base class for errors of the commutative variety model."""


class AlphabetOverflow(ModelError):
    pass


class BoundsTooSmall(ModelError):
    pass


class NotJoinClosed(ModelError):
    pass


class TopHasNoNilPart(ModelError):
    pass


class NotNil(ModelError):
    pass


class NotInUniverse(ModelError):
    pass
