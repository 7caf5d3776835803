"""Exception hierarchy shared by every module.

Each error carries the name the CLI reports in its ``error`` field, so the
class name is part of the public surface.
"""


class SetCalcError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class NotANatural(SetCalcError):
    pass


class RankBoundExceeded(SetCalcError):
    pass


class SizeBoundExceeded(SetCalcError):
    pass


class SetSyntaxError(SetCalcError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotATupleAtArity(SetCalcError):
    pass


class LabelOutsideUniverse(SetCalcError):
    pass


class NodeNotInTree(SetCalcError):
    pass


class NotOntoTransitiveClosure(SetCalcError):
    pass


class AmbiguousFlatEncoding(SetCalcError):
    pass


class TreeFormatError(SetCalcError):
    pass


class FormulaSyntaxError(SetCalcError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariable(SetCalcError):
    pass


class UnknownFormulaName(SetCalcError):
    pass


class TranslationError(SetCalcError):
    pass


class UntranslatableBoundedQuantifier(TranslationError):
    pass


class UntranslatableAtom(TranslationError):
    pass


class NotCongruent(SetCalcError):
    pass


class UniverseNotClosed(SetCalcError):
    pass


class SliceNotATree(SetCalcError):
    pass


class WitnessNotInUniverse(SetCalcError):
    pass


class TreeNotInUniverse(SetCalcError):
    pass


class NotAFamilyMember(SetCalcError):
    pass


class ElementNotInDomain(SetCalcError):
    pass


class SelftestFailed(SetCalcError):
    """Some acceptance suite failed; carries the per-suite results."""

    def __init__(self, message: str, result=None, text: str = ""):
        super().__init__(message)
        self.result = result
        self.text = text
