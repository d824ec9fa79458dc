"""Exception hierarchy for the lab.

Input problems derive from ``ValueError`` and computation failures from
``ArithmeticError``/``RuntimeError`` so the CLI can map them to exit codes
without knowing every subclass.
"""


class DiophantError(Exception):
    """Base class for every error raised by the lab."""


# --- bad input ---
class DomainError(DiophantError, ValueError):
    pass


class EmptyInput(DiophantError, ValueError):
    pass


class IndexOutOfRange(DiophantError, IndexError):
    pass


class WrongDimension(DiophantError, ValueError):
    pass


class PerfectPower(DiophantError, ValueError):
    pass


class SystemFormatError(DiophantError, ValueError):
    """A cone-system file could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class TooShort(DiophantError, ValueError):
    pass


class NotSameSubspace(DiophantError, ValueError):
    pass


# --- computation outcomes ---
class NonSquare(DiophantError, ArithmeticError):
    pass


class Singular(DiophantError, ArithmeticError):
    pass


class NoSignChange(DiophantError, ArithmeticError):
    pass


class OutOfRange(DiophantError, ArithmeticError):
    pass


class ExactHit(DiophantError, RuntimeError):
    """Some certified error vanished: the target is rational at this precision."""

    def __init__(self, q: int, records: list | None = None):
        self.q = q
        self.records = records or []
        super().__init__(f"exact hit at q={q}: target is rational at the declared precision")


class NonMonotone(DiophantError, RuntimeError):
    """The feasibility predicate flipped more than once along the g mesh."""

    def __init__(self, flips: list):
        self.flips = flips
        super().__init__(f"feasibility flips {len(flips)} times along the g mesh")


class NoCriticalValue(DiophantError, RuntimeError):
    pass


class NotUnique(DiophantError, ArithmeticError):
    """More than one positive root where the family has exactly one."""
