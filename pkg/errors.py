"""Exception hierarchy shared by every module.

Suites catch ``BvkError`` per case and turn it into a failed report; only
``ConfigError`` is allowed to reach the command line.
"""

from __future__ import annotations

from typing import Optional


class BvkError(Exception):
    """Base class for all verifier errors."""


class ConfigError(BvkError):
    pass


class NullConeError(BvkError):
    def __init__(self, value: object, index: Optional[int] = None) -> None:
        where = f" (grid index {index})" if index is not None else ""
        super().__init__(f"value lies in the null cone: {value}{where}")
        self.value = value
        self.index = index


class DslSyntaxError(BvkError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(BvkError):
    def __init__(self, name: str, offset: Optional[int] = None) -> None:
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class EvaluationError(BvkError):
    def __init__(self, message: str, index: Optional[int] = None) -> None:
        where = f" (grid index {index})" if index is not None else ""
        super().__init__(f"{message}{where}")
        self.index = index


class SubalgebraError(BvkError):
    def __init__(self, axis: str, residual: float) -> None:
        super().__init__(f"result left C({axis}): out-of-subalgebra residual {residual:.3e}")
        self.axis = axis
        self.residual = residual


class DegeneratePair(BvkError):
    def __init__(self, cls: str, index: Optional[int], value: float) -> None:
        super().__init__(
            f"{cls} generating pair is degenerate at grid index {index}: "
            f"nondegeneracy measure {value:.3e}"
        )
        self.cls = cls
        self.index = index
        self.value = value


class VanishingF0(BvkError):
    def __init__(self, index: Optional[int], ratio: float) -> None:
        super().__init__(f"f0 nearly vanishes at grid index {index}: min|f0|/max|f0| = {ratio:.3e}")
        self.index = index
        self.ratio = ratio


class NotComplexValued(BvkError):
    def __init__(self, name: str, residual: float) -> None:
        super().__init__(f"{name} is not C(i1)-valued: i2/j residual {residual:.3e}")
        self.name = name
        self.residual = residual


class NotVekuaSolution(BvkError):
    def __init__(self, residual: float, tolerance: float) -> None:
        super().__init__(f"main Vekua residual {residual:.3e} exceeds tolerance {tolerance:.1e}")
        self.residual = residual
        self.tolerance = tolerance


class IoError(BvkError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"cannot write report to {path}: {reason}")
        self.path = path
        self.reason = reason
