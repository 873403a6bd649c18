"""Non-negative magnitudes stored as natural logarithms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

NEG_INF = float("-inf")


@dataclass(frozen=True, order=True)
class LogNumber:
    log_value: float

    @property
    def zero(self) -> bool:
        return self.log_value == NEG_INF

    @classmethod
    def from_value(cls, x) -> "LogNumber":
        if x < 0:
            raise ValueError("LogNumber holds non-negative magnitudes only")
        if x == 0:
            return cls(NEG_INF)
        if isinstance(x, Fraction):
            return cls(math.log(x.numerator) - math.log(x.denominator))
        return cls(math.log(x))

    @classmethod
    def zero_value(cls) -> "LogNumber":
        return cls(NEG_INF)

    @classmethod
    def one(cls) -> "LogNumber":
        return cls(0.0)

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        if self.zero or other.zero:
            return LogNumber(NEG_INF)
        return LogNumber(self.log_value + other.log_value)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if other.zero:
            raise ZeroDivisionError("LogNumber division by zero")
        if self.zero:
            return self
        return LogNumber(self.log_value - other.log_value)

    def __pow__(self, e: float) -> "LogNumber":
        if self.zero:
            if e == 0:
                return LogNumber(0.0)
            return self
        return LogNumber(self.log_value * e)

    def __add__(self, other: "LogNumber") -> "LogNumber":
        a, b = self.log_value, other.log_value
        if a < b:
            a, b = b, a
        if b == NEG_INF:
            return LogNumber(a)
        return LogNumber(a + math.log1p(math.exp(b - a)))

    def value(self) -> float:
        """Plain float (may overflow to inf or underflow to 0)."""
        if self.zero:
            return 0.0
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    def ratio(self, other: "LogNumber") -> float:
        return (self / other).value()

    def __repr__(self) -> str:
        return f"LogNumber(log={self.log_value!r})"


def log_sum(terms) -> LogNumber:
    """Stable sum of LogNumbers."""
    logs = [t.log_value for t in terms if not t.zero]
    if not logs:
        return LogNumber(NEG_INF)
    top = max(logs)
    return LogNumber(top + math.log(math.fsum(math.exp(x - top) for x in logs)))
