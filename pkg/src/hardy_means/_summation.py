"""Compensated running sums for long prefix experiments.

One-shot reductions elsewhere in the package use ``math.fsum``, which is
exactly rounded.  The partial-sum experiments need an *incremental* sum
that stays accurate across 10^7 additions, hence this accumulator.
"""

from __future__ import annotations

__all__ = ["KahanSum"]


class KahanSum:
    """Kahan-Neumaier compensated accumulator.

    Tracks the running sum and a correction term so the result is accurate
    to a couple of ulps regardless of how many terms were added.
    """

    __slots__ = ("_sum", "_compensation")

    def __init__(self, start: float = 0.0):
        self._sum = float(start)
        self._compensation = 0.0

    def add(self, term: float) -> None:
        total = self._sum + term
        if abs(self._sum) >= abs(term):
            self._compensation += (self._sum - total) + term
        else:
            self._compensation += (term - total) + self._sum
        self._sum = total

    @property
    def value(self) -> float:
        return self._sum + self._compensation
