"""Truncated Taylor series over mpmath reals."""
from __future__ import annotations

from typing import Sequence

import mpmath as mp

__all__ = ["TaylorJet"]


class TaylorJet:
    """Taylor coefficients ``c_0 + c_1 e + ... + c_order e^order`` of a function.

    Products and quotients are cut at ``order``.  Scalars (int, float, mpf)
    mix freely with jets.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if len(coeffs) == 0:
            raise ValueError("a jet needs at least one coefficient")
        self.coeffs = [mp.mpf(c) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "TaylorJet":
        return cls([c] + [0] * order)

    def derivative(self, k: int):
        """k-th derivative at the expansion point, k! c_k."""
        if not 0 <= k <= self.order:
            raise IndexError(f"derivative {k} beyond jet order {self.order}")
        return mp.factorial(k) * self.coeffs[k]

    def _lift(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            if other.order != self.order:
                raise ValueError("jets of different order")
            return other
        return TaylorJet.constant(other, self.order)

    def __add__(self, other):
        o = self._lift(other)
        return TaylorJet([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return TaylorJet([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return TaylorJet([-a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, TaylorJet):
            s = mp.mpf(other)
            return TaylorJet([a * s for a in self.coeffs])
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        n = self.order
        return TaylorJet([mp.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TaylorJet):
            s = mp.mpf(other)
            return TaylorJet([a / s for a in self.coeffs])
        o = self._lift(other)
        b = o.coeffs
        if b[0] == 0:
            raise ZeroDivisionError("jet division by a series with zero constant term")
        a = self.coeffs
        q = []
        for k in range(self.order + 1):
            acc = a[k] - mp.fsum(q[i] * b[k - i] for i in range(k))
            q.append(acc / b[0])
        return TaylorJet(q)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __repr__(self) -> str:
        body = ", ".join(mp.nstr(c, 8) for c in self.coeffs)
        return f"TaylorJet([{body}])"
