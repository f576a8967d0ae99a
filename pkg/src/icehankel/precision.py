"""Precision-tagged reals and the doubling-based precision certificate."""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

import mpmath as mp

from .errors import NonConvergence

__all__ = [
    "PrecisionReal",
    "Certified",
    "agreement_digits",
    "scaled",
    "adaptive_precision",
    "start_bits_for",
    "DEFAULT_MAX_BITS",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_BITS = 1 << 20
MIN_BITS = 64


@dataclass(frozen=True)
class PrecisionReal:
    """An mpf value together with the binary precision it was computed at.

    Arithmetic between two operands runs at the larger of their precisions.
    """

    value: mp.mpf
    bits: int

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise ValueError(f"bits must be >= {MIN_BITS}")

    @classmethod
    def of(cls, x, bits: int) -> "PrecisionReal":
        with mp.workprec(bits):
            return cls(+mp.mpf(x), bits)

    def _binary(self, other, op):
        if isinstance(other, PrecisionReal):
            bits = max(self.bits, other.bits)
            rhs = other.value
        else:
            bits = self.bits
            rhs = other
        with mp.workprec(bits):
            return PrecisionReal(op(self.value, rhs), bits)

    def __add__(self, o):
        return self._binary(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, o):
        return self._binary(o, lambda a, b: a - b)

    def __rsub__(self, o):
        return self._binary(o, lambda a, b: b - a)

    def __mul__(self, o):
        return self._binary(o, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._binary(o, lambda a, b: a / b)

    def __rtruediv__(self, o):
        return self._binary(o, lambda a, b: b / a)

    def __neg__(self):
        return PrecisionReal(-self.value, self.bits)

    def __abs__(self):
        return PrecisionReal(abs(self.value), self.bits)

    def __float__(self) -> float:
        return float(self.value)

    def _cmp_value(self, o):
        return o.value if isinstance(o, PrecisionReal) else o

    def __lt__(self, o):
        return self.value < self._cmp_value(o)

    def __le__(self, o):
        return self.value <= self._cmp_value(o)

    def __gt__(self, o):
        return self.value > self._cmp_value(o)

    def __ge__(self, o):
        return self.value >= self._cmp_value(o)

    def log(self) -> "PrecisionReal":
        with mp.workprec(self.bits):
            return PrecisionReal(mp.log(self.value), self.bits)

    def to_string(self, digits: int | None = None) -> str:
        """Decimal string with ``digits`` significant digits (default: all bits)."""
        if digits is None:
            digits = max(1, int(self.bits * math.log10(2)))
        with mp.workprec(self.bits + 16):
            return mp.nstr(self.value, digits, strip_zeros=False, min_fixed=-5, max_fixed=25)

    def __str__(self) -> str:
        return self.to_string(min(30, int(self.bits * 0.30103)))


@dataclass(frozen=True)
class Certified:
    """Result of :func:`adaptive_precision`: value at ``bits`` with ``digits`` verified."""

    value: Any
    digits: float
    bits: int


def _leaves(x):
    """Flatten a result into a list of (value, scale) pairs for comparison."""
    if isinstance(x, PrecisionReal):
        return [(x.value, None)]
    if isinstance(x, mp.mpf):
        return [(x, None)]
    if isinstance(x, (int, float)):
        return [(mp.mpf(x), None)]
    if hasattr(x, "certificate_view"):
        return _leaves(x.certificate_view())
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        out = []
        for f in dataclasses.fields(x):
            out.extend(_leaves(getattr(x, f.name)))
        return out
    if isinstance(x, dict):
        out = []
        for k in sorted(x):
            out.extend(_leaves(x[k]))
        return out
    if isinstance(x, (list, tuple)):
        if len(x) == 2 and x and isinstance(x[1], _Scale):
            v = x[0] if isinstance(x[0], mp.mpf) else mp.mpf(x[0])
            return [(v, x[1].scale)]
        out = []
        for v in x:
            out.extend(_leaves(v))
        return out
    if hasattr(x, "coeffs"):
        return _leaves(list(x.coeffs))
    raise TypeError(f"cannot compare results of type {type(x).__name__}")


class _Scale:
    """Marks a leaf whose agreement is measured against an absolute scale."""

    __slots__ = ("scale",)

    def __init__(self, scale):
        self.scale = mp.mpf(scale)


def scaled(value, scale):
    """Wrap ``value`` so that agreement is judged relative to ``scale``."""
    return (value, _Scale(scale))


def agreement_digits(a, b, cap: float = 1e6) -> float:
    """Number of agreeing significant decimal digits between two results.

    Leaves are compared relatively, ``|x - y| / max(|x|, |y|)``; leaves tagged
    with :func:`scaled` use their scale instead.  Identical results return ``cap``.
    """
    la, lb = _leaves(a), _leaves(b)
    if len(la) != len(lb):
        raise ValueError("results differ in shape")
    worst = mp.mpf(0)
    with mp.workprec(64):
        for (x, s), (y, _) in zip(la, lb):
            # exact difference; rounding it to 64 bits afterwards is harmless
            diff = abs(mp.fsub(x, y, exact=True))
            if diff == 0:
                continue
            ref = s if s is not None else max(abs(x), abs(y))
            if ref == 0:
                return 0.0
            worst = max(worst, diff / ref)
        if worst == 0:
            return cap
        return float(min(cap, -mp.log10(worst)))


def start_bits_for(N: int) -> int:
    return max(256, 16 * int(N))


def adaptive_precision(
    run: Callable[[int], Any],
    target_digits: int = 30,
    start_bits: int = 256,
    max_bits: int = DEFAULT_MAX_BITS,
) -> Certified:
    """Run ``run(bits)`` at p and 2p bits, doubling p until ``target_digits`` agree.

    The returned value is the 2p-bit result; ``digits`` is the agreement with
    the p-bit run, a conservative estimate of its accuracy.
    """
    bits = int(start_bits)
    if 2 * bits > max_bits:
        raise NonConvergence(f"start precision {bits} leaves no room below max_bits={max_bits}")
    low = run(bits)
    while True:
        high_bits = 2 * bits
        if high_bits > max_bits:
            raise NonConvergence(
                f"no {target_digits}-digit agreement up to {bits} bits (max_bits={max_bits})"
            )
        high = run(high_bits)
        digits = agreement_digits(low, high)
        log.debug("precision %d vs %d bits: %.1f digits agree", bits, high_bits, digits)
        if digits >= target_digits:
            return Certified(high, digits, high_bits)
        bits, low = high_bits, high
