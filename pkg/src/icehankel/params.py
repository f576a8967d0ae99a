"""Model parameters, vertex weights and the scalar kernels of the disordered phase.

All kernels evaluate at the current :mod:`mpmath` working precision, or at
``bits`` when given.  Angles are stored exactly (either as a rational multiple
of pi or as an exact decimal) so they can be re-evaluated at any precision.
"""
from __future__ import annotations

import re
from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath as mp

from .errors import PhaseError

__all__ = [
    "Angle",
    "ModelParams",
    "VertexWeights",
    "PHASE_MARGIN",
    "make_params",
    "weights_of",
    "phi_value",
    "m_weight",
    "f_kernel",
    "potential_N",
    "potential_N_prime",
    "workprec",
]

PHASE_MARGIN = 1e-6

AngleLike = Union["Angle", int, float, str, Fraction, mp.mpf]

_PI_TOKEN = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$",
    re.IGNORECASE,
)


def workprec(bits):
    """Context manager fixing the working precision, or a no-op for ``None``."""
    return nullcontext() if bits is None else mp.workprec(int(bits))


@dataclass(frozen=True)
class Angle:
    """An angle held exactly: ``pi_multiple * pi`` or an exact rational ``value``.

    Exactly one of the two fields is set.
    """

    pi_multiple: Fraction | None = None
    value: Fraction | None = None

    @classmethod
    def parse(cls, x: AngleLike) -> "Angle":
        if isinstance(x, Angle):
            return x
        if isinstance(x, bool):
            raise TypeError("angle cannot be a bool")
        if isinstance(x, (int, Fraction)):
            return cls(value=Fraction(x))
        if isinstance(x, float):
            if x != x or x in (float("inf"), float("-inf")):
                raise PhaseError(f"non-finite angle {x!r}")
            # decimal semantics: 0.45 means 45/100, not the nearest double
            return cls(value=Fraction(repr(x)))
        if isinstance(x, mp.mpf):
            if not mp.isfinite(x):
                raise PhaseError(f"non-finite angle {x!r}")
            man, exp = x.man_exp
            return cls(value=Fraction(int(man)) * Fraction(2) ** int(exp))
        if isinstance(x, str):
            m = _PI_TOKEN.match(x)
            if m:
                num = int(m.group("num") or 1)
                den = int(m.group("den") or 1)
                sign = -1 if m.group("sign") == "-" else 1
                return cls(pi_multiple=Fraction(sign * num, den))
            try:
                return cls(value=Fraction(x.strip()))
            except ValueError:
                raise ValueError(f"cannot parse angle {x!r}") from None
        raise TypeError(f"unsupported angle type {type(x).__name__}")

    @property
    def is_zero(self) -> bool:
        v = self.pi_multiple if self.pi_multiple is not None else self.value
        return v == 0

    def mpf(self) -> mp.mpf:
        """Value in radians at the current working precision."""
        if self.pi_multiple is not None:
            q = self.pi_multiple
            return mp.pi * q.numerator / q.denominator
        q = self.value
        return mp.mpf(q.numerator) / q.denominator

    def __float__(self) -> float:
        with mp.workprec(64):
            return float(self.mpf())

    def __str__(self) -> str:
        if self.pi_multiple is not None:
            q = self.pi_multiple
            if q == 0:
                return "0"
            head = "pi" if abs(q.numerator) == 1 else f"{abs(q.numerator)}*pi"
            sign = "-" if q < 0 else ""
            return f"{sign}{head}" + (f"/{q.denominator}" if q.denominator != 1 else "")
        q = self.value
        return str(q.numerator) if q.denominator == 1 else str(float(q))


def _ratio(a: Angle, b: Angle) -> Fraction | None:
    """Exact a/b when both angles share a representation (or a is zero)."""
    if a.is_zero:
        return Fraction(0)
    if a.pi_multiple is not None and b.pi_multiple is not None:
        return a.pi_multiple / b.pi_multiple
    if a.value is not None and b.value is not None:
        return a.value / b.value
    return None


@dataclass(frozen=True)
class ModelParams:
    """Disordered-phase parameters with ``a = sin(gamma - t)``, ``b = sin(gamma + t)``.

    ``gamma``, ``t`` and ``zeta`` are properties returning mpf values at the
    current precision; the exact angle specs live in ``gamma_angle`` and
    ``t_angle``.
    """

    gamma_angle: Angle
    t_angle: Angle

    @property
    def gamma(self) -> mp.mpf:
        return self.gamma_angle.mpf()

    @property
    def t(self) -> mp.mpf:
        return self.t_angle.mpf()

    @property
    def zeta(self) -> mp.mpf:
        exact = self.zeta_exact
        if exact is not None:
            return mp.mpf(exact.numerator) / exact.denominator
        return self.t / self.gamma

    @property
    def zeta_exact(self) -> Fraction | None:
        return _ratio(self.t_angle, self.gamma_angle)

    @property
    def gamma_over_pi(self) -> Fraction | None:
        """gamma/pi as an exact rational when gamma was given as a multiple of pi."""
        return self.gamma_angle.pi_multiple

    @property
    def t_is_zero(self) -> bool:
        return self.t_angle.is_zero

    def floats(self) -> tuple[float, float, float]:
        """(gamma, t, zeta) as Python floats."""
        with mp.workprec(64):
            return float(self.gamma), float(self.t), float(self.zeta)

    def __str__(self) -> str:
        return f"ModelParams(gamma={self.gamma_angle}, t={self.t_angle})"

    @classmethod
    def from_zeta(cls, gamma: AngleLike, zeta: AngleLike) -> "ModelParams":
        """Build parameters from gamma and the ratio zeta = t/gamma."""
        g = Angle.parse(gamma)
        z = Angle.parse(zeta)
        if z.pi_multiple is not None:
            raise ValueError("zeta is dimensionless; pi tokens are not allowed")
        if g.pi_multiple is not None:
            t = Angle(pi_multiple=g.pi_multiple * z.value)
        else:
            t = Angle(value=g.value * z.value)
        return make_params(g, t)


@dataclass(frozen=True)
class VertexWeights:
    a: mp.mpf
    b: mp.mpf
    c: mp.mpf
    delta: mp.mpf


def make_params(gamma: AngleLike, t: AngleLike, margin: float = PHASE_MARGIN) -> ModelParams:
    """Validate ``(gamma, t)`` against the disordered window and return params.

    Raises :class:`PhaseError` unless ``margin <= gamma <= pi/2 - margin`` and
    ``gamma - |t| >= margin``.
    """
    p = ModelParams(Angle.parse(gamma), Angle.parse(t))
    with mp.workprec(128):
        g, tt = p.gamma, p.t
        if not (g > margin and g < mp.pi / 2 - margin):
            raise PhaseError(f"gamma={mp.nstr(g, 12)} outside (0, pi/2) with margin {margin}")
        if g - abs(tt) < margin:
            raise PhaseError(f"|t|={mp.nstr(abs(tt), 12)} not below gamma={mp.nstr(g, 12)}")
    return p


def weights_of(p: ModelParams, bits: int | None = None) -> VertexWeights:
    with workprec(bits):
        g, t = p.gamma, p.t
        a = mp.sin(g - t)
        b = mp.sin(g + t)
        c = mp.sin(2 * g)
        delta = (a * a + b * b - c * c) / (2 * a * b)
        return VertexWeights(+a, +b, +c, delta)


def phi_value(p: ModelParams, bits: int | None = None) -> mp.mpf:
    """phi(t) = sin(2 gamma) / (sin(gamma + t) sin(gamma - t)); this is also h_0."""
    with workprec(bits):
        g, t = p.gamma, p.t
        return mp.sin(2 * g) / (mp.sin(g + t) * mp.sin(g - t))


def m_weight(lam, p: ModelParams, bits: int | None = None) -> mp.mpf:
    """Laplace density m(lambda) = sinh(lambda (pi - 2 gamma)/2) / sinh(lambda pi / 2)."""
    with workprec(bits):
        lam = mp.mpf(lam)
        g = p.gamma
        if lam == 0:
            return (mp.pi - 2 * g) / mp.pi
        x = abs(lam)
        # ratio of sinh written with exponentials so large |lambda| does not overflow
        num = -mp.expm1(-x * (mp.pi - 2 * g))
        den = -mp.expm1(-x * mp.pi)
        return mp.exp(-x * g) * num / den


def f_kernel(mu, p: ModelParams, bits: int | None = None) -> mp.mpf:
    """Subtracted kernel f(mu) = q coth(q mu) - (q-1) coth((q-1) mu) - sgn(mu), q = pi/(2 gamma).

    Odd, exponentially decaying, with a jump from +1 to -1 across the origin.
    ``f(0)`` returns 0 by the odd-symmetry convention.
    """
    with workprec(bits):
        mu = mp.mpf(mu)
        if mu == 0:
            return mp.mpf(0)
        prec = mp.mp.prec
        # the two 1/mu poles cancel; carry guard bits proportional to -log2|mu|
        extra = 16 + max(0, -int(mp.floor(mp.log(abs(mu), 2))))
        with mp.workprec(prec + extra):
            q = mp.pi / (2 * p.gamma)
            r = q - 1
            x = abs(mu)
            val = 2 * q / mp.expm1(2 * q * x) - 2 * r / mp.expm1(2 * r * x)
        # round back to the caller's precision
        return +(val if mu > 0 else -val)


def potential_N(mu, N: int, p: ModelParams, bits: int | None = None) -> mp.mpf:
    """Rescaled potential V_N(mu) = -zeta mu - (1/N) ln[sinh(N mu (q-1)) / sinh(N mu q)]."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with workprec(bits):
        mu = mp.mpf(mu)
        q = mp.pi / (2 * p.gamma)
        r = q - 1
        if mu == 0:
            ratio_log = mp.log(r / q)
        else:
            x = N * abs(mu)
            # ln sinh(r x) - ln sinh(q x), with q - r = 1, in overflow-free form
            ratio_log = (q - r) * (-x) + mp.log(mp.expm1(-2 * r * x) / mp.expm1(-2 * q * x))
        return -p.zeta * mu - ratio_log / N


def potential_N_prime(mu, N: int, p: ModelParams, bits: int | None = None) -> mp.mpf:
    """V_N'(mu) = sgn(mu) - zeta + f(N mu); at mu = 0 returns -zeta."""
    with workprec(bits):
        mu = mp.mpf(mu)
        return mp.sign(mu) - p.zeta + f_kernel(N * mu, p)
