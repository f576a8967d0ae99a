"""Equilibrium measure of the kink potential V(mu) = -zeta mu + |mu| and its finite-N corrections.

Everything here runs in double precision.  The closed forms use :mod:`cmath`
principal branches; quadratures go through :func:`scipy.integrate.quad`,
with the Cauchy weight (QUADPACK QAWC) for principal values.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import BranchError, QuadratureError, RootFindError
from .params import ModelParams

__all__ = [
    "EquilibriumData",
    "CorrectedEndpoints",
    "endpoints",
    "resolvent",
    "density",
    "partial_integral",
    "total_mass",
    "g_function",
    "boundary_g",
    "g_prime_numeric",
    "potential_V",
    "h_function",
    "h_endpoint_values",
    "h_endpoint_numeric",
    "equilibrium_residual",
    "variational_inequality",
    "log_potential",
    "f_array",
    "k_kernel",
    "k_moment_C",
    "k_integral",
    "endpoint_system",
    "endpoint_jacobian",
    "endpoint_corrections",
    "corrected_endpoints",
    "corrected_endpoints_derived",
    "endpoints_oracle",
    "density_correction",
    "prop52_grid",
    "prop52_scaled_sup",
    "m_transform",
    "m_transform_direct",
]

QUAD_EPS = 1e-13
DELTAS = (1e-4, 1e-5, 1e-6)


def _gz(p: ModelParams) -> tuple[float, float]:
    g, _, z = p.floats()
    return g, z


def _decay(p: ModelParams) -> float:
    """Rate 2(pi/(2 gamma) - 1) of the exponential decay of f."""
    g, _ = _gz(p)
    return 2 * (math.pi / (2 * g) - 1)


def _quad(fun, a, b, **kw):
    kw.setdefault("epsabs", QUAD_EPS)
    kw.setdefault("epsrel", QUAD_EPS)
    kw.setdefault("limit", 400)
    val, err = integrate.quad(fun, a, b, **kw)[:2]
    return val, err


# ---------------------------------------------------------------------------
# limiting measure

@dataclass(frozen=True)
class EquilibriumData:
    alpha: float
    beta: float
    l: float
    params: ModelParams


def endpoints(p: ModelParams) -> EquilibriumData:
    """alpha = -pi tan(pi(1 - zeta)/4), beta = pi tan(pi(1 + zeta)/4), l = 2 ln(beta - alpha) - 2 - 4 ln 2."""
    _, z = _gz(p)
    a = -math.pi * math.tan(math.pi * (1 - z) / 4)
    b = math.pi * math.tan(math.pi * (1 + z) / 4)
    return EquilibriumData(a, b, 2 * math.log(b - a) - 2 - 4 * math.log(2), p)


def _on_support(z: complex, a: float, b: float) -> bool:
    return z.imag == 0 and a <= z.real <= b


def resolvent(z, p: ModelParams, eq: EquilibriumData | None = None) -> complex:
    """Cauchy transform of the density, with principal square roots and logarithm."""
    eq = eq or endpoints(p)
    a, b = eq.alpha, eq.beta
    z = complex(z)
    if _on_support(z, a, b):
        raise BranchError(f"z={z} lies on the support [{a}, {b}]")
    _, zeta = _gz(p)
    num = cmath.sqrt(b * (z - a)) - 1j * cmath.sqrt(-a * (z - b))
    den = cmath.sqrt(z * (b - a))
    return (1 - zeta) / 2 + 2 / (1j * math.pi) * cmath.log(num / den)


def density(mu: float, p: ModelParams, eq: EquilibriumData | None = None) -> float:
    """rho(mu) = (2/pi^2) ln[(sqrt(beta(mu - alpha)) + sqrt(-alpha(beta - mu))) / sqrt(|mu|(beta - alpha))]."""
    eq = eq or endpoints(p)
    a, b = eq.alpha, eq.beta
    if not a <= mu <= b:
        raise ValueError(f"mu={mu} outside [{a}, {b}]")
    if mu in (a, b):
        return 0.0
    if mu == 0:
        return math.inf
    num = math.sqrt(b * (mu - a)) + math.sqrt(-a * (b - mu))
    return 2 / math.pi**2 * math.log(num / math.sqrt(abs(mu) * (b - a)))


def partial_integral(mu: float, p: ModelParams, eq: EquilibriumData | None = None) -> float:
    """Mass of [mu, beta] in closed form: -mu rho(mu) + (2/pi) atan sqrt((beta - mu)/(mu - alpha))."""
    eq = eq or endpoints(p)
    a, b = eq.alpha, eq.beta
    if not a <= mu <= b:
        raise ValueError(f"mu={mu} outside [{a}, {b}]")
    if mu == a:
        return 1.0
    head = 0.0 if mu == 0 else -mu * density(mu, p, eq)
    return head + 2 / math.pi * math.atan(math.sqrt((b - mu) / (mu - a)))


def total_mass(p: ModelParams, eq: EquilibriumData | None = None) -> tuple[float, float]:
    """(mass of [alpha, 0], mass of [0, beta]) by adaptive quadrature.

    The logarithmic singularity sits at an interval end, where the
    extrapolating QAGS rule handles it.
    """
    eq = eq or endpoints(p)
    rho = lambda x: density(x, p, eq)
    left, e1 = _quad(rho, eq.alpha, 0.0)
    right, e2 = _quad(rho, 0.0, eq.beta)
    if max(e1, e2) > 1e-10:
        raise QuadratureError(f"mass quadrature error {max(e1, e2):.2e}")
    return left, right


def g_function(z, p: ModelParams, eq: EquilibriumData | None = None) -> complex:
    """g(z) = z omega(z) + 2 log(sqrt(z - alpha) + sqrt(z - beta)) - (1 + 2 ln 2), off (-inf, beta]."""
    eq = eq or endpoints(p)
    z = complex(z)
    if z.imag == 0 and z.real <= eq.beta:
        raise BranchError(f"z={z} lies on the cut (-inf, {eq.beta}]")
    root = cmath.sqrt(z - eq.alpha) + cmath.sqrt(z - eq.beta)
    return z * resolvent(z, p, eq) + 2 * cmath.log(root) - (1 + 2 * math.log(2))


def _richardson(values: Sequence[complex], deltas: Sequence[float]) -> complex:
    """Value at delta = 0 of the polynomial through (delta_i, value_i)."""
    x = np.asarray(deltas, dtype=float)
    y = np.asarray(values, dtype=complex)
    V = np.vander(x, len(x))
    coef = np.linalg.solve(V, y)
    return complex(coef[-1])


def boundary_g(mu: float, p: ModelParams, eq: EquilibriumData | None = None, deltas=DELTAS) -> complex:
    """g(mu + i0) by evaluation at mu + i delta and Richardson extrapolation in delta."""
    eq = eq or endpoints(p)
    vals = [g_function(complex(mu, d), p, eq) for d in deltas]
    return _richardson(vals, deltas)


def _cut_distance(z: complex, beta: float) -> float:
    return abs(z.imag) if z.real <= beta else abs(z - beta)


def g_prime_numeric(z, p: ModelParams, eq: EquilibriumData | None = None, points: int = 64) -> complex:
    """g'(z) as the trapezoid-rule Cauchy integral on a circle of half the distance to the cut."""
    eq = eq or endpoints(p)
    z = complex(z)
    r = 0.5 * _cut_distance(z, eq.beta)
    if r == 0:
        raise BranchError(f"z={z} lies on the cut (-inf, {eq.beta}]")
    w = r * np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.array([g_function(z + v, p, eq) for v in w])
    return complex(np.mean(vals / w))


def potential_V(mu: float, p: ModelParams) -> float:
    _, z = _gz(p)
    return -z * mu + abs(mu)


def equilibrium_residual(grid: Iterable[float], p: ModelParams, eq: EquilibriumData | None = None) -> float:
    """sup over the grid of |g(mu + i0) + g(mu - i0) - V(mu) - l|.

    By conjugate symmetry the two boundary values sum to 2 Re g(mu + i0).
    """
    eq = eq or endpoints(p)
    worst = 0.0
    for mu in grid:
        mu = float(mu)
        if not eq.alpha < mu < eq.beta or mu == 0:
            raise ValueError(f"grid point {mu} not in (alpha, beta) minus 0")
        r = 2 * boundary_g(mu, p, eq).real - potential_V(mu, p) - eq.l
        worst = max(worst, abs(r))
    return worst


def variational_inequality(points: Iterable[float], p: ModelParams, eq: EquilibriumData | None = None) -> list:
    """2 Re g(mu + i0) - V(mu) - l at real points outside [alpha, beta]; all should be negative."""
    eq = eq or endpoints(p)
    out = []
    for mu in points:
        mu = float(mu)
        if eq.alpha <= mu <= eq.beta:
            raise ValueError(f"{mu} is inside the support")
        gv = g_function(mu, p, eq) if mu > eq.beta else boundary_g(mu, p, eq)
        out.append(2 * gv.real - potential_V(mu, p) - eq.l)
    return out


def log_potential(mu: float, p: ModelParams, eq: EquilibriumData | None = None) -> float:
    """int rho(x) ln|mu - x| dx by quadrature, split at the two log singularities."""
    eq = eq or endpoints(p)
    cuts = sorted({eq.alpha, 0.0, min(max(mu, eq.alpha), eq.beta), eq.beta})
    fun = lambda x: density(x, p, eq) * math.log(abs(mu - x)) if x != mu else 0.0
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if hi > lo:
            total += _quad(fun, lo, hi)[0]
    return total


def h_function(z, p: ModelParams, eq: EquilibriumData | None = None) -> complex:
    """h(z) from the right-half-plane form for Re z >= 0 and the left-half-plane form otherwise.

    At the endpoints the removable 0/0 is replaced by the limits
    ``4/((-alpha)(beta - alpha))`` and ``4/(beta(beta - alpha))``.
    """
    eq = eq or endpoints(p)
    a, b = eq.alpha, eq.beta
    z = complex(z)
    if z.real == 0:
        raise BranchError("h is not defined on the imaginary axis")
    if z == a or z == b:
        return complex(h_endpoint_values(p, eq)["h_alpha" if z == a else "h_beta"])
    if z.real > 0:
        lg = cmath.log((cmath.sqrt(b * (z - a)) - 1j * cmath.sqrt(-a * (z - b))) / cmath.sqrt(z * (b - a)))
        return 4j / (math.pi * cmath.sqrt((z - a) * (z - b))) * lg
    lg = cmath.log((cmath.sqrt(-a * (b - z)) + 1j * cmath.sqrt(b * (a - z))) / cmath.sqrt(-z * (b - a)))
    return -4j / (math.pi * cmath.sqrt((a - z) * (b - z))) * lg


def h_endpoint_values(p: ModelParams, eq: EquilibriumData | None = None) -> dict:
    eq = eq or endpoints(p)
    a, b = eq.alpha, eq.beta
    w = b - a
    return {
        "h_alpha": 4 / (-a * w),
        "h_beta": 4 / (b * w),
        "dh_alpha": 4 * (b - 3 * a) / (3 * a * a * w * w),
        "dh_beta": 4 * (a - 3 * b) / (3 * b * b * w * w),
    }


def h_endpoint_numeric(p: ModelParams, eq: EquilibriumData | None = None, points: int = 64) -> dict:
    """h and h' at both endpoints from the trapezoid rule on a circle around each.

    h is analytic at alpha and beta, so the Cauchy integrals converge
    geometrically in ``points``; this is independent of the closed forms.
    """
    eq = eq or endpoints(p)
    r = 0.3 * min(-eq.alpha, eq.beta)
    th = 2 * np.pi * np.arange(points) / points
    out = {}
    for key, end in (("alpha", eq.alpha), ("beta", eq.beta)):
        w = r * np.exp(1j * th)
        hs = np.array([h_function(end + v, p, eq) for v in w])
        out["h_" + key] = float(np.mean(hs).real)
        out["dh_" + key] = float(np.mean(hs / w).real)
    return out


# ---------------------------------------------------------------------------
# the kernel f and the k-transform

def f_array(x, p: ModelParams):
    """Vectorized double-precision f(x), odd, with f(0) = 0.

    For x > 0, ``f = 2q/expm1(2qx) - 2r/expm1(2rx)`` with r = q - 1; close to 0
    the Laurent series is used to dodge the cancellation of the two poles.
    """
    g, _ = _gz(p)
    q = math.pi / (2 * g)
    r = q - 1
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.zeros_like(ax)
    small = (ax > 0) & (ax < 1e-3 / q)
    big = ax >= 1e-3 / q
    xs = ax[small]
    out[small] = (
        -1
        + (q**2 - r**2) * xs / 3
        - (q**4 - r**4) * xs**3 / 45
        + 2 * (q**6 - r**6) * xs**5 / 945
    )
    xb = ax[big]
    with np.errstate(over="ignore"):
        out[big] = 2 * q / np.expm1(2 * q * xb) - 2 * r / np.expm1(2 * r * xb)
    out = np.sign(x) * out
    return out if out.ndim else float(out)


def _f(x: float, p: ModelParams) -> float:
    return float(f_array(x, p))


def _cutoff(p: ModelParams) -> float:
    """Beyond this |x|, |f(x)| < e^-80."""
    return 80 / _decay(p)


def k_kernel(mu: float, p: ModelParams, eps: float = QUAD_EPS) -> float:
    """k(mu) = PV int f(x)/(mu - x) dx = PV int_0^inf 2x f(x)/(mu^2 - x^2) dx (even in mu)."""
    mu = abs(float(mu))
    if mu == 0:
        raise ValueError("k has a logarithmic singularity at 0")
    X = _cutoff(p)
    if mu < 1.5 * X:
        # 2x f(x)/(mu^2 - x^2) = -[2x f(x)/(mu + x)] / (x - mu)
        val, err = _quad(
            lambda x: -2 * x * _f(x, p) / (mu + x), 0.0, 2 * X, weight="cauchy", wvar=mu, epsabs=eps, epsrel=eps
        )
    else:
        val, err = _quad(lambda x: 2 * x * _f(x, p) / (mu * mu - x * x), 0.0, X, epsabs=eps, epsrel=eps)
    if err > 1e-9:
        raise QuadratureError(f"k({mu}) quadrature error {err:.2e}")
    return val


def _odd_moment(p: ModelParams, j: int) -> float:
    """int_0^inf 2 x^(2j-1) f(x) dx."""
    return _quad(lambda x: 2 * x ** (2 * j - 1) * _f(x, p), 0.0, _cutoff(p))[0]


def k_moment_C(p: ModelParams) -> tuple[float, float]:
    """(C by quadrature, closed form -2 pi gamma^2 / (3 (pi - 2 gamma)))."""
    g, _ = _gz(p)
    return _odd_moment(p, 1), -2 * math.pi * g * g / (3 * (math.pi - 2 * g))


def k_integral(p: ModelParams, M: float = 60.0) -> float:
    """int_0^inf k(x) dx: quadrature on [0, M] plus the tail from k ~ sum_j m_j / x^(2j)."""
    k = lambda x: k_kernel(x, p, eps=1e-12)
    body = _quad(k, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11)[0]
    body += _quad(k, 1.0, M, epsabs=1e-11, epsrel=1e-11)[0]
    tail = sum(_odd_moment(p, j) / ((2 * j - 1) * M ** (2 * j - 1)) for j in (1, 2, 3))
    return body + tail


# ---------------------------------------------------------------------------
# finite-N endpoints

@dataclass(frozen=True)
class CorrectedEndpoints:
    alpha_N: float
    beta_N: float
    N: int
    iterations: int = 0

    def scaled_shifts(self, eq: EquilibriumData) -> tuple[float, float]:
        """(N^2 (alpha_N - alpha), N^2 (beta_N - beta))."""
        n2 = self.N * self.N
        return n2 * (self.alpha_N - eq.alpha), n2 * (self.beta_N - eq.beta)


def corrected_endpoints(p: ModelParams, N: int) -> CorrectedEndpoints:
    """alpha, beta plus the N^-2 shifts gamma^2 (2 sin(pi zeta/2) -/+ 1) / (3 (pi - 2 gamma) cos(pi zeta/2))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    g, z = _gz(p)
    eq = endpoints(p)
    s, c = math.sin(math.pi * z / 2), math.cos(math.pi * z / 2)
    k = g * g / (3 * (math.pi - 2 * g) * c) / N**2
    return CorrectedEndpoints(eq.alpha + k * (2 * s - 1), eq.beta + k * (2 * s + 1), N)


def corrected_endpoints_derived(p: ModelParams, N: int) -> CorrectedEndpoints:
    """Leading-order solution of the endpoint equations, alpha/beta -/+ gamma^2/(3 (pi - 2 gamma) cos(pi zeta/2)) N^-2.

    Expanding the square-root weight as ``(-ab)^{-1/2} (1 - x(a+b)/(2(-a)b))``
    flips the sign of the zeta-odd part of the right-hand side relative to
    :func:`corrected_endpoints`, and the ``sin(pi zeta/2)`` terms cancel.
    This is the version :func:`endpoints_oracle` converges to.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    g, z = _gz(p)
    eq = endpoints(p)
    k = g * g / (3 * (math.pi - 2 * g) * math.cos(math.pi * z / 2)) / N**2
    return CorrectedEndpoints(eq.alpha - k, eq.beta + k, N)


def endpoint_system(a: float, b: float, p: ModelParams) -> tuple[float, float]:
    """Closed forms (F, G) of the moment conditions for the kink potential alone."""
    _, z = _gz(p)
    s = math.asin((b + a) / (b - a))
    F = -z / 2 + s / math.pi
    G = -z * (b + a) / 4 + math.sqrt(-a * b) / math.pi + (b + a) / (2 * math.pi) * s
    return F, G


def endpoint_jacobian(a: float, b: float, p: ModelParams) -> np.ndarray:
    """[[F_a, F_b], [G_a, G_b]] differentiated from :func:`endpoint_system`."""
    _, z = _gz(p)
    w, r = b - a, math.sqrt(-a * b)
    s = math.asin((b + a) / w)
    Fa = b / (math.pi * w * r)
    Fb = -a / (math.pi * w * r)
    Ga = -z / 4 - b / (2 * math.pi * r) + s / (2 * math.pi) + (a + b) * Fa / 2
    Gb = -z / 4 - a / (2 * math.pi * r) + s / (2 * math.pi) + (a + b) * Fb / 2
    return np.array([[Fa, Fb], [Ga, Gb]])


def endpoint_corrections(a: float, b: float, N: int, p: ModelParams) -> tuple[float, float]:
    """(1/2pi) int_a^b f(Nx) {1, x} / sqrt((x - a)(b - x)) dx by quadrature in u = N x.

    Oddness of f folds the integrals onto u > 0; the difference of the two
    square-root weights is formed analytically to avoid cancellation.
    """
    U = min(_cutoff(p), 0.9 * N * min(-a, b))

    def wpair(u):
        x = u / N
        A = (-x - a) * (b + x)  # weight argument at -x
        B = (x - a) * (b - x)
        sA, sB = math.sqrt(A), math.sqrt(B)
        return 1 / sB, 1 / sA, -2 * x * (a + b) / (sA * sB * (sA + sB))

    def phi_int(u):
        return _f(u, p) * wpair(u)[2]

    def psi_int(u):
        wp, wm, _ = wpair(u)
        return u * _f(u, p) * (wp + wm)

    Phi = _quad(phi_int, 0.0, U)[0] / (2 * math.pi * N)
    Psi = _quad(psi_int, 0.0, U)[0] / (2 * math.pi * N * N)
    return Phi, Psi


def endpoints_oracle(p: ModelParams, N: int, max_iter: int = 100, tol: float = 1e-15) -> CorrectedEndpoints:
    """Solve F + Phi_N = 0, G + Psi_N = 1 for (alpha_N, beta_N) by damped Newton.

    Starts from the limiting endpoints; a step is halved while it fails to
    reduce the residual.
    """
    if N < 10:
        raise ValueError("N must be >= 10")
    eq = endpoints(p)
    x = np.array([eq.alpha, eq.beta])

    def resid(v):
        F, G = endpoint_system(v[0], v[1], p)
        Phi, Psi = endpoint_corrections(v[0], v[1], N, p)
        return np.array([F + Phi, G + Psi - 1])

    r = resid(x)
    for it in range(1, max_iter + 1):
        step = np.linalg.solve(endpoint_jacobian(x[0], x[1], p), -r)
        lam = 1.0
        while True:
            cand = x + lam * step
            rc = resid(cand)
            if np.max(np.abs(rc)) <= np.max(np.abs(r)) or lam < 1e-6:
                break
            lam /= 2
        x, r = cand, rc
        if np.max(np.abs(lam * step)) < tol * max(1.0, np.max(np.abs(x))) or np.max(np.abs(r)) < 1e-16:
            return CorrectedEndpoints(float(x[0]), float(x[1]), N, it)
    raise RootFindError(f"endpoint Newton iteration did not converge in {max_iter} steps")


# ---------------------------------------------------------------------------
# density correction

def density_correction(mu: float, N: int, p: ModelParams, ends: CorrectedEndpoints | None = None) -> float:
    """rho_N^1(mu) = sqrt(r_N(mu))/(2 pi^2) PV int f(Nx) / (sqrt(r_N(x)) (x - mu)) dx.

    f(Nx) is negligible outside |x| < 80/(decay N), so the integral is cut
    there and split at the jump of f at 0.
    """
    ends = ends or corrected_endpoints(p, N)
    a, b = ends.alpha_N, ends.beta_N
    mu = float(mu)
    if not a < mu < b:
        raise ValueError(f"mu={mu} outside (alpha_N, beta_N)")
    if mu == 0:
        raise ValueError("rho_N^1 has a logarithmic singularity at 0")
    X = min(_cutoff(p) / N, 0.9 * min(-a, b))
    rN = lambda x: (x - a) * (b - x)
    reg = lambda x: _f(N * x, p) / math.sqrt(rN(x))
    total = 0.0
    for lo, hi in ((-X, 0.0), (0.0, X)):
        if lo < mu < hi:
            val, err = _quad(reg, lo, hi, weight="cauchy", wvar=mu)
        else:
            val, err = _quad(lambda x: reg(x) / (x - mu), lo, hi)
        if err > 1e-9:
            raise QuadratureError(f"density correction quadrature error {err:.2e} at mu={mu}")
        total += val
    return math.sqrt(rN(mu)) / (2 * math.pi**2) * total


def prop52_grid(p: ModelParams, N: int, n_uniform: int = 40) -> list[float]:
    """Points of [alpha + r, beta - r], r = min(-alpha, beta)/4, avoiding 0, plus points on the 1/N scale."""
    eq = endpoints(p)
    r = min(-eq.alpha, eq.beta) / 4
    pts = set(np.linspace(eq.alpha + r, eq.beta - r, n_uniform).tolist())
    pts |= {s * u / N for u in (0.25, 0.5, 1.0, 2.0, 4.0) for s in (-1, 1)}
    return sorted(x for x in pts if abs(x) > 1e-12)


def prop52_scaled_sup(p: ModelParams, N: int) -> float:
    """N^2 sup |rho_N^1(mu) + k(N mu)/(2 pi^2)| over :func:`prop52_grid`."""
    ends = corrected_endpoints(p, N)
    worst = 0.0
    for mu in prop52_grid(p, N):
        eps = density_correction(mu, N, p, ends) + k_kernel(N * mu, p) / (2 * math.pi**2)
        worst = max(worst, abs(eps))
    return N * N * worst


# ---------------------------------------------------------------------------
# the transform m(z)

def m_transform(z, p: ModelParams) -> complex:
    """m(z) = int k(mu)/(z - mu) dmu, evaluated as -sgn(Im z) pi i int f(mu)/(z - mu) dmu.

    The f-integral is folded to int_0^inf 2 mu f(mu)/(z^2 - mu^2) dmu.
    """
    z = complex(z)
    if z.imag == 0:
        raise BranchError("m is defined off the real axis")
    X = _cutoff(p)
    z2 = z * z
    re = _quad(lambda m: (2 * m * _f(m, p) / (z2 - m * m)).real, 0.0, X, epsabs=1e-12)[0]
    im = _quad(lambda m: (2 * m * _f(m, p) / (z2 - m * m)).imag, 0.0, X, epsabs=1e-12)[0]
    sgn = 1 if z.imag > 0 else -1
    return -sgn * math.pi * 1j * complex(re, im)


def m_transform_direct(z, p: ModelParams, M: float = 60.0) -> complex:
    """m(z) straight from its definition as the Cauchy transform of k (slow; an oracle)."""
    z = complex(z)
    if z.imag == 0:
        raise BranchError("m is defined off the real axis")
    # k even: int k/(z - mu) = int_0^inf k(mu) 2z/(z^2 - mu^2)
    kern = lambda m: k_kernel(m, p, eps=1e-12) * 2 * z / (z * z - m * m)
    out = 0j
    for lo, hi in ((0.0, 1.0), (1.0, M)):
        re = _quad(lambda m: kern(m).real, lo, hi, epsabs=1e-11, epsrel=1e-11)[0]
        im = _quad(lambda m: kern(m).imag, lo, hi, epsabs=1e-11, epsrel=1e-11)[0]
        out += complex(re, im)
    # tail: k ~ m_1/mu^2 + m_2/mu^4 and 2z/(z^2 - mu^2) ~ -2z/mu^2 (1 + z^2/mu^2)
    m1, m2 = _odd_moment(p, 1), _odd_moment(p, 2)
    out += -2 * z * (m1 / (3 * M**3) + (m2 + m1 * z * z) / (5 * M**5))
    return out
