"""Angular weights Phi >= 0 on S^{d-1}, their L^p norms and p-ranges.

All axisymmetric variants are functions of the polar angle theta only.
``TabulatedS2`` is the one non-axisymmetric variant and is only consumed
by the full d = 3 spherical-harmonic path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import sphere
from .errors import DomainError, NotInLpError, SingularPointError, UsageError

#: reject p * beta above d - 1 - margin for polar powers
INTEGRABILITY_MARGIN = 1e-9
#: relative slack on closed endpoints of p-ranges (round-off in 5/3 etc.)
ENDPOINT_RTOL = 1e-12

THEOREM_IDS = ("main", "main2", "theorem4", "fractional", "corollary")


class WeightSpec:
    """Base class; subclasses are frozen dataclasses."""

    axisymmetric = True

    def __call__(self, theta):
        raise NotImplementedError

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """Interior angles where Phi jumps or kinks."""
        return ()

    @property
    def singular_exponent(self) -> float:
        """beta such that Phi ~ theta^{-beta} at the pole (0 if bounded)."""
        return 0.0

    def scaled(self, factor: float) -> "WeightSpec":
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


def _nonneg(name, value):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value}")
    return float(value)


@dataclass(frozen=True)
class Constant(WeightSpec):
    c: float

    def __post_init__(self):
        object.__setattr__(self, "c", _nonneg("constant", self.c))

    def __call__(self, theta):
        return np.full(np.shape(theta), self.c, dtype=float)

    def scaled(self, factor):
        return Constant(self.c * factor)

    def describe(self):
        return f"constant:{self.c!r}"


@dataclass(frozen=True)
class CapIndicator(WeightSpec):
    """a * indicator of the cap {theta < angle}."""

    amplitude: float
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _nonneg("cap amplitude", self.amplitude))
        if not 0.0 < self.angle < math.pi:
            raise DomainError(f"cap angle must lie in (0, pi), got {self.angle}")

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.where(theta < self.angle, self.amplitude, 0.0)

    @property
    def breakpoints(self):
        return (float(self.angle),)

    def scaled(self, factor):
        return CapIndicator(self.amplitude * factor, self.angle)

    def describe(self):
        return f"cap:{self.amplitude!r},{self.angle!r}"


@dataclass(frozen=True)
class PolarPower(WeightSpec):
    """a * theta^{-beta}, singular at the north pole when beta > 0."""

    amplitude: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _nonneg("amplitude", self.amplitude))
        object.__setattr__(self, "beta", _nonneg("exponent beta", self.beta))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.beta > 0 and np.any(theta <= 0):
            raise SingularPointError("polar_power is singular at theta = 0; integrate instead")
        return self.amplitude * theta ** (-self.beta)

    @property
    def singular_exponent(self):
        return float(self.beta)

    def scaled(self, factor):
        return PolarPower(self.amplitude * factor, self.beta)

    def describe(self):
        return f"polar_power:{self.amplitude!r},{self.beta!r}"


@dataclass(frozen=True)
class Tabulated(WeightSpec):
    """Piecewise-linear interpolation of samples, constant beyond the ends."""

    angles: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if a.ndim != 1 or a.shape != v.shape or a.size < 1:
            raise DomainError("tabulated weight needs equally long 1-d angles and values")
        if np.any(a <= 0) or np.any(a >= math.pi):
            raise DomainError("tabulated angles must lie in (0, pi)")
        if np.any(np.diff(a) <= 0):
            raise DomainError("tabulated angles must be strictly increasing")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise DomainError("tabulated values must be finite and >= 0")
        object.__setattr__(self, "angles", tuple(float(x) for x in a))
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    def __call__(self, theta):
        return np.interp(theta, self.angles, self.values)

    @property
    def breakpoints(self):
        return self.angles

    def scaled(self, factor):
        return Tabulated(self.angles, tuple(factor * v for v in self.values))

    def describe(self):
        return f"tabulated:n={len(self.angles)}"


@dataclass(frozen=True)
class CosineSeries(WeightSpec):
    """Polynomial in cos(theta): sum_k coefficients[k] * cos(theta)^k."""

    coefficients: Tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.coefficients)
        if not c:
            raise DomainError("cosine series needs at least one coefficient")
        object.__setattr__(self, "coefficients", c)
        poly = np.polynomial.Polynomial(c)
        cand = [-1.0, 1.0] + [r.real for r in poly.deriv().roots()
                              if abs(r.imag) < 1e-12 and -1 <= r.real <= 1]
        if min(poly(np.array(cand))) < -1e-14 * max(1.0, max(map(abs, c))):
            raise DomainError("cosine series takes negative values on [-1, 1]")

    def __call__(self, theta):
        return np.maximum(np.polynomial.polynomial.polyval(np.cos(theta), self.coefficients), 0.0)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def scaled(self, factor):
        return CosineSeries(tuple(factor * c for c in self.coefficients))

    def describe(self):
        return "cosine_series:" + ",".join(repr(c) for c in self.coefficients)


@dataclass(frozen=True)
class TabulatedS2(WeightSpec):
    """Samples on a (theta, phi) grid of S^2, bilinear and periodic in phi."""

    theta: Tuple[float, ...]
    phi: Tuple[float, ...]
    values: Tuple[Tuple[float, ...], ...]

    axisymmetric = False

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        ph = np.asarray(self.phi, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if th.size < 2 or v.shape != (th.size, ph.size):
            raise DomainError("need >= 2 theta rows and values of shape (len(theta), len(phi))")
        if np.any(np.diff(th) <= 0) or np.any(th <= 0) or np.any(th >= math.pi):
            raise DomainError("theta grid must be strictly increasing in (0, pi)")
        if np.any(np.diff(ph) <= 0) or ph[0] < 0 or ph[-1] >= 2 * math.pi:
            raise DomainError("phi grid must be strictly increasing in [0, 2pi)")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise DomainError("values must be finite and >= 0")
        object.__setattr__(self, "theta", tuple(map(float, th)))
        object.__setattr__(self, "phi", tuple(map(float, ph)))
        object.__setattr__(self, "values", tuple(tuple(map(float, row)) for row in v))

    def __call__(self, theta, phi=None):
        if phi is None:
            raise UsageError("TabulatedS2 needs both theta and phi")
        th = np.asarray(self.theta)
        ph = np.asarray(self.phi)
        v = np.asarray(self.values)
        ph_ext = np.concatenate([ph[-1:] - 2 * math.pi, ph, ph[:1] + 2 * math.pi])
        v_ext = np.concatenate([v[:, -1:], v, v[:, :1]], axis=1)
        interp = RegularGridInterpolator((th, ph_ext), v_ext)
        T, P = np.broadcast_arrays(np.clip(theta, th[0], th[-1]),
                                   np.mod(phi, 2 * math.pi))
        return interp(np.stack([T, P], axis=-1))

    @property
    def breakpoints(self):
        return self.theta

    def scaled(self, factor):
        return TabulatedS2(self.theta, self.phi,
                           tuple(tuple(factor * x for x in row) for row in self.values))

    def describe(self):
        return f"tabulated_s2:{len(self.theta)}x{len(self.phi)}"


def evaluate(spec: WeightSpec, theta):
    """Pointwise value of an axisymmetric weight."""
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr < 0) or np.any(theta_arr > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    out = spec(theta_arr)
    return float(out) if np.ndim(out) == 0 else out


def adapted_rule(spec: WeightSpec, d: int, degree: int = 64, power: float = 1.0):
    """Quadrature rule suited to integrating Phi^power * (polynomial of given degree).

    Breakpoints of Phi become panel edges; polar singularities get the
    graded split rule.
    """
    if isinstance(spec, (Constant,)):
        return sphere.axisym_rule(d, degree // 2 + 2)
    if isinstance(spec, CosineSeries):
        extra = int(math.ceil(power * spec.degree)) if float(power).is_integer() else 64
        return sphere.axisym_rule(d, (degree + extra) // 2 + 2)
    if isinstance(spec, PolarPower) and spec.beta > 0:
        return sphere.split_rule(d, power * spec.beta, degree=degree)
    if not spec.axisymmetric:
        raise UsageError("adapted_rule handles axisymmetric weights only")
    return sphere.panel_rule(d, spec.breakpoints, degree=degree)


def _check_integrable(spec, p, d):
    if isinstance(spec, PolarPower) and spec.beta > 0:
        critical = (d - 1) / spec.beta
        if p * spec.beta > d - 1 - INTEGRABILITY_MARGIN:
            raise NotInLpError(
                f"polar_power with beta={spec.beta} is not in L^{p}(S^{d - 1}); "
                f"need p < {critical!r}", critical=critical)


def lp_norm_quadrature(spec: WeightSpec, p: float, d: int, rule=None) -> float:
    """(integral of Phi^p)^{1/p} by quadrature only (no closed forms)."""
    if p < 1:
        raise DomainError(f"need p >= 1, got p={p}")
    _check_integrable(spec, p, d)
    if rule is None:
        rule = adapted_rule(spec, d, degree=32, power=p)
    if rule.kind == "full_s2":
        T, P = np.meshgrid(rule.theta, rule.phi, indexing="ij")
        vals = spec(T, P) if not spec.axisymmetric else spec(T)
    else:
        vals = spec(rule.theta)
    vals = np.asarray(vals, dtype=float)
    # scale by the largest node value so tiny or huge amplitudes neither
    # underflow nor overflow when raised to the power p
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0.0 or not math.isfinite(scale):
        return sphere.integrate(rule, vals ** p) ** (1.0 / p)
    return scale * sphere.integrate(rule, (vals / scale) ** p) ** (1.0 / p)


def lp_norm(spec: WeightSpec, p: float, d: int, rule=None) -> float:
    """||Phi||_{L^p(S^{d-1})}; closed forms for constants and caps."""
    if p < 1:
        raise DomainError(f"need p >= 1, got p={p}")
    _check_integrable(spec, p, d)
    if isinstance(spec, Constant):
        return spec.c * sphere.surface_area(d) ** (1.0 / p)
    if isinstance(spec, CapIndicator):
        return spec.amplitude * sphere.cap_area(d, spec.angle) ** (1.0 / p)
    if spec.axisymmetric and d < 3:
        raise DomainError("quadrature norms need d >= 3")
    return lp_norm_quadrature(spec, p, d, rule)


def integral(spec: WeightSpec, d: int, rule=None) -> float:
    """Integral of Phi over S^{d-1}."""
    return lp_norm(spec, 1.0, d, rule)


@dataclass(frozen=True)
class PRange:
    theorem_id: str
    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool

    def __contains__(self, p) -> bool:
        tol_lo = ENDPOINT_RTOL * abs(self.lower)
        tol_hi = ENDPOINT_RTOL * abs(self.upper) if math.isfinite(self.upper) else 0.0
        ok_lo = p >= self.lower - tol_lo if self.lower_closed else p > self.lower
        ok_hi = p <= self.upper + tol_hi if self.upper_closed else p < self.upper
        return bool(ok_lo and ok_hi)

    def describe(self) -> str:
        lb = "[" if self.lower_closed else "("
        ub = "]" if self.upper_closed else ")"
        return f"{lb}{self.lower!r}, {self.upper!r}{ub}"


def critical_p(d: int) -> float:
    """Smallest p allowed by the main theorem: (d-2)^2 / (2(d-1)) + 1."""
    return (d - 2) ** 2 / (2 * (d - 1)) + 1


def p_range(d: int, theorem_id: str) -> PRange:
    if d < 3:
        raise DomainError(f"theorem ranges need d >= 3, got d={d}")
    pc = critical_p(d)
    if theorem_id == "main":
        return PRange("main", pc, math.inf, True, False)
    if theorem_id == "main2":
        if d == 3:
            return PRange("main2", 1.0, 1.25, False, False)
        return PRange("main2", (d - 1) / 2, pc, True, False)
    if theorem_id == "theorem4":
        return PRange("theorem4", max(1.0, (d - 1) / 2), pc, False, False)
    if theorem_id == "fractional":
        return PRange("fractional", d / 2, math.inf, True, False)
    if theorem_id == "corollary":
        return PRange("corollary", max(1.0, (d - 1) / 2), math.inf, False, False)
    raise UsageError(f"unknown theorem id {theorem_id!r}; expected one of {THEOREM_IDS}")


def admissible(spec: WeightSpec, d: int, p: float, theorem_id: str):
    """(p in the theorem's range and Phi in L^p, the range used)."""
    rng = p_range(d, theorem_id)
    if p not in rng:
        return False, rng
    try:
        _check_integrable(spec, p, d)
    except NotInLpError:
        return False, rng
    return True, rng
