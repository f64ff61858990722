"""Both sides of the Hardy inequalities on separable trial functions u = f(r) Y(theta).

In polar coordinates

    int |grad u|^2 = (int f'^2 r^{d-1} dr) ||Y||^2 + (int f^2 r^{d-3} dr) ||grad Y||^2,
    int W |u|^2    = (int f^2 r^{d-1-2k} dr) (int Phi Y^2),

so each side is a product of a radial moment and an angular quadratic
form.  Radial moments have closed forms for the Gaussian and the power
cutoff and are otherwise integrated in log-radius.  Angular profiles are
coefficient vectors in the orthonormal Gegenbauer basis, so ||Y||^2 and
||grad Y||^2 are exact and only int Phi Y^2 needs quadrature.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import quad

from . import sphere
from .constants import HardyConstants
from .errors import DivergenceError, DomainError, UsageError
from .spectral import EigenResult, SpectralBasis, potential_matrix
from .weights import Constant, WeightSpec, integral

GAP_RTOL = 1e-9
QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-13, limit=400)


# --- radial profiles -------------------------------------------------------------

def _log_quad(log_g, breaks: Sequence[float] = (), rate: float = 1.0) -> float:
    """Integral over r in (0, inf) of exp(log_g(x)) dr with x = log r.

    The integrand is evaluated from its logarithm, so the very slow tails
    of power profiles (r^{-1-2 eps} with tiny eps) neither overflow nor
    underflow; ``rate`` rescales x so that those tails decay like e^{-|v|}.
    """
    pts = [-math.inf] + sorted(math.log(b) * rate for b in breaks) + [math.inf]

    def h(v):
        x = v / rate
        return math.exp(log_g(x) + x) / rate

    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = quad(h, a, b, **QUAD_OPTS)
        total += val
    return total


@dataclass(frozen=True)
class Gaussian:
    """f(r) = exp(-r^2 / (2 sigma^2))."""

    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")

    def f(self, r):
        return np.exp(-np.square(r) / (2 * self.sigma ** 2))

    def df(self, r):
        return -r / self.sigma ** 2 * self.f(r)

    def grad_moment(self, d: int) -> float:
        return self.sigma ** (d - 2) * math.gamma(d / 2 + 1) / 2

    def mass_moment(self, s: float) -> float:
        """int_0^inf f^2 r^s dr."""
        if not s > -1:
            raise DivergenceError(f"int f^2 r^{s} dr diverges at r = 0", end="0")
        return self.sigma ** (s + 1) * math.gamma((s + 1) / 2) / 2

    def _log_f(self, x):
        if x > 350:
            return -math.inf
        return -math.exp(2 * x) / (2 * self.sigma ** 2)

    def quad_grad(self, d: int) -> float:
        # f' = -r f / sigma^2
        return _log_quad(lambda x: 2 * (self._log_f(x) + x - 2 * math.log(self.sigma))
                         + (d - 1) * x, (self.sigma,))

    def quad_mass(self, s: float) -> float:
        self.mass_moment(s)
        return _log_quad(lambda x: 2 * self._log_f(x) + s * x, (self.sigma,))

    def describe(self) -> str:
        return f"gaussian({self.sigma!r})"


@dataclass(frozen=True)
class PowerCutoff:
    """f = r^{-(d-2)/2 + eps} on r <= 1 and r^{-(d-2)/2 - eps} beyond."""

    eps: float
    d: int

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError("power_cutoff needs eps > 0 for a finite Dirichlet energy")
        if self.d < 3:
            raise DomainError("power_cutoff needs d >= 3")

    @property
    def a(self) -> float:
        return (self.d - 2) / 2

    def f(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= 1, r ** (-self.a + self.eps), r ** (-self.a - self.eps))

    def df(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= 1, (-self.a + self.eps) * r ** (-self.a + self.eps - 1),
                        (-self.a - self.eps) * r ** (-self.a - self.eps - 1))

    def grad_moment(self, d: int) -> float:
        self._same_d(d)
        return (self.a ** 2 + self.eps ** 2) / self.eps

    def _same_d(self, d):
        if d != self.d:
            raise UsageError(f"power_cutoff built for d={self.d}, used with d={d}")

    def _exponents(self, s: float):
        e = s - 2 * self.a
        inner, outer = e + 2 * self.eps + 1, 2 * self.eps - e - 1
        if not inner > 0:
            raise DivergenceError(f"int f^2 r^{s} dr diverges at r = 0", end="0")
        if not outer > 0:
            raise DivergenceError(f"int f^2 r^{s} dr diverges at r = inf", end="inf")
        return inner, outer

    def mass_moment(self, s: float) -> float:
        inner, outer = self._exponents(s)
        return 1 / inner + 1 / outer

    def _slope(self, x):
        return -self.a + self.eps if x <= 0 else -self.a - self.eps

    def quad_grad(self, d: int) -> float:
        self._same_d(d)

        def log_g(x):
            k = self._slope(x)
            if k == 0:
                # eps = (d-2)/2 makes f constant on the unit ball
                return -math.inf
            return 2 * (math.log(abs(k)) + (k - 1) * x) + (d - 1) * x
        return _log_quad(log_g, (1.0,), rate=self.eps)

    def quad_mass(self, s: float) -> float:
        self._exponents(s)
        return _log_quad(lambda x: 2 * self._slope(x) * x + s * x, (1.0,), rate=self.eps)

    def describe(self) -> str:
        return f"power_cutoff({self.eps!r})"


@dataclass(frozen=True)
class CompactBump:
    """Smooth bump exp(-1/((r - r0)(r1 - r))) supported in (r0, r1)."""

    r0: float
    r1: float

    def __post_init__(self):
        if not 0 <= self.r0 < self.r1 < math.inf:
            raise DomainError("need 0 <= r0 < r1 < inf")

    def _h(self, r):
        return (r - self.r0) * (self.r1 - r)

    def f(self, r):
        r = np.asarray(r, dtype=float)
        h = self._h(r)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(h > 0, np.exp(-1 / np.where(h > 0, h, 1.0)), 0.0)

    def df(self, r):
        r = np.asarray(r, dtype=float)
        h = self._h(r)
        dh = self.r0 + self.r1 - 2 * r
        safe = np.where(h > 0, h, 1.0)
        return np.where(h > 0, self.f(r) * dh / safe ** 2, 0.0)

    def grad_moment(self, d: int) -> float:
        return self.quad_grad(d)

    def mass_moment(self, s: float) -> float:
        return self.quad_mass(s)

    def quad_grad(self, d: int) -> float:
        val, _ = quad(lambda r: float(self.df(r)) ** 2 * r ** (d - 1), self.r0, self.r1, **QUAD_OPTS)
        return val

    def quad_mass(self, s: float) -> float:
        val, _ = quad(lambda r: float(self.f(r)) ** 2 * r ** s, self.r0, self.r1, **QUAD_OPTS)
        return val

    def describe(self) -> str:
        return f"compact_bump({self.r0!r},{self.r1!r})"


Radial = Union[Gaussian, PowerCutoff, CompactBump]


# --- angular profiles -----------------------------------------------------------

@dataclass(frozen=True)
class AngularProfile:
    """Y = sum_l c_l b_l in the orthonormal axisymmetric basis of S^{d-1}."""

    d: int
    coefficients: tuple
    label: str = "eigen_profile"

    @property
    def L(self) -> int:
        return len(self.coefficients) - 1

    def _c(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def norm_sq(self) -> float:
        c = self._c()
        return float(c @ c)

    def grad_norm_sq(self) -> float:
        c = self._c()
        return float(SpectralBasis(self.d, self.L).eigenvalues @ (c * c))

    def weighted(self, phi: WeightSpec) -> float:
        """int Phi Y^2 over S^{d-1}."""
        if isinstance(phi, Constant):
            return phi.c * self.norm_sq()
        c = self._c()
        M = potential_matrix(phi, SpectralBasis(self.d, max(self.L, 1)))
        c = np.pad(c, (0, M.shape[0] - c.size))
        return float(c @ M @ c)

    def describe(self) -> str:
        return self.label


def constant_mode(d: int) -> AngularProfile:
    """Y = 1."""
    return AngularProfile(d, (math.sqrt(sphere.surface_area(d)),), "constant")


def basis_mode(d: int, l: int) -> AngularProfile:
    """Y = b_l, the normalized degree-l axisymmetric harmonic."""
    if l < 0:
        raise DomainError("l must be >= 0")
    c = [0.0] * (l + 1)
    c[l] = 1.0
    return AngularProfile(d, tuple(c), f"basis_mode({l})")


def eigen_profile(result: EigenResult) -> AngularProfile:
    """Ground state of -Laplace_Beltrami - Phi from a spectral computation."""
    if result.path != "axisymmetric":
        raise UsageError("eigen profiles need the axisymmetric path")
    return AngularProfile(result.d, tuple(float(x) for x in result.coefficients), "eigen_profile")


@dataclass(frozen=True)
class TrialFunction:
    radial: Radial
    angular: AngularProfile

    @property
    def d(self) -> int:
        return self.angular.d

    def describe(self) -> str:
        return f"{self.radial.describe()}*{self.angular.describe()}"


# --- functionals -----------------------------------------------------------------

def _moments(u: TrialFunction, method: str):
    if method == "closed":
        return u.radial.grad_moment, u.radial.mass_moment
    if method == "quadrature":
        return u.radial.quad_grad, u.radial.quad_mass
    raise UsageError(f"method must be 'closed' or 'quadrature', got {method!r}")


def dirichlet_energy(u: TrialFunction, method: str = "closed") -> float:
    """int |grad u|^2 over R^d, split into radial and angular parts."""
    d = u.d
    grad, mass = _moments(u, method)
    total = grad(d) * u.angular.norm_sq()
    g = u.angular.grad_norm_sq()
    if g > 0:
        total += mass(d - 3) * g
    return total


def weighted_l2(u: TrialFunction, phi: WeightSpec, kappa: float = 1.0,
                method: str = "closed") -> float:
    """int Phi(x/|x|) |u|^2 / |x|^{2 kappa} over R^d."""
    _, mass = _moments(u, method)
    ang = u.angular.weighted(phi)
    if ang == 0:
        return 0.0
    return mass(u.d - 1 - 2 * kappa) * ang


# --- reports ---------------------------------------------------------------------

@dataclass
class HardyReport:
    theorem_id: str
    d: int
    p: float
    kappa: float
    nu: Optional[float]
    weight_desc: str
    lp_norm: float
    tau: float
    nu0: Optional[float]
    lambda1: Optional[float]
    mu: Optional[float]
    alpha: Optional[float]
    lhs: float
    rhs: float
    gap: float
    holds: bool
    trial: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "HardyReport":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown report fields: {sorted(unknown)}")
        return cls(**data)


def _holds(lhs: float, gap: float) -> bool:
    return gap >= -GAP_RTOL * abs(lhs)


def hardy_gap(u: TrialFunction, phi: WeightSpec, d: int, p: float, mode: str,
              constants: HardyConstants, method: str = "closed") -> HardyReport:
    """lhs - rhs for the inequality selected by ``mode``.

    main: rhs = tau int W u^2.  main2 and theorem4 add the weakened
    classical term (1 - nu) (d-2)^2/4 int u^2/|x|^2.
    """
    if mode not in ("main", "main2", "theorem4"):
        raise UsageError(f"unknown mode {mode!r}")
    if constants.theorem_id != mode or constants.d != d or not math.isclose(constants.p, p, rel_tol=1e-12):
        raise UsageError(f"constants for ({constants.theorem_id}, d={constants.d}, p={constants.p}) "
                         f"do not match ({mode}, d={d}, p={p})")
    if u.d != d:
        raise UsageError(f"trial function lives in d={u.d}, not d={d}")
    lhs = dirichlet_energy(u, method)
    rhs = constants.tau * weighted_l2(u, phi, 1.0, method)
    if mode != "main":
        rhs += (1 - constants.nu) * (d - 2) ** 2 / 4 * weighted_l2(u, Constant(1.0), 1.0, method)
    gap = lhs - rhs
    return HardyReport(mode, d, p, 1.0, constants.nu, phi.describe(), constants.phi_norm,
                       constants.tau, constants.nu0, None, constants.mu, constants.alpha,
                       lhs, rhs, gap, _holds(lhs, gap), u.describe())


@dataclass(frozen=True)
class SharpnessReport:
    eps: tuple
    quotients: tuple
    quadrature_quotients: tuple
    infimum: float
    target: float
    max_closed_vs_quadrature: float


def sharpness_probe(phi: WeightSpec, d: int, eps_grid: Sequence[float],
                    check_quadrature: bool = True) -> SharpnessReport:
    """Rayleigh quotients int |grad u|^2 / int Phi u^2/|x|^2 over power cutoffs.

    For Phi = c the quotient is ((d-2)^2/4 + eps^2) / c, so the infimum
    approaches the classical constant over c from above.
    """
    if not isinstance(phi, Constant) or not phi.c > 0:
        raise DomainError("sharpness probe needs a positive constant weight")
    eps = [float(e) for e in eps_grid]
    if not eps or any(e <= 0 for e in eps):
        raise DomainError("eps grid must be positive")
    Y = constant_mode(d)
    closed, numeric, worst = [], [], 0.0
    for e in eps:
        u = TrialFunction(PowerCutoff(e, d), Y)
        qc = dirichlet_energy(u) / weighted_l2(u, phi)
        closed.append(qc)
        if check_quadrature:
            qn = dirichlet_energy(u, "quadrature") / weighted_l2(u, phi, method="quadrature")
            numeric.append(qn)
            worst = max(worst, abs(qn - qc) / qc)
    return SharpnessReport(tuple(eps), tuple(closed), tuple(numeric), min(closed),
                           (d - 2) ** 2 / 4 / phi.c, worst)


@dataclass(frozen=True)
class LemmaReport:
    lhs: float
    rhs: float
    gap: float
    angular_defect: float
    radial_slack: float
    holds: bool


def angular_defect(Y: AngularProfile, phi: WeightSpec, tau: float, lambda1: float) -> float:
    """||grad Y||^2 - tau int Phi Y^2 - lambda1 ||Y||^2, zero for the ground state."""
    return Y.grad_norm_sq() - tau * Y.weighted(phi) - lambda1 * Y.norm_sq()


def lemma_decomposition_check(u: TrialFunction, phi: WeightSpec, tau: float,
                              eig: EigenResult) -> LemmaReport:
    """int |grad u|^2 >= int (tau Phi + lambda1 + (d-2)^2/4) u^2/|x|^2.

    ``eig`` must be lambda1 of -Laplace_Beltrami - tau Phi.  The gap splits
    into the radial Hardy slack times ||Y||^2 plus the angular defect times
    the radial mass; both parts are returned.
    """
    if not eig.converged:
        raise UsageError(f"lambda1 not converged (L={eig.L_used}, estimates "
                         f"{eig.lambda1!r} and {eig.lambda1_coarse!r}); refusing the check")
    d = u.d
    if eig.d != d:
        raise UsageError("eigenvalue and trial function live in different dimensions")
    lhs = dirichlet_energy(u)
    rhs = tau * weighted_l2(u, phi) + (eig.lambda1 + (d - 2) ** 2 / 4) * weighted_l2(u, Constant(1.0))
    gap = lhs - rhs
    R1 = u.radial.grad_moment(d)
    R2 = u.radial.mass_moment(d - 3)
    radial = (R1 - (d - 2) ** 2 / 4 * R2) * u.angular.norm_sq()
    ang = angular_defect(u.angular, phi, tau, eig.lambda1)
    return LemmaReport(lhs, rhs, gap, ang, radial, _holds(lhs, gap))


def fractional_gaussian_check(d: int, kappa: float, phi: WeightSpec,
                              constants: HardyConstants) -> HardyReport:
    """int |grad^k u|^2 >= tau int Phi u^2/|x|^{2k} for u = exp(-|x|^2/2).

    The fractional energy of the unit Gaussian is |S^{d-1}| Gamma((d+2k)/2)/2
    from its Fourier transform.
    """
    if constants.theorem_id != "fractional" or constants.d != d or not math.isclose(constants.kappa, kappa):
        raise UsageError("constants do not belong to this fractional check")
    if d >= 3 and not 0 < kappa <= 1:
        raise DomainError(f"for d >= 3 need 0 < kappa <= 1, got {kappa}")
    if d < 3 and not 0 < kappa < d / 2:
        raise DomainError(f"for d = {d} need 0 < kappa < d/2, got {kappa}")
    lhs = sphere.surface_area(d) * math.gamma((d + 2 * kappa) / 2) / 2
    wl2 = Gaussian(1.0).mass_moment(d - 1 - 2 * kappa) * integral(phi, d)
    rhs = constants.tau * wl2
    gap = lhs - rhs
    return HardyReport("fractional", d, constants.p, kappa, None, phi.describe(),
                       constants.phi_norm, constants.tau, None, None, None, None,
                       lhs, rhs, gap, _holds(lhs, gap), "gaussian(1.0)*constant")
