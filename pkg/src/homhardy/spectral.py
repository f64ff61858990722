"""Lowest eigenvalue of -Laplace_Beltrami - Phi on S^{d-1} by Rayleigh-Ritz.

The axisymmetric path expands in Gegenbauer polynomials of cos(theta),
normalized so that they are orthonormal in L^2(S^{d-1}); the Laplacian
is then diagonal with entries l(l+d-2) and only the potential matrix
needs quadrature.  For d = 3 a real spherical-harmonic path handles
weights that depend on both angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh
from scipy.special import sph_harm_y

from . import sphere
from .errors import DomainError, UsageError
from .weights import PolarPower, WeightSpec, adapted_rule, integral, lp_norm

DEFAULT_L = 64
DEFAULT_TOL = 1e-8
BOUND_TOL = 1e-6


def laplace_beltrami_eigenvalue(l: int, d: int) -> float:
    """Eigenvalue l(l+d-2) of -Laplace_Beltrami on S^{d-1}."""
    if l < 0 or d < 2:
        raise DomainError(f"need l >= 0 and d >= 2, got l={l}, d={d}")
    return float(l * (l + d - 2))


@dataclass(frozen=True)
class SpectralBasis:
    """Orthonormal axisymmetric eigenfunctions b_0..b_L of -Laplace_Beltrami."""

    d: int
    L: int

    def __post_init__(self):
        if self.d < 3:
            raise DomainError("the axisymmetric basis needs d >= 3")
        if self.L < 0:
            raise DomainError("degree L must be >= 0")

    @property
    def eigenvalues(self) -> np.ndarray:
        l = np.arange(self.L + 1, dtype=float)
        return l * (l + self.d - 2)

    def evaluate(self, theta) -> np.ndarray:
        """Matrix of shape (len(theta), L+1) with b_l(theta_i)."""
        t = np.cos(np.asarray(theta, dtype=float))
        a = (self.d - 3) / 2
        beta = sphere.jacobi_offdiagonal(a, max(self.L, 1))
        out = np.empty((t.size, self.L + 1))
        out[:, 0] = 1.0 / math.sqrt(sphere.jacobi_mass(a) * sphere.surface_area(self.d - 1))
        if self.L >= 1:
            out[:, 1] = t * out[:, 0] / beta[0]
        for n in range(1, self.L):
            out[:, n + 1] = (t * out[:, n] - beta[n - 1] * out[:, n - 1]) / beta[n]
        return out

    def synthesize(self, coefficients, theta) -> np.ndarray:
        c = np.asarray(coefficients, dtype=float)
        return self.evaluate(theta)[:, : c.size] @ c

    def gram(self, rule: sphere.QuadratureRule) -> np.ndarray:
        B = self.evaluate(rule.theta)
        return (B.T * rule.weights) @ B


@dataclass
class EigenResult:
    lambda1: float
    coefficients: np.ndarray
    residual: float
    L_used: int
    converged: bool
    d: int
    tol: float = DEFAULT_TOL
    lambda1_coarse: Optional[float] = None
    path: str = "axisymmetric"
    history: List[Tuple[int, float]] = field(default_factory=list)


def _check_potential(phi: WeightSpec, d: int):
    # Phi must lie in L^p for some p > max(1, (d-1)/2); for theta^{-beta}
    # that means beta < 2
    if d < 3:
        raise DomainError("spectral computations need d >= 3")
    if isinstance(phi, PolarPower) and phi.beta > 0:
        limit = (d - 1) / max(1.0, (d - 1) / 2)
        if phi.beta >= limit - 1e-9:
            raise DomainError(
                f"polar_power with beta={phi.beta} is in no L^p with "
                f"p > max(1, (d-1)/2); need beta < {limit}")


def potential_matrix(phi: WeightSpec, basis: SpectralBasis,
                     rule: Optional[sphere.QuadratureRule] = None) -> np.ndarray:
    """Matrix of integrals of Phi * b_l * b_m over S^{d-1}."""
    if rule is None:
        rule = adapted_rule(phi, basis.d, degree=2 * basis.L + 8)
    B = basis.evaluate(rule.theta)
    M = (B.T * (rule.weights * phi(rule.theta))) @ B
    return 0.5 * (M + M.T)


def _ground_state(H: np.ndarray):
    vals, vecs = eigh(H, subset_by_index=[0, 0])
    v = vecs[:, 0]
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    lam = float(vals[0])
    return lam, v, float(np.linalg.norm(H @ v - lam * v))


def _solve_axisym(phi, d, L, rule):
    basis = SpectralBasis(d, L)
    H = np.diag(basis.eigenvalues) - potential_matrix(phi, basis, rule)
    return _ground_state(H)


def _doubling(solve, L, tol, max_L):
    if max_L is None:
        max_L = 2 * L
    lam, vec, res = solve(L)
    history = [(L, lam)]
    coarse, converged, L_used = None, False, L
    while 2 * L_used <= max_L:
        nxt = solve(2 * L_used)
        coarse = lam
        lam, vec, res = nxt
        L_used *= 2
        history.append((L_used, lam))
        if abs(lam - coarse) <= tol:
            converged = True
            break
    return lam, vec, res, L_used, converged, coarse, history


def lowest_eigenvalue(phi: WeightSpec, d: int, L: int = DEFAULT_L,
                      rule: Optional[sphere.QuadratureRule] = None,
                      tol: float = DEFAULT_TOL, max_L: Optional[int] = None) -> EigenResult:
    """Rayleigh-Ritz lambda_1 of -Laplace_Beltrami - Phi in the axisymmetric sector.

    Degree L is doubled (by default once, up to ``max_L`` if given) and
    ``converged`` records whether the last doubling moved lambda_1 by at
    most ``tol``.  The returned eigenpair belongs to the finest degree.
    """
    if not phi.axisymmetric:
        raise UsageError("non-axisymmetric weights need lowest_eigenvalue_s2 (d = 3)")
    _check_potential(phi, d)
    if L < 0:
        raise DomainError("L must be >= 0")
    lam, vec, res, L_used, conv, coarse, hist = _doubling(
        lambda n: _solve_axisym(phi, d, n, rule), L, tol, max_L)
    return EigenResult(lam, vec, res, L_used, conv, d, tol, coarse, "axisymmetric", hist)


# --- full spherical-harmonic path on S^2 -----------------------------------

def real_sph_harm(L: int, theta, phi) -> Tuple[np.ndarray, np.ndarray]:
    """Real orthonormal spherical harmonics up to degree L.

    Returns (values with shape (npoints, (L+1)^2), degree of each column).
    """
    theta = np.asarray(theta, dtype=float).ravel()
    phi = np.asarray(phi, dtype=float).ravel()
    cols, degs = [], []
    for l in range(L + 1):
        for m in range(-l, l + 1):
            y = sph_harm_y(l, abs(m), theta, phi)
            if m == 0:
                cols.append(y.real)
            elif m > 0:
                cols.append(math.sqrt(2) * y.real)
            else:
                cols.append(math.sqrt(2) * y.imag)
            degs.append(l)
    return np.stack(cols, axis=1), np.array(degs)


def _s2_rule(phi: WeightSpec, L: int) -> sphere.QuadratureRule:
    degree = 2 * L + 8
    if isinstance(phi, PolarPower) and phi.beta > 0:
        base = sphere.split_rule(3, phi.beta, degree=degree)
    else:
        base = sphere.panel_rule(3, phi.breakpoints, degree=degree)
    return sphere.full_s2_rule(base, 4 * L + 8)


def _solve_s2(phi, L, rule):
    rule = rule or _s2_rule(phi, L)
    T, P = np.meshgrid(rule.theta, rule.phi, indexing="ij")
    Y, degs = real_sph_harm(L, T, P)
    vals = phi(T, P) if not phi.axisymmetric else phi(T)
    w = (rule.weights * vals).ravel()
    M = (Y.T * w) @ Y
    H = np.diag(degs * (degs + 1.0)) - 0.5 * (M + M.T)
    return _ground_state(H)


def lowest_eigenvalue_s2(phi: WeightSpec, L: int = 16,
                         rule: Optional[sphere.QuadratureRule] = None,
                         tol: float = DEFAULT_TOL, max_L: Optional[int] = None) -> EigenResult:
    """lambda_1 on S^2 in the full real spherical-harmonic basis (no symmetry assumed)."""
    _check_potential(phi, 3)
    lam, vec, res, L_used, conv, coarse, hist = _doubling(
        lambda n: _solve_s2(phi, n, rule), L, tol, max_L)
    return EigenResult(lam, vec, res, L_used, conv, 3, tol, coarse, "full_s2", hist)


def compare_paths(phi: WeightSpec, L_axisym: int = DEFAULT_L, L_s2: int = 16,
                  tol: float = 1e-6) -> dict:
    """Run both d = 3 paths; the discrepancy is reported, never reconciled."""
    a = lowest_eigenvalue(phi, 3, L_axisym, max_L=L_axisym)
    b = lowest_eigenvalue_s2(phi, L_s2, max_L=L_s2)
    diff = abs(a.lambda1 - b.lambda1)
    return {"axisymmetric": a.lambda1, "full_s2": b.lambda1,
            "discrepancy": diff, "agree": diff <= tol}


def negativity_check(phi: WeightSpec, result: EigenResult) -> bool:
    """True iff lambda_1 < 0, which must hold for any non-trivial Phi >= 0."""
    if not integral(phi, result.d) > 0:
        raise DomainError("negativity check needs a weight with positive integral")
    return result.lambda1 < 0


@dataclass(frozen=True)
class BoundReport:
    d: int
    p: float
    mu: float
    alpha: float
    lambda1: float
    slack: float
    holds: bool
    endpoint: bool = False


def del_bound_check(phi: WeightSpec, p: float, d: int, result: EigenResult, curve,
                    tol: float = BOUND_TOL) -> BoundReport:
    """Check |lambda_1| <= alpha(||Phi||_p / |S^{d-1}|^{1/p}); slack = alpha - |lambda_1|."""
    endpoint = d >= 4 and math.isclose(p, (d - 1) / 2, rel_tol=1e-12)
    if not endpoint and not p > max(1.0, (d - 1) / 2):
        raise DomainError(f"p={p} outside the eigenvalue-bound range "
                          f"p > {max(1.0, (d - 1) / 2)} for d={d}")
    if curve.d != d or not math.isclose(curve.p, p, rel_tol=1e-12):
        raise UsageError(f"curve built for (d={curve.d}, p={curve.p}), not (d={d}, p={p})")
    if endpoint and not curve.endpoint:
        raise UsageError("p = (d-1)/2 needs a curve built with endpoint=True")
    mu = lp_norm(phi, p, d) / sphere.surface_area(d) ** (1.0 / p)
    alpha = curve.alpha(mu)
    slack = alpha - abs(result.lambda1)
    return BoundReport(d, p, mu, alpha, result.lambda1, slack, slack >= -tol, endpoint)
