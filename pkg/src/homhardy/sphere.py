"""Surface measure and quadrature on the unit sphere S^{d-1}.

Axisymmetric functions g(theta) of the polar angle are integrated against

    dtheta-measure = |S^{d-2}| sin^{d-2}(theta) dtheta,

and every rule below stores weights that already absorb that factor, so
``integrate(rule, g(rule.theta))`` approximates the surface integral of g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betainc, roots_jacobi, roots_legendre

from .errors import DomainError, EvaluationError

DEFAULT_NODES = 128
SPLIT_ANGLE = 0.1
GRADING_RATIO = 0.5
GRADED_PANELS = 40


def surface_area(d: int) -> float:
    """|S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)."""
    if d < 2:
        raise DomainError(f"surface_area needs d >= 2, got d={d}")
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def cap_area(d: int, theta_c: float) -> float:
    """Area of the geodesic cap {theta < theta_c} on S^{d-1}, in closed form."""
    if not 0.0 <= theta_c <= math.pi:
        raise DomainError(f"cap angle must lie in [0, pi], got {theta_c}")
    if d == 2:
        return 2.0 * theta_c
    total = surface_area(d)
    a = (d - 1) / 2
    if theta_c <= math.pi / 2:
        return 0.5 * total * float(betainc(a, 0.5, math.sin(theta_c) ** 2))
    return total - 0.5 * total * float(betainc(a, 0.5, math.sin(theta_c) ** 2))


def _freeze(arr) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for integration over S^{d-1}.

    ``kind`` is ``"axisymmetric"`` (nodes are polar angles) or ``"full_s2"``
    (tensor grid in (theta, phi) on S^2; ``weights`` then has shape
    ``(len(theta), len(phi))``).  ``degree`` is the polynomial degree in
    cos(theta) integrated exactly, when known.
    """

    kind: str
    d: int
    theta: np.ndarray
    weights: np.ndarray
    phi: Optional[np.ndarray] = None
    degree: Optional[int] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "theta", _freeze(self.theta))
        object.__setattr__(self, "weights", _freeze(self.weights))
        if self.phi is not None:
            object.__setattr__(self, "phi", _freeze(self.phi))
        if np.any(self.weights <= 0):
            raise DomainError("quadrature weights must be positive")

    @property
    def size(self) -> int:
        return int(self.weights.size)


# --- Gauss-Jacobi machinery for the weight (1 - t^2)^a on [-1, 1] -----------

def jacobi_offdiagonal(a: float, n: int) -> np.ndarray:
    """Off-diagonal of the symmetric Jacobi matrix for weight (1-t^2)^a.

    Entry k-1 couples orthonormal polynomials of degree k-1 and k.
    """
    k = np.arange(1, n + 1, dtype=float)
    return np.sqrt(k * (k + 2 * a) / ((2 * k + 2 * a + 1) * (2 * k + 2 * a - 1)))


def jacobi_mass(a: float) -> float:
    """Integral of (1-t^2)^a over [-1, 1]."""
    return math.sqrt(math.pi) * math.exp(math.lgamma(a + 1) - math.lgamma(a + 1.5))


def gauss_jacobi_symmetric(n: int, a: float):
    """Golub-Welsch nodes (ascending) and weights for (1-t^2)^a dt."""
    if n < 1:
        raise DomainError("need at least one node")
    if n == 1:
        return np.zeros(1), np.array([jacobi_mass(a)])
    x, v = eigh_tridiagonal(np.zeros(n), jacobi_offdiagonal(a, n - 1))
    w = jacobi_mass(a) * v[0] ** 2
    # symmetrize against round-off in the eigensolver
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def axisym_rule(d: int, n: int = DEFAULT_NODES) -> QuadratureRule:
    """Gauss-Jacobi rule in t = cos(theta), exact for polynomials of degree 2n-1."""
    if d < 3:
        raise DomainError(f"axisym_rule needs d >= 3, got d={d}")
    if n < 2:
        raise DomainError(f"axisym_rule needs n >= 2, got n={n}")
    t, w = gauss_jacobi_symmetric(n, (d - 3) / 2)
    # t ascending means theta descending; flip so theta ascends
    theta = np.arccos(t[::-1])
    return QuadratureRule("axisymmetric", d, theta, surface_area(d - 1) * w[::-1],
                          degree=2 * n - 1, label=f"gauss-jacobi n={n}")


def _panel_count(length: float, degree: int, n_min: int) -> int:
    # Gauss-Legendre resolves a trig polynomial of degree K on a panel of
    # length l with roughly K*l/4 nodes; pad for safety
    return max(n_min, int(math.ceil(0.3 * degree * length)) + 16)


def _legendre_panel(a: float, b: float, n: int):
    x, w = roots_legendre(n)
    return 0.5 * (b - a) * (x + 1) + a, 0.5 * (b - a) * w


def _measure(d: int, theta: np.ndarray) -> np.ndarray:
    return surface_area(d - 1) * np.sin(theta) ** (d - 2)


def _clean_breaks(breakpoints: Sequence[float], lo: float, hi: float):
    pts = sorted({float(b) for b in breakpoints if lo < b < hi})
    return [lo] + pts + [hi]


def panel_rule(d: int, breakpoints: Sequence[float] = (), degree: int = 64,
               n_min: int = 16) -> QuadratureRule:
    """Composite Gauss-Legendre rule in theta with panels split at ``breakpoints``.

    Meant for integrands that are smooth inside each panel but have jumps
    or kinks at the breakpoints (cap indicators, tabulated weights).
    """
    if d < 3:
        raise DomainError(f"panel_rule needs d >= 3, got d={d}")
    edges = _clean_breaks(breakpoints, 0.0, math.pi)
    th, wt = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = _legendre_panel(a, b, _panel_count(b - a, degree, n_min))
        th.append(x)
        wt.append(w)
    theta = np.concatenate(th)
    weights = np.concatenate(wt) * _measure(d, theta)
    return QuadratureRule("axisymmetric", d, theta, weights,
                          label=f"panels={len(edges) - 1} degree={degree}")


def split_rule(d: int, beta: float, degree: int = 64,
               breakpoints: Sequence[float] = (), split: float = SPLIT_ANGLE,
               ratio: float = GRADING_RATIO, panels: int = GRADED_PANELS,
               n_graded: int = 12) -> QuadratureRule:
    """Rule for integrands behaving like theta^{-beta} near the pole theta = 0.

    [0, split] is cut into geometrically graded panels; the innermost one
    uses Gauss-Jacobi nodes for the weight theta^{-beta}, so the power
    singularity is integrated exactly.  [split, pi] is handled as in
    :func:`panel_rule`.
    """
    if d < 3:
        raise DomainError(f"split_rule needs d >= 3, got d={d}")
    if beta >= d - 1:
        raise DomainError(f"theta^(-{beta}) is not integrable on S^{d - 1}")
    th, wt = [], []
    inner = split * ratio ** panels
    n_in = max(n_graded, 8)
    # Jacobi weight theta^gamma, gamma = d-2-beta, covers the singularity
    # together with the sin^{d-2} measure; (sin t / t)^{d-2} stays smooth
    gamma = d - 2 - beta
    x, w = roots_jacobi(n_in, 0.0, gamma)
    t_in = 0.5 * inner * (x + 1)
    w_in = (0.5 * inner) ** (1 + gamma) * w * t_in ** (-gamma)
    th.append(t_in)
    wt.append(w_in)
    hi = split
    graded = []
    for _ in range(panels):
        lo = hi * ratio
        graded.append((lo, hi))
        hi = lo
    for lo, hi in reversed(graded):
        x, w = _legendre_panel(lo, hi, _panel_count(hi - lo, degree, n_graded))
        th.append(x)
        wt.append(w)
    edges = _clean_breaks(breakpoints, split, math.pi)
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = _legendre_panel(a, b, _panel_count(b - a, degree, 16))
        th.append(x)
        wt.append(w)
    theta = np.concatenate(th)
    weights = np.concatenate(wt) * _measure(d, theta)
    return QuadratureRule("axisymmetric", d, theta, weights,
                          label=f"split beta={beta} degree={degree}")


def full_s2_rule(theta_rule: QuadratureRule, n_phi: int) -> QuadratureRule:
    """Tensor rule on S^2: an axisymmetric d=3 rule times the uniform rule in phi."""
    if theta_rule.d != 3 or theta_rule.kind != "axisymmetric":
        raise DomainError("full_s2_rule needs an axisymmetric rule with d=3")
    if n_phi < 1:
        raise DomainError("n_phi must be positive")
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    weights = np.outer(theta_rule.weights, np.full(n_phi, 1.0 / n_phi))
    return QuadratureRule("full_s2", 3, theta_rule.theta, weights, phi=phi,
                          degree=theta_rule.degree,
                          label=f"{theta_rule.label} x uniform({n_phi})")


def integrate(rule: QuadratureRule, samples) -> float:
    """Weighted sum of ``samples`` (values at the rule's nodes)."""
    s = np.asarray(samples, dtype=float)
    if s.size != rule.weights.size:
        raise DomainError(f"expected {rule.weights.size} samples, got {s.size}")
    s = s.reshape(rule.weights.shape)
    bad = np.flatnonzero(~np.isfinite(s.ravel()))
    if bad.size:
        i = int(bad[0])
        if rule.kind == "full_s2":
            it, ip = np.unravel_index(i, rule.weights.shape)
            where = f"theta={rule.theta[it]!r}, phi={rule.phi[ip]!r}"
        else:
            where = f"theta={rule.theta[i]!r}"
        raise EvaluationError(f"non-finite sample at node {i} ({where})", index=i)
    return float(np.dot(rule.weights.ravel(), s.ravel()))
