"""Decreasing rearrangement of homogeneous weights W(x) = Phi(x/|x|) / |x|^{2k}.

The super-level set {W > t} is star-shaped with radius (Phi(w)/t)^{1/2k} in
direction w, so its volume is t^{-d/2k} / d times the integral of
Phi^{d/2k}.  Matching that volume with a centred ball gives the closed form

    W*(x) = ||Phi||_{d/2k} |S^{d-1}|^{-2k/d} / |x|^{2k}.

The numeric checks below rebuild W* from the level sets node by node and
compare, and test the discrete Hardy-Littlewood inequality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from . import sphere
from .errors import ConvergenceError, DomainError
from .weights import WeightSpec, adapted_rule, lp_norm


@dataclass(frozen=True)
class HomogeneousWeight:
    """W(x) = Phi(x/|x|) / |x|^{2 kappa} on R^d."""

    phi: WeightSpec
    kappa: float
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"need d >= 2, got d={self.d}")
        if not 0 < self.kappa < self.d / 2:
            raise DomainError(f"need 0 < kappa < d/2 = {self.d / 2}, got {self.kappa}")
        # raises NotInLpError when Phi is not in L^{d/2k}
        lp_norm(self.phi, self.exponent, self.d)

    @property
    def exponent(self) -> float:
        return self.d / (2 * self.kappa)

    def norm(self) -> float:
        return lp_norm(self.phi, self.exponent, self.d)


@dataclass(frozen=True)
class RearrangedWeight:
    """W*(x) = coefficient / |x|^{2 kappa}."""

    coefficient: float
    kappa: float
    d: int

    def __call__(self, r):
        return self.coefficient / np.asarray(r, dtype=float) ** (2 * self.kappa)

    def level_volume(self, t: float) -> float:
        """Volume of the ball {W* > t}."""
        if not t > 0:
            raise DomainError(f"need t > 0, got {t}")
        return sphere.surface_area(self.d) / self.d * (self.coefficient / t) ** (self.d / (2 * self.kappa))


def ball_volume(d: int, r: float) -> float:
    return sphere.surface_area(d) / d * r ** d


def level_set_measure(w: HomogeneousWeight, t: float) -> float:
    """|{W > t}| = t^{-d/2k} / d * integral of Phi^{d/2k}."""
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    return w.norm() ** w.exponent * t ** (-w.exponent) / w.d


def rearranged_weight(w: HomogeneousWeight) -> RearrangedWeight:
    return RearrangedWeight(w.norm() / sphere.surface_area(w.d) ** (2 * w.kappa / w.d),
                            w.kappa, w.d)


def _geometric_volume(w: HomogeneousWeight, rule, phi_nodes, t: float) -> float:
    # sum over angular nodes of the radial extent of {W > t}, R^d / d
    R = (phi_nodes / t) ** (1 / (2 * w.kappa))
    return float(np.dot(rule.weights, R ** w.d)) / w.d


def numeric_rearrangement_check(w: HomogeneousWeight, radii: Sequence[float],
                                degree: int = 96, rule=None) -> float:
    """Max relative gap between the layer-cake W* and the closed form over ``radii``.

    For each r the threshold t(r) solving |{W > t}| = |B_r| is found by
    bracketing in log t, where the level-set volume is assembled node by
    node from the star-shaped region rather than from the norm.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise DomainError("radii must be a positive increasing grid")
    if w.d < 3:
        raise DomainError("numeric rearrangement needs d >= 3")
    rule = rule or adapted_rule(w.phi, w.d, degree=degree, power=w.exponent)
    phi_nodes = w.phi(rule.theta)
    closed = rearranged_weight(w)
    worst = 0.0
    for r in radii:
        target = ball_volume(w.d, r)
        t_guess = float(closed(r))
        if t_guess == 0:
            worst = max(worst, 0.0)
            continue

        def f(logt):
            return math.log(_geometric_volume(w, rule, phi_nodes, math.exp(logt))) - math.log(target)

        lo, hi = math.log(t_guess) - 1.0, math.log(t_guess) + 1.0
        for _ in range(60):
            if f(lo) > 0 > f(hi):
                break
            lo, hi = lo - 2.0, hi + 2.0
        else:
            raise ConvergenceError("could not bracket the level-set threshold", bracket=(lo, hi))
        t = math.exp(brentq(f, lo, hi, xtol=1e-15, rtol=1e-15))
        worst = max(worst, abs(t - t_guess) / t_guess)
    return worst


def equimeasurability_check(w: HomogeneousWeight, n_t: int = 64, degree: int = 96,
                            r_range: Tuple[float, float] = (0.1, 10.0)) -> float:
    """Max relative gap between |{W > t}| (node-by-node) and |{W* > t}|.

    Thresholds are log-spaced over the values W takes on the unit sphere
    scaled to radii in ``r_range``.
    """
    rule = adapted_rule(w.phi, w.d, degree=degree, power=w.exponent)
    phi_nodes = w.phi(rule.theta)
    star = rearranged_weight(w)
    positive = phi_nodes[phi_nodes > 0]
    if positive.size == 0:
        raise DomainError("weight vanishes identically")
    t_hi = positive.max() / r_range[0] ** (2 * w.kappa)
    t_lo = positive.min() / r_range[1] ** (2 * w.kappa)
    worst = 0.0
    for t in np.geomspace(t_lo, t_hi, n_t):
        a = _geometric_volume(w, rule, phi_nodes, t)
        b = star.level_volume(t)
        worst = max(worst, abs(a - b) / b)
    return worst


def shell_volumes(edges: Sequence[float], d: int) -> np.ndarray:
    """Volumes of the shells between consecutive radii in ``edges``."""
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0) or e[0] < 0:
        raise DomainError("edges must be a non-negative increasing grid with >= 2 points")
    return sphere.surface_area(d) / d * np.diff(e ** d)


def _decreasing(values: np.ndarray, volumes: np.ndarray):
    # stable sort keeps ties in index order
    order = np.argsort(-values, kind="stable")
    ends = np.concatenate([[0.0], np.cumsum(volumes[order])])
    return ends, values[order]


def _step_product(e1, v1, e2, v2) -> float:
    cuts = np.union1d(e1, e2)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    i1 = np.clip(np.searchsorted(e1, mids, side="right") - 1, 0, v1.size - 1)
    i2 = np.clip(np.searchsorted(e2, mids, side="right") - 1, 0, v2.size - 1)
    return float(np.sum(np.diff(cuts) * v1[i1] * v2[i2]))


def hardy_littlewood_check(f_vals, g_vals, volumes, tol: float = 1e-12) -> Tuple[bool, float]:
    """(holds, gap) for sum f g vol <= integral of f* g*.

    f* and g* are the decreasing rearrangements of the step functions with
    the given cell volumes; the gap is integral f* g* - sum f g vol.
    """
    f = np.asarray(f_vals, dtype=float)
    g = np.asarray(g_vals, dtype=float)
    vol = np.asarray(volumes, dtype=float)
    if not (f.shape == g.shape == vol.shape) or f.ndim != 1:
        raise DomainError("f, g and volumes must be 1-d arrays of equal length")
    if np.any(f < 0) or np.any(g < 0) or np.any(vol <= 0):
        raise DomainError("need f, g >= 0 and positive volumes")
    plain = float(np.sum(f * g * vol))
    ef, vf = _decreasing(f, vol)
    eg, vg = _decreasing(g, vol)
    # both rearrangements live on [0, total volume]; align the end points
    eg[-1] = ef[-1]
    gap = _step_product(ef, vf, eg, vg) - plain
    scale = max(plain, 1e-300)
    return gap >= -tol * scale, gap
