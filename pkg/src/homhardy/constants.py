"""Closed-form Hardy constants tau, nu0, tau(nu) and the fractional C_kappa.

Every function returns plain floats; :class:`HardyConstants` bundles a
constant with the theorem id and the formula that produced it, so reports
stay self-describing.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from . import sphere
from .errors import DomainError, UsageError
from .weights import critical_p, p_range

FORMULAS = {
    "main": "tau = (d-2)^2/4 * |S^{d-1}|^{1/p} / ||Phi||_p",
    "main2": "tau = nu0 (d-2)^2/4 * |S^{d-1}|^{1/p} / ||Phi||_p, nu0 = 2(d-1)(p-1)/(d-2)^2",
    "theorem4": "tau = |S^{d-1}|^{1/p} mu(nu (d-2)^2/4) / ||Phi||_p",
    "fractional": "tau = 2^{2k} G^2((d/2+k)/2) / G^2((d/2-k)/2) * |S^{d-1}|^{2k/d} / ||Phi||_{d/2k}",
}


@dataclass(frozen=True)
class HardyConstants:
    theorem_id: str
    d: int
    p: float
    kappa: float
    tau: float
    phi_norm: float
    nu0: Optional[float] = None
    nu: Optional[float] = None
    mu: Optional[float] = None
    alpha: Optional[float] = None

    @property
    def formula(self) -> str:
        return FORMULAS[self.theorem_id]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["formula"] = self.formula
        return out


def _classical(d: int) -> float:
    return (d - 2) ** 2 / 4


def _check_norm(phi_norm: float):
    if not phi_norm > 0 or not math.isfinite(phi_norm):
        raise DomainError(f"need a finite positive weight norm, got {phi_norm}")


def tau_theorem_main(d: int, p: float, phi_norm: float) -> float:
    """(d-2)^2/4 |S^{d-1}|^{1/p} / ||Phi||_p for p >= (d-2)^2/(2(d-1)) + 1."""
    rng = p_range(d, "main")
    if p not in rng:
        raise DomainError(f"p={p} below the bound (d-2)^2/(2(d-1)) + 1 = {rng.lower} for d={d}")
    _check_norm(phi_norm)
    return _classical(d) * sphere.surface_area(d) ** (1 / p) / phi_norm


def nu0(d: int, p: float) -> float:
    """2(d-1)(p-1)/(d-2)^2; equals 1 at the lower end of the main range.

    Accepted for p in the second theorem's range and, as the limiting case,
    at p = (d-2)^2/(2(d-1)) + 1 itself.
    """
    rng = p_range(d, "main2")
    pc = critical_p(d)
    if p not in rng and not math.isclose(p, pc, rel_tol=1e-12):
        raise DomainError(f"p={p} outside {rng.describe()} for d={d}")
    return 2 * (d - 1) * (p - 1) / (d - 2) ** 2


def tau_theorem2(d: int, p: float, phi_norm: float):
    """(nu0, tau) with tau = nu0 (d-2)^2/4 |S^{d-1}|^{1/p} / ||Phi||_p."""
    n0 = nu0(d, p)
    _check_norm(phi_norm)
    return n0, n0 * _classical(d) * sphere.surface_area(d) ** (1 / p) / phi_norm


def tau_theorem4(d: int, p: float, nu: float, phi_norm: float, curve) -> float:
    """|S^{d-1}|^{1/p} mu(nu (d-2)^2/4) / ||Phi||_p for nu in (nu0, 1]."""
    rng = p_range(d, "theorem4")
    if p not in rng:
        raise DomainError(f"p={p} outside {rng.describe()} for d={d}")
    n0 = 2 * (d - 1) * (p - 1) / (d - 2) ** 2
    if not nu > n0:
        raise DomainError(f"nu={nu} <= nu0={n0}; the nu0 inequality applies instead")
    if nu > 1:
        raise DomainError(f"need nu <= 1, got {nu}")
    _check_norm(phi_norm)
    if curve.d != d or not math.isclose(curve.p, p, rel_tol=1e-12):
        raise UsageError(f"curve built for (d={curve.d}, p={curve.p}), not (d={d}, p={p})")
    return sphere.surface_area(d) ** (1 / p) * curve.mu(nu * _classical(d)) / phi_norm


def constants_theorem4(d: int, p: float, nu: float, phi_norm: float, curve) -> HardyConstants:
    tau = tau_theorem4(d, p, nu, phi_norm, curve)
    alpha = nu * _classical(d)
    return HardyConstants("theorem4", d, p, 1.0, tau, phi_norm,
                          nu0=2 * (d - 1) * (p - 1) / (d - 2) ** 2, nu=nu,
                          mu=curve.mu(alpha), alpha=alpha)


def constants_main(d: int, p: float, phi_norm: float) -> HardyConstants:
    return HardyConstants("main", d, p, 1.0, tau_theorem_main(d, p, phi_norm), phi_norm)


def constants_main2(d: int, p: float, phi_norm: float) -> HardyConstants:
    n0, tau = tau_theorem2(d, p, phi_norm)
    return HardyConstants("main2", d, p, 1.0, tau, phi_norm, nu0=n0, nu=n0)


def _gamma_ratio_sq(d: int, kappa: float) -> float:
    # Gamma^2((d/2 - k)/2) / Gamma^2((d/2 + k)/2), via lgamma for range safety
    return math.exp(2 * (math.lgamma((d / 2 - kappa) / 2) - math.lgamma((d / 2 + kappa) / 2)))


def c_kappa(d: int, kappa: float) -> float:
    """2^{-2k} Gamma^2((d/2-k)/2) / Gamma^2((d/2+k)/2) for 0 < k < d/2."""
    if not 0 < kappa < d / 2:
        raise DomainError(f"need 0 < kappa < d/2 = {d / 2}, got {kappa}")
    return 2 ** (-2 * kappa) * _gamma_ratio_sq(d, kappa)


def _check_kappa(d: int, kappa: float):
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    if d <= 2:
        if not 0 < kappa < d / 2:
            raise DomainError(f"for d={d} need 0 < kappa < d/2 = {d / 2}, got {kappa}")
    elif not 0 < kappa <= 1:
        raise DomainError(f"for d={d} >= 3 need 0 < kappa <= 1, got {kappa}")


def tau_fractional(d: int, kappa: float, phi_norm_d2k: float) -> float:
    """|S^{d-1}|^{2k/d} / (C_k ||Phi||_{d/2k})."""
    _check_kappa(d, kappa)
    _check_norm(phi_norm_d2k)
    return sphere.surface_area(d) ** (2 * kappa / d) / (c_kappa(d, kappa) * phi_norm_d2k)


def constants_fractional(d: int, kappa: float, phi_norm_d2k: float) -> HardyConstants:
    return HardyConstants("fractional", d, d / (2 * kappa), kappa,
                          tau_fractional(d, kappa, phi_norm_d2k), phi_norm_d2k)


def embedding_exponents(d: int) -> dict:
    """Compare d/2 with (d-2)^2/(2(d-1)) + 1.

    The difference is (d-2)/(2(d-1)), positive for every d >= 3, so
    L^{d/2} sits strictly inside the main theorem's range of exponents.
    """
    if d < 3:
        raise DomainError("need d >= 3")
    fr, pc = d / 2, critical_p(d)
    return {"fractional": fr, "main": pc, "difference": fr - pc, "strict": fr > pc}
