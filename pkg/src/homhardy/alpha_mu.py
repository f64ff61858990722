"""The curve alpha(mu) bounding |lambda_1(-Laplace_Beltrami - Phi)| and its inverse.

For q = 2p/(p-1) the inverse is variational,

    mu(alpha) = |S^{d-1}|^{2/q-1} inf_u (||grad u||^2 + alpha ||u||^2) / ||u||_q^2,

and equals alpha up to the linear threshold (d-1)(p-1)/2.  Past the
threshold the infimum is computed in the axisymmetric sector on the
Gegenbauer basis of :mod:`homhardy.spectral`: projected gradient descent
on the sphere ||u||_q = 1, then Newton on the Euler-Lagrange equation.

The large-mu behaviour is governed by the Gagliardo-Nirenberg constant on
R^{d-1}, computed here by radial shooting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator
from scipy.linalg import solve
from scipy.optimize import brentq, minimize
from scipy.sparse import diags
from scipy.sparse.linalg import spsolve

from . import sphere
from .errors import ConvergenceError, DomainError, UsageError
from .spectral import SpectralBasis

MAX_L = 1024
TAIL_TOL = 1e-11
RESIDUAL_TOL = 1e-7
NEWTON_RTOL = 1e-12
PGD_GTOL = 1e-6
PGD_MAXITER = 5000
SEED_AMPLITUDE = 1e-2
POSITIVITY_RATIO = 40.0


def _p_from_q(q: float) -> float:
    return q / (q - 2.0)


def _q_from_p(p: float) -> float:
    return 2.0 * p / (p - 1.0)


def _is_endpoint(d: int, p: float) -> bool:
    return d >= 4 and math.isclose(p, (d - 1) / 2, rel_tol=1e-12)


def linear_threshold(d: int, p: float, endpoint: bool = False) -> float:
    """Largest alpha with mu(alpha) = alpha, i.e. (d-1)(p-1)/2.

    With ``endpoint=True`` (only for p = (d-1)/2, d >= 4) the enlarged
    window (d-1)(d-3)/2 is returned instead; see :func:`endpoint_windows`.
    """
    if d < 3:
        raise DomainError(f"need d >= 3, got d={d}")
    if endpoint:
        if not _is_endpoint(d, p):
            raise DomainError(f"endpoint flag needs d >= 4 and p = (d-1)/2 = {(d - 1) / 2}, got p={p}")
        return (d - 1) * (d - 3) / 2
    lower = max(1.0, (d - 1) / 2)
    if not p > lower:
        raise DomainError(f"need p > {lower} for d={d}, got p={p}"
                          + (" (use endpoint=True at p = (d-1)/2)" if _is_endpoint(d, p) else ""))
    return (d - 1) * (p - 1) / 2


def endpoint_windows(d: int) -> Dict[str, float]:
    """Both candidate linear windows at p = (d-1)/2.

    ``stated`` is (d-1)(d-3)/2; ``generic`` is the limit (d-1)(p-1)/2 of
    the ordinary threshold, (d-1)(d-3)/4.  Past ``generic`` the constant
    stops minimizing the critical Sobolev quotient on S^{d-1}, so bounds
    with mu in the gap between the two are flagged rather than trusted.
    """
    if d < 4:
        raise DomainError("the endpoint p = (d-1)/2 needs d >= 4")
    return {"stated": (d - 1) * (d - 3) / 2, "generic": (d - 1) * (d - 3) / 4}


def _check_q(d: int, q: float):
    if not q > 2:
        raise DomainError(f"need q > 2, got q={q}")
    if d >= 4:
        crit = 2 * (d - 1) / (d - 3)
        if not q < crit:
            raise DomainError(f"need q < 2(d-1)/(d-3) = {crit} for d={d}, got q={q}")


# --- discretization ----------------------------------------------------------

@dataclass(frozen=True)
class _Grid:
    d: int
    L: int
    B: np.ndarray       # basis values at nodes, (n, L+1)
    w: np.ndarray       # quadrature weights (include the sphere measure)
    lam: np.ndarray     # l(l+d-2)
    theta: np.ndarray


_GRIDS: Dict[tuple, _Grid] = {}


def _grid(d: int, L: int) -> _Grid:
    key = (d, L)
    if key not in _GRIDS:
        rule = sphere.axisym_rule(d, 2 * L + 32)
        basis = SpectralBasis(d, L)
        _GRIDS[key] = _Grid(d, L, basis.evaluate(rule.theta), np.asarray(rule.weights),
                            basis.eigenvalues, np.asarray(rule.theta))
        if len(_GRIDS) > 16:
            _GRIDS.pop(next(iter(_GRIDS)))
    return _GRIDS[key]


@dataclass
class Minimizer:
    """Axisymmetric profile u(theta) = sum_l c_l b_l(theta), with ||u||_q = 1."""

    d: int
    q: float
    coefficients: np.ndarray

    @property
    def L(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, theta) -> np.ndarray:
        return SpectralBasis(self.d, self.L).synthesize(self.coefficients, np.atleast_1d(theta))

    def lq_norm(self) -> float:
        g = _grid(self.d, self.L)
        return float(np.dot(g.w, np.abs(g.B @ self.coefficients) ** self.q)) ** (1 / self.q)

    def l2_norm_sq(self) -> float:
        return float(np.dot(self.coefficients, self.coefficients))

    def perturbed(self, amplitude: float, mode: int = 1) -> "Minimizer":
        c = self.coefficients.copy()
        c[mode] += amplitude
        return Minimizer(self.d, self.q, c)

    @classmethod
    def constant(cls, d: int, q: float, L: int = 1) -> "Minimizer":
        c = np.zeros(L + 1)
        # b_0 = |S|^{-1/2}; u = |S|^{-1/q} has unit L^q norm
        c[0] = sphere.surface_area(d) ** (0.5 - 1 / q)
        return cls(d, q, c)


@dataclass
class MuResult:
    alpha: float
    mu: float
    d: int
    q: float
    minimizer: Minimizer
    dmu_dalpha: float
    residual: float
    L_used: int
    linear: bool
    certificate: Dict[str, float] = field(default_factory=dict)


def _quotient(g: _Grid, alpha: float, q: float, c: np.ndarray) -> float:
    u = g.B @ c
    return float(np.dot(g.lam + alpha, c * c) / np.dot(g.w, np.abs(u) ** q) ** (2 / q))


def _pgd(g: _Grid, alpha: float, q: float, c: np.ndarray, gtol: float, maxiter: int):
    """Preconditioned projected gradient descent on ||u||_q = 1 with Armijo steps."""
    prec = 1.0 / (g.lam + alpha)
    gnorm = math.inf
    it = 0
    for it in range(1, maxiter + 1):
        u = g.B @ c
        c = c / np.dot(g.w, np.abs(u) ** q) ** (1 / q)
        u = g.B @ c
        E = float(np.dot(g.lam + alpha, c * c))
        grad = (g.lam + alpha) * c - E * (g.B.T @ (g.w * np.abs(u) ** (q - 2) * u))
        step = prec * grad
        gnorm = float(np.linalg.norm(step))
        if gnorm < gtol:
            break
        s, q0, slope = 1.0, _quotient(g, alpha, q, c), float(np.dot(grad, step))
        while _quotient(g, alpha, q, c - s * step) > q0 - 1e-4 * s * slope and s > 1e-12:
            s *= 0.5
        c = c - s * step
    return c, it, gnorm


def _newton(g: _Grid, alpha: float, q: float, v: np.ndarray, rtol: float, maxiter: int = 60):
    """Newton on (Lambda + alpha) v = B^T W |Bv|^{q-2} Bv for the unnormalized v."""
    A = g.lam + alpha
    rel = math.inf
    for k in range(maxiter + 1):
        u = g.B @ v
        F = A * v - g.B.T @ (g.w * np.abs(u) ** (q - 2) * u)
        rel = float(np.linalg.norm(F) / np.linalg.norm(A * v))
        if rel < rtol:
            return v, k, rel
        J = np.diag(A) - (q - 1) * (g.B.T * (g.w * np.abs(u) ** (q - 2))) @ g.B
        v = v - solve(J, F, assume_a="sym")
    return v, maxiter, rel


def _tail(v: np.ndarray) -> float:
    return float(np.abs(v[-5:]).max() / np.abs(v).max())


def _pad(v: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros(L + 1)
    n = min(L + 1, v.size)
    out[:n] = v[:n]
    return out


def default_degree(alpha: float) -> int:
    """Starting degree: the minimizer's width scales like alpha^{-1/2}."""
    return int(min(MAX_L, max(32, math.ceil(20 * math.sqrt(alpha)))))


def mu_of_alpha(alpha: float, d: int, q: float, L: Optional[int] = None,
                max_L: int = MAX_L, tail_tol: float = TAIL_TOL,
                residual_tol: float = RESIDUAL_TOL,
                newton_rtol: float = NEWTON_RTOL) -> MuResult:
    """mu(alpha) with its minimizer and a convergence certificate.

    Below the linear threshold the constant is returned without any
    optimization.  Above it, the degree starts at ``L`` (or
    :func:`default_degree`) and grows by half until the trailing
    coefficients fall below ``tail_tol`` relative to the largest one and
    the Euler-Lagrange residual below ``residual_tol``, or ``max_L`` is
    reached; ``certificate['resolved']`` records which.
    The slope d mu / d alpha = |S|^{2/q-1} ||u||_2^2 comes from the
    envelope theorem.
    """
    _check_q(d, q)
    if not alpha > 0:
        raise DomainError(f"need alpha > 0, got {alpha}")
    S = sphere.surface_area(d)
    threshold = (d - 1) / (q - 2)
    if alpha <= threshold:
        m = Minimizer.constant(d, q)
        return MuResult(alpha, alpha, d, q, m, 1.0, 0.0, 1, True,
                        {"resolved": 1.0, "positive": 1.0, "min_u": S ** (-1 / q)})
    L = L or default_degree(alpha)
    L = min(L, max_L)
    g = _grid(d, L)
    c = np.zeros(L + 1)
    c[0] = 1.0
    c[1] = SEED_AMPLITUDE
    c, iters, gnorm = _pgd(g, alpha, q, c, PGD_GTOL, PGD_MAXITER)
    E = float(np.dot(g.lam + alpha, c * c))
    v = c * E ** (1 / (q - 2))
    while True:
        v, steps, rel = _newton(g, alpha, q, v, newton_rtol)
        if rel >= newton_rtol:
            raise ConvergenceError(
                f"Newton stalled at relative residual {rel:.3e} (alpha={alpha}, L={g.L})",
                best=v, grad_norm=rel)
        tail = _tail(v)
        u = g.B @ v
        N = float(np.dot(g.w, np.abs(u) ** q))
        cvec = v / N ** (1 / q)
        Q = float(np.dot(g.lam + alpha, v * v)) / N ** (2 / q)
        mu = S ** (2 / q - 1) * Q
        res = euler_lagrange_residual(Minimizer(d, q, cvec), alpha, mu)
        resolved = tail <= tail_tol and res <= residual_tol
        if resolved or g.L >= max_L:
            break
        g = _grid(d, min(max_L, int(math.ceil(1.5 * g.L))))
        v = _pad(v, g.L)
    if cvec[0] < 0:
        cvec = -cvec
    m = Minimizer(d, q, cvec)
    u_nodes = g.B @ cvec
    cert = {"pgd_iterations": float(iters), "pgd_grad_norm": gnorm,
            "newton_steps": float(steps), "newton_residual": rel, "tail": tail,
            "resolved": float(resolved), "min_u": float(u_nodes.min()),
            "positive": float(u_nodes.min() > 0)}
    return MuResult(alpha, mu, d, q, m, S ** (2 / q - 1) * m.l2_norm_sq(),
                    res, g.L, False, cert)


def euler_lagrange_residual(minimizer: Minimizer, alpha: float, mu: float) -> float:
    """L^2 norm of -Lap u + alpha u - mu |S|^{1-2/q} u^{q-1} over the quadrature nodes.

    The factor |S|^{1-2/q} converts the normalized mu back to the raw
    Lagrange multiplier, so the constant |S|^{-1/q} has zero residual at
    mu = alpha.
    """
    d, q, c = minimizer.d, minimizer.q, minimizer.coefficients
    g = _grid(d, max(minimizer.L, 8))
    c = _pad(c, g.L)
    u = g.B @ c
    lap = g.B @ (g.lam * c)
    r = lap + alpha * u - mu * sphere.surface_area(d) ** (1 - 2 / q) * np.abs(u) ** (q - 2) * u
    return float(math.sqrt(np.dot(g.w, r * r)))


# --- independent finite-difference discretization ---------------------------

def _fd_operators(d: int, n: int):
    h = math.pi / n
    theta = (np.arange(n) + 0.5) * h
    faces = np.arange(1, n) * h
    Sm2 = sphere.surface_area(d - 1)
    mass = Sm2 * np.sin(theta) ** (d - 2) * h
    k = Sm2 * np.sin(faces) ** (d - 2) / h
    main = np.zeros(n)
    main[:-1] += k
    main[1:] += k
    stiff = diags([main, -k, -k], [0, 1, -1], format="csc")
    return theta, mass, stiff


def _fd_solve(d, q, alpha, n, v0):
    theta, mass, stiff = _fd_operators(d, n)
    A = stiff + alpha * diags(mass, format="csc")
    v = v0
    for _ in range(80):
        F = A @ v - mass * np.abs(v) ** (q - 2) * v
        if np.linalg.norm(F) < 1e-11 * np.linalg.norm(A @ v):
            break
        J = A - (q - 1) * diags(mass * np.abs(v) ** (q - 2), format="csc")
        v = v - spsolve(J, F)
    else:
        raise ConvergenceError("finite-difference Newton did not converge", best=v)
    Q = float(v @ (A @ v)) / float(np.dot(mass, np.abs(v) ** q)) ** (2 / q)
    return sphere.surface_area(d) ** (2 / q - 1) * Q, theta, v


def mu_of_alpha_fd(alpha: float, d: int, q: float, n: int = 400) -> float:
    """mu(alpha) from second-order finite differences on a uniform theta grid.

    Cell-centred grid, L-BFGS on the quotient at resolution n, Newton at
    n and 2n, Richardson extrapolation in h^2.  Shares nothing with the
    spectral path except the problem statement.
    """
    _check_q(d, q)
    threshold = (d - 1) / (q - 2)
    if alpha <= threshold:
        return alpha
    theta, mass, stiff = _fd_operators(d, n)
    A = stiff + alpha * diags(mass, format="csc")

    def fun(x):
        Av = A @ x
        N = float(np.dot(mass, np.abs(x) ** q))
        E = float(x @ Av)
        grad = 2 * Av / N ** (2 / q) - 2 * E * N ** (-2 / q - 1) * mass * np.abs(x) ** (q - 2) * x
        return E / N ** (2 / q), grad

    x0 = 1.0 + np.cos(theta)
    opt = minimize(fun, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": 20000, "gtol": 1e-12, "ftol": 1e-15})
    x = opt.x * np.sign(opt.x[np.argmax(np.abs(opt.x))])
    E = float(x @ (A @ x)) / float(np.dot(mass, np.abs(x) ** q))
    v = x * E ** (1 / (q - 2))
    mu1, th1, v1 = _fd_solve(d, q, alpha, n, v)
    v2 = np.repeat(v1, 2)
    mu2, _, _ = _fd_solve(d, q, alpha, 2 * n, v2)
    return (4 * mu2 - mu1) / 3


# --- the curve -----------------------------------------------------------------

def _monotone_hermite(x, y, dy):
    """Cubic Hermite interpolant when it is monotone (Fritsch-Carlson), else PCHIP."""
    delta = np.diff(y) / np.diff(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = dy[:-1] / delta
        b = dy[1:] / delta
    ok = np.all(delta > 0) and np.all(a >= 0) and np.all(b >= 0) and np.all(a * a + b * b <= 9)
    if ok:
        return CubicHermiteSpline(x, y, dy), "hermite"
    return PchipInterpolator(x, y), "pchip"


@dataclass
class AlphaMuCurve:
    """Sampled nonlinear branch of mu(alpha), with the linear part exact."""

    d: int
    p: float
    threshold: float
    alphas: np.ndarray
    mus: np.ndarray
    slopes: np.ndarray
    residuals: np.ndarray
    L_used: np.ndarray
    min_u: np.ndarray
    endpoint: bool = False
    interpolation: str = field(default="", init=False)

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=float)
        self.mus = np.asarray(self.mus, dtype=float)
        self.slopes = np.asarray(self.slopes, dtype=float)
        if self.alphas.size >= 2:
            self._mu_of_a, self.interpolation = _monotone_hermite(self.alphas, self.mus, self.slopes)
        else:
            self._mu_of_a = None
            self.interpolation = "linear-only"

    @property
    def q(self) -> float:
        return _q_from_p(self.p)

    @property
    def max_alpha(self) -> float:
        return float(self.alphas[-1]) if self.alphas.size else self.threshold

    @property
    def max_mu(self) -> float:
        return float(self.mus[-1]) if self.mus.size else self.threshold

    def mu(self, alpha: float) -> float:
        if alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {alpha}")
        if alpha <= self.threshold:
            return float(alpha)
        if alpha > self.max_alpha * (1 + 1e-14):
            raise DomainError(f"alpha={alpha} beyond the sampled range (max {self.max_alpha}); "
                              "extend the curve (larger max_ratio)")
        return float(self._mu_of_a(min(alpha, self.max_alpha)))

    def alpha(self, mu: float) -> float:
        if mu < 0:
            raise DomainError(f"mu must be >= 0, got {mu}")
        if mu <= self.threshold:
            return float(mu)
        if self._mu_of_a is None or mu > self.max_mu * (1 + 1e-14):
            raise DomainError(f"mu={mu} beyond the sampled range (max {self.max_mu}); "
                              "extend the curve, or see asymptotic_slope for the large-mu trend")
        mu = min(mu, self.max_mu)
        # invert the mu(alpha) interpolant itself so the round trip is exact
        k = int(np.clip(np.searchsorted(self.mus, mu), 1, self.mus.size - 1))
        lo, hi = self.alphas[k - 1], self.alphas[k]
        if mu == self.mus[k]:
            return float(hi)
        return float(brentq(lambda a: float(self._mu_of_a(a)) - mu, lo, hi,
                            xtol=1e-15, rtol=4 * np.finfo(float).eps))

    def rows(self) -> List[Dict[str, float]]:
        return [{"alpha": float(a), "mu": float(m), "residual": float(r)}
                for a, m, r in zip(self.alphas, self.mus, self.residuals)]


def build_curve(d: int, p: float, n_samples: int = 48, max_ratio: float = 40.0,
                endpoint: bool = False, max_L: int = MAX_L, n_near: int = 48) -> AlphaMuCurve:
    """Sample mu on a geometric alpha-grid from the threshold to max_ratio times it.

    The first sample is the threshold itself (mu = alpha, slope 1).  The
    branch bends sharply just past the threshold, so ``n_near`` extra
    samples are clustered at threshold * (1 + 1e-3 .. 2).  At the
    endpoint p = (d-1)/2 only the linear window is available.
    """
    th = linear_threshold(d, p, endpoint)
    if endpoint:
        e = np.empty(0)
        return AlphaMuCurve(d, p, th, e, e, e, e, e.astype(int), e, endpoint=True)
    if n_samples < 2 or not max_ratio > 1:
        raise UsageError("need n_samples >= 2 and max_ratio > 1")
    q = _q_from_p(p)
    grid = th * np.geomspace(1.0, max_ratio, n_samples)[1:]
    if n_near > 0:
        near = th * (1 + np.geomspace(1e-3, 2.0, n_near))
        grid = np.union1d(grid, near[near < grid[-1]])
    alphas, mus, slopes, res, Ls, mins = [th], [th], [1.0], [0.0], [1], [sphere.surface_area(d) ** (-1 / q)]
    for a in grid:
        r = mu_of_alpha(float(a), d, q, max_L=max_L)
        alphas.append(r.alpha)
        mus.append(r.mu)
        slopes.append(r.dmu_dalpha)
        res.append(r.residual)
        Ls.append(r.L_used)
        mins.append(r.certificate["min_u"])
    return AlphaMuCurve(d, p, th, np.array(alphas), np.array(mus), np.array(slopes),
                        np.array(res), np.array(Ls), np.array(mins))


def alpha_of_mu(mu: float, curve: AlphaMuCurve) -> float:
    """alpha(mu) from the curve; refuses to extrapolate."""
    return curve.alpha(mu)


# --- Gagliardo-Nirenberg constant ----------------------------------------------

@dataclass(frozen=True)
class GNConstant:
    m: int
    q: float
    rho: float
    K: float
    L1: float
    w0: float
    radius: float
    pohozaev_gap: float

    @property
    def p(self) -> float:
        return _p_from_q(self.q)


def _shoot(w0: float, m: int, q: float, r_max: float):
    # v = w / w0 solves v'' + (m-1)/r v' - v + s |v|^{q-2} v = 0, v(0) = 1
    s = w0 ** (q - 2)

    def rhs(r, y):
        v, dv = y[0], y[1]
        rm = r ** (m - 1)
        return [dv, -(m - 1) / r * dv + v - s * abs(v) ** (q - 2) * v,
                dv * dv * rm, v * v * rm, abs(v) ** q * rm]

    r0 = 1e-5
    c = (1 - s) / (2 * m)
    y0 = [1 + c * r0 * r0, 2 * c * r0, 0.0, 0.0, 0.0]

    def crosses(r, y):
        return y[0]
    crosses.terminal, crosses.direction = True, -1

    def turns(r, y):
        return y[1]
    turns.terminal, turns.direction = True, 1

    sol = solve_ivp(rhs, (r0, r_max), y0, method="DOP853", rtol=1e-12, atol=1e-15,
                    events=[crosses, turns])
    return sol.t_events[0].size > 0, sol


def gn_constant(m: int, q: float, bracket: Sequence[float] = (1.0, 10.0),
                r_max: float = 60.0) -> GNConstant:
    """Optimal constant K in K ||u||_q^2 <= ||grad u||^{2 rho} ||u||^{2(1-rho)} on R^m.

    The ground state of -Lap w + w = w^{q-1} is found by bisection on
    w(0): too large overshoots through zero, too small turns back up.  The
    three integrals are carried along the ODE and the run is truncated
    where the last undershooting trajectory departs from the ground state.
    The Lieb-Thirring constant is L1 = [rho^-rho (1-rho)^-(1-rho) K]^-p.
    """
    if m < 2:
        raise DomainError(f"need m >= 2, got m={m}")
    if not q > 2 or (m >= 3 and not q < 2 * m / (m - 2)):
        upper = "inf" if m == 2 else 2 * m / (m - 2)
        raise DomainError(f"need q in (2, {upper}) for m={m}, got q={q}")
    lo, hi = map(float, bracket)
    for _ in range(12):
        if _shoot(lo, m, q, r_max)[0]:
            lo /= 2
        elif not _shoot(hi, m, q, r_max)[0]:
            hi *= 2
        else:
            break
    else:
        raise ConvergenceError("shooting bracket does not straddle the ground state",
                               bracket=(lo, hi))
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _shoot(mid, m, q, r_max)[0]:
            hi = mid
        else:
            lo = mid
    _, sol = _shoot(lo, m, q, r_max)
    Sm = sphere.surface_area(m)
    I1, I2, I3 = (Sm * sol.y[k, -1] for k in (2, 3, 4))
    rho = m * (q - 2) / (2 * q)
    # in w = w0 v the ratio is scale-free once the powers are balanced
    K = I1 ** rho * I2 ** (1 - rho) / I3 ** (2 / q)
    s = lo ** (q - 2)
    # Pohozaev: ((m-2)/2 A + m/2 B) = (m/q) s C  and  A + B = s C
    poho = abs((I1 + I2) / (s * I3) - 1) + abs(((m - 2) / 2 * I1 + m / 2 * I2) / (m / q * s * I3) - 1)
    p = _p_from_q(q)
    L1 = (rho ** (-rho) * (1 - rho) ** (-(1 - rho)) * K) ** (-p)
    return GNConstant(m, q, rho, K, L1, lo, float(sol.t[-1]), poho)


# --- large-mu asymptotics --------------------------------------------------------

@dataclass(frozen=True)
class SlopeReport:
    fitted_exponent: float
    predicted_exponent: float
    relative_error: float
    fitted_prefactor: float
    predicted_prefactor: float
    unnormalized_prefactor: float
    n_points: int
    alpha_min: float
    alpha_max: float


def asymptotic_slope(curve: AlphaMuCurve, gn: GNConstant, min_ratio: float = 20.0) -> SlopeReport:
    """Fit log alpha = e log mu + log c on the top decade of the samples.

    Predicted e = p / (p - (d-1)/2).  The predicted prefactor is
    (L1 |S^{d-1}|)^{1/(p-(d-1)/2)}: the normalized mu carries a factor
    |S^{d-1}| into the Lieb-Thirring integral.  The form without that factor
    is reported as ``unnormalized_prefactor``.
    """
    d, p = curve.d, curve.p
    if gn.m != d - 1 or not math.isclose(gn.q, curve.q, rel_tol=1e-12):
        raise UsageError(f"GN constant for (m={gn.m}, q={gn.q}) does not match the curve")
    if curve.max_alpha < min_ratio * curve.threshold:
        raise DomainError(f"curve reaches only {curve.max_alpha / curve.threshold:.1f}x threshold; "
                          f"need >= {min_ratio}x")
    sel = curve.alphas >= curve.max_alpha / 10
    if sel.sum() < 3:
        raise DomainError("fewer than 3 samples in the top decade")
    e, logc = np.polyfit(np.log(curve.mus[sel]), np.log(curve.alphas[sel]), 1)
    gamma = p - (d - 1) / 2
    pred = p / gamma
    return SlopeReport(float(e), pred, abs(e - pred) / pred, math.exp(logc),
                       (gn.L1 * sphere.surface_area(d)) ** (1 / gamma), gn.L1 ** (1 / gamma),
                       int(sel.sum()), float(curve.alphas[sel][0]), curve.max_alpha)
