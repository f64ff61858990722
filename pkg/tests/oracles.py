"""Independent reference computations used only by the tests.

None of these share code with the package beyond the problem statement.
"""
import math

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import diags
from scipy.sparse.linalg import spsolve


def sphere_area(d):
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


# --- singular angular integrals --------------------------------------------------

def polar_power_integral(d, beta, head=mpmath.mpf("0.1"), terms=30):
    """|S^{d-2}| * int_0^pi theta^{-beta} sin^{d-2} theta dtheta, to ~30 digits.

    On [0, head] (sin t / t)^{d-2} is expanded in its Taylor series and
    integrated term by term against t^{d-2-beta}; the rest is mpmath.quad.
    """
    mpmath.mp.dps = 40
    m = d - 2
    coeffs = mpmath.taylor(lambda t: (mpmath.sinc(t)) ** m, 0, 2 * terms)
    s = mpmath.mpf(beta)
    hd = mpmath.mpf(0)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        e = m - s + k
        hd += c * head ** (e + 1) / (e + 1)
    tail = mpmath.quad(lambda t: t ** (-s) * mpmath.sin(t) ** m, [head, 1, mpmath.pi])
    return float((hd + tail) * sphere_area(d - 1))


# --- finite-difference eigenvalue of -Lap_S - Phi ----------------------------------

def fd_lowest_eigenvalue(phi, d, n, breaks=()):
    """Second-order finite volumes on a cell-centred theta grid.

    Cells containing a jump of Phi (``breaks``) get the exact cell integral
    of Phi sin^{d-2} instead of the midpoint value, which keeps the scheme
    second order for piecewise-smooth weights.
    """
    h = math.pi / n
    th = (np.arange(n) + 0.5) * h
    faces = np.arange(1, n) * h
    k = np.sin(faces) ** (d - 2) / h
    m = np.sin(th) ** (d - 2) * h
    main = np.zeros(n)
    main[:-1] += k
    main[1:] += k
    pot = m * phi(th)
    for b in breaks:
        j = min(int(b // h), n - 1)
        f = lambda t: float(phi(np.array([t]))[0]) * math.sin(t) ** (d - 2)
        pot[j] = quad(f, j * h, b, epsabs=0, epsrel=1e-13)[0] + quad(f, b, (j + 1) * h, epsabs=0, epsrel=1e-13)[0]
    main -= pot
    # symmetric scaling M^{-1/2} A M^{-1/2} keeps the tridiagonal structure
    s = 1 / np.sqrt(m)
    vals = eigh_tridiagonal(main * s * s, -k * s[:-1] * s[1:], select="i",
                            select_range=(0, 0), eigvals_only=True)
    return float(vals[0])


def fd_eigenvalue_richardson(phi, d, n=4000, breaks=()):
    a, b = fd_lowest_eigenvalue(phi, d, n, breaks), fd_lowest_eigenvalue(phi, d, 2 * n, breaks)
    return (4 * b - a) / 3


# --- Gagliardo-Nirenberg constant on a large ball ----------------------------------

def gn_ball(m, q, R=30.0, n=6000):
    """K from the radial ground state on [0, R] with w(R) = 0, by finite-difference Newton.

    Richardson extrapolation over n and 2n points.
    """
    def solve(n):
        r = np.linspace(0, R, n + 1)
        h = r[1] - r[0]
        rr = r[:-1]
        # unknowns w_0..w_{n-1}; flux form with face weights r^{m-1}
        fw = (rr + h / 2) ** (m - 1)
        cw = np.empty(n)
        cw[0] = (h / 2) ** m / m / h  # half cell at the origin
        cw[1:] = rr[1:] ** (m - 1)
        main = np.zeros(n)
        main += fw / h ** 2
        main[1:] += fw[:-1] / h ** 2
        A = diags([main, -fw[:-1] / h ** 2, -fw[:-1] / h ** 2], [0, 1, -1], format="csc")
        Lop = (A + diags(cw, format="csc")).tocsc()
        w = np.exp(-rr * rr / 4)
        gam = (q - 1) / (q - 2)
        # Petviashvili iteration converges to the positive ground state
        for _ in range(300):
            Nw = cw * np.abs(w) ** (q - 2) * w
            M = float(w @ (Lop @ w)) / float(w @ Nw)
            w_new = M ** gam * spsolve(Lop, Nw)
            done = np.linalg.norm(w_new - w) < 1e-10 * np.linalg.norm(w)
            w = w_new
            if done:
                break
        for _ in range(100):
            F = A @ w + cw * w - cw * np.abs(w) ** (q - 2) * w
            if np.linalg.norm(F) < 1e-12 * np.linalg.norm(cw * w):
                break
            J = A + diags(cw * (1 - (q - 1) * np.abs(w) ** (q - 2)), format="csc")
            w = w - spsolve(J, F)
        Sm = sphere_area(m)
        grad = Sm * float(np.sum(fw * np.diff(np.append(w, 0.0)) ** 2) / h)
        mass = Sm * float(np.sum(cw * w * w) * h)
        lq = Sm * float(np.sum(cw * np.abs(w) ** q) * h)
        rho = m * (q - 2) / (2 * q)
        return grad ** rho * mass ** (1 - rho) / lq ** (2 / q)

    a, b = solve(n), solve(2 * n)
    return (4 * b - a) / 3
