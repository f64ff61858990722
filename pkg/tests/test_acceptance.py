"""Acceptance criteria, each at its stated tolerance and time budget.

Every test prints one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""
import contextlib
import csv
import io
import math
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from homhardy import alpha_mu as am
from homhardy import cli, constants as C, rearrangement as R, spectral, verifier as V
from homhardy import weights as W

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = []


def record(k, ok, elapsed, budget, detail):
    ok = bool(ok) and elapsed < budget
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({elapsed:.1f}s / {budget:.0f}s)  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_classical_constant():
    t0 = time.perf_counter()
    worst = 0.0
    for d in (3, 4, 5, 6):
        pc = (d - 2) ** 2 / (2 * (d - 1)) + 1
        for p in (pc, pc + 0.5, 2 * pc, 10.0):
            tau = C.tau_theorem_main(d, p, W.lp_norm(W.Constant(1.0), p, d))
            worst = max(worst, abs(tau - (d - 2) ** 2 / 4) / ((d - 2) ** 2 / 4))
    record(1, worst <= 1e-12, time.perf_counter() - t0, 1, f"max rel err {worst:.2e}")


def test_criterion_02_constant_potential():
    t0 = time.perf_counter()
    worst = 0.0
    for c in (0.1, 1.0, 10.0):
        for d in (3, 4, 5):
            lam = spectral.lowest_eigenvalue(W.Constant(c), d, L=32, max_L=32).lambda1
            worst = max(worst, abs(lam + c))
    record(2, worst <= 1e-10, time.perf_counter() - t0, 5, f"max |lambda1 + c| {worst:.2e}")


def _bound_matrix():
    rng = np.random.default_rng(20240611)
    cases = [
        (3, 2.0, W.Constant(0.5)), (3, 2.0, W.Constant(0.9)),
        (4, 2.0, W.Constant(1.2)), (5, 2.5, W.Constant(2.0)),
        (3, 2.0, W.CapIndicator(2.0, 1.0)), (3, 2.0, W.CapIndicator(5.0, 0.5)),
        (3, 2.0, W.CapIndicator(1.0, 2.5)), (4, 2.0, W.CapIndicator(3.0, 0.8)),
        (4, 2.0, W.CapIndicator(10.0, 0.4)), (5, 2.5, W.CapIndicator(4.0, 1.2)),
        (5, 2.5, W.CapIndicator(20.0, 0.3)),
        (3, 2.0, W.PolarPower(1.0, 0.5)), (3, 2.0, W.PolarPower(0.5, 0.9)),
        (4, 2.0, W.PolarPower(1.0, 1.0)), (5, 2.5, W.PolarPower(0.5, 1.2)),
    ]
    for d, p in ((3, 2.0), (3, 2.0), (4, 2.0), (4, 2.0), (5, 2.5)):
        angles = np.sort(rng.uniform(0.05, math.pi - 0.05, 6))
        values = rng.uniform(0.0, 4.0, 6)
        cases.append((d, p, W.Tabulated(tuple(angles), tuple(values))))
    return cases


def test_criterion_03_bound_certification():
    t0 = time.perf_counter()
    cases = _bound_matrix()
    curves = {key: am.build_curve(*key) for key in {(d, p) for d, p, _ in cases}}
    worst_slack, worst_eq, problems = math.inf, 0.0, []
    for d, p, phi in cases:
        if isinstance(phi, W.PolarPower):
            assert p * phi.beta < d - 1
        # the slack tolerance is 1e-6, so lambda1 is converged to 1e-7
        eig = spectral.lowest_eigenvalue(phi, d, L=64, max_L=1024, tol=1e-7)
        if not eig.converged:
            problems.append(f"{phi.describe()} d={d} unconverged")
        rep = spectral.del_bound_check(phi, p, d, eig, curves[(d, p)])
        # Rayleigh-Ritz underestimates |lambda1|; discount the slack by twice
        # the last doubling increment, which bounds the geometric tail
        increment = abs(eig.lambda1 - eig.lambda1_coarse) if eig.lambda1_coarse is not None else 0.0
        worst_slack = min(worst_slack, rep.slack - 2 * increment)
        if isinstance(phi, W.Constant) and rep.mu <= curves[(d, p)].threshold:
            worst_eq = max(worst_eq, abs(rep.slack))
    ok = len(cases) == 20 and worst_slack >= -1e-6 and worst_eq <= 1e-8 and not problems
    record(3, ok, time.perf_counter() - t0, 120,
           f"20 weights, min slack {worst_slack:.3e}, constant equality {worst_eq:.1e}"
           + (f", {problems}" if problems else ""))


def test_criterion_04_alpha_mu_curve():
    t0 = time.perf_counter()
    d, p = 3, 2.0
    q = 2 * p / (p - 1)
    curve = am.build_curve(d, p, max_ratio=40)
    th = curve.threshold
    lin = max(abs(am.mu_of_alpha(a, d, q).mu - a) for a in np.linspace(1e-3, th, 25))
    lin = max(lin, max(abs(curve.mu(a) - a) for a in np.linspace(0, th, 25)))
    below = bool(np.all(curve.mus[1:] < curve.alphas[1:]))
    # concavity from fresh solves at midpoints, not from the interpolant
    rng = np.random.default_rng(7)
    concave = True
    for _ in range(12):
        a, b = np.sort(rng.uniform(0, 40 * th, 2))
        m = am.mu_of_alpha(0.5 * (a + b), d, q).mu
        ma = am.mu_of_alpha(a, d, q).mu if a > 0 else 0.0
        concave &= m >= 0.5 * (ma + am.mu_of_alpha(b, d, q).mu) - 1e-12
    res = float(np.max(curve.residuals))
    positive = bool(np.all(curve.min_u > 0))
    trip = max(abs(curve.alpha(curve.mu(a)) - a) for a in np.linspace(0, curve.max_alpha, 200))
    trip = max(trip, max(abs(curve.mu(curve.alpha(m)) - m) for m in np.linspace(0, curve.max_mu, 200)))
    ok = lin <= 1e-9 and below and concave and res <= 1e-6 and trip <= 1e-6 and positive
    record(4, ok, time.perf_counter() - t0, 180,
           f"d={d} p={p}: linear err {lin:.1e}, mu<alpha {below}, concave {concave}, "
           f"max EL residual {res:.1e}, round trip {trip:.1e}, minimizers positive {positive}")


def test_criterion_05_asymptotic_exponent():
    t0 = time.perf_counter()
    errs = []
    for d, p, ratio in ((3, 2.0, 200), (4, 2.0, 400)):
        curve = am.build_curve(d, p, max_ratio=ratio)
        rep = am.asymptotic_slope(curve, am.gn_constant(d - 1, curve.q))
        errs.append(rep.relative_error)
    record(5, max(errs) <= 0.05, time.perf_counter() - t0, 300,
           "slope rel err " + ", ".join(f"{e:.2%}" for e in errs))


def test_criterion_06_sharpness():
    t0 = time.perf_counter()
    ok, parts = True, []
    for d in (3, 5):
        for eps in (0.3, 1e-2):
            u = V.TrialFunction(V.PowerCutoff(eps, d), V.constant_mode(d))
            qc = V.dirichlet_energy(u) / V.weighted_l2(u, W.Constant(1.0))
            ok &= math.isclose(qc, (d - 2) ** 2 / 4 + eps ** 2, rel_tol=1e-13)
        rep = V.sharpness_probe(W.Constant(1.0), d, [1e-1, 1e-2, 1e-3])
        dev = abs(rep.quotients[-1] - (d - 2) ** 2 / 4)
        ok &= dev <= 1e-5 and rep.max_closed_vs_quadrature <= 1e-8
        parts.append(f"d={d}: |Q(1e-3) - (d-2)^2/4| {dev:.1e}, closed vs quad {rep.max_closed_vs_quadrature:.1e}")
    record(6, ok, time.perf_counter() - t0, 10, "; ".join(parts))


def test_criterion_07_theorem_consistency():
    t0 = time.perf_counter()
    ok, parts = True, []
    for d in (3, 4, 5, 6, 8):
        pc = (d - 2) ** 2 / (2 * (d - 1)) + 1
        norm = W.lp_norm(W.CapIndicator(2.0, 1.0), pc, d)
        n0, t2 = C.tau_theorem2(d, pc, norm)
        ok &= abs(n0 - 1) <= 1e-12 and abs(t2 - C.tau_theorem_main(d, pc, norm)) <= 1e-12 * t2
    for d, p in ((4, 1.6), (5, 2.1)):
        curve = am.build_curve(d, p, n_samples=8, max_ratio=1.3, n_near=24)
        for phi in (W.Constant(1.0), W.CapIndicator(3.0, 0.7)):
            norm = W.lp_norm(phi, p, d)
            n0, t2 = C.tau_theorem2(d, p, norm)
            nus = np.linspace(n0, 1.0, 11)[1:]
            taus = np.array([C.tau_theorem4(d, p, nu, norm, curve) for nu in nus])
            inc = bool(np.all(np.diff(taus) > 0))
            above = bool(np.all(taus > t2))
            ok &= inc and above
            parts.append(f"d={d} p={p} {phi.describe()}: increasing {inc}, > tau2 {above}")
    record(7, ok, time.perf_counter() - t0, 120, "nu0=1 and tau2=tau at p_c; " + "; ".join(parts))


def test_criterion_08_rearrangement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    ws = [R.HomogeneousWeight(W.Constant(2.0), 1.0, 3),
          R.HomogeneousWeight(W.CapIndicator(1.0, 1.0), 1.0, 3),
          R.HomogeneousWeight(W.CapIndicator(3.0, 0.4), 0.5, 4),
          R.HomogeneousWeight(W.CapIndicator(0.5, 2.0), 0.75, 5),
          R.HomogeneousWeight(W.PolarPower(1.0, 0.5), 1.0, 3),
          R.HomogeneousWeight(W.PolarPower(2.0, 0.5), 0.5, 4),
          R.HomogeneousWeight(W.CosineSeries((1.0, 0.5, 0.2)), 1.0, 4)]
    for d, kappa in ((3, 1.0), (4, 1.0), (5, 0.6)):
        angles = np.sort(rng.uniform(0.05, math.pi - 0.05, 5))
        ws.append(R.HomogeneousWeight(W.Tabulated(tuple(angles), tuple(rng.uniform(0.1, 3, 5))), kappa, d))
    worst = max(R.numeric_rearrangement_check(w, np.geomspace(0.1, 10, 9)) for w in ws)
    hl_ok, hl_min = True, math.inf
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.05, 1.0, n))])
        vol = R.shell_volumes(edges, int(rng.integers(3, 6)))
        f = rng.exponential(1.0, n) * (rng.random(n) < 0.8)
        g = rng.exponential(1.0, n) * (rng.random(n) < 0.8)
        holds, gap = R.hardy_littlewood_check(f, g, vol)
        hl_ok &= holds
        hl_min = min(hl_min, gap)
    record(8, len(ws) == 10 and worst <= 1e-6 and hl_ok, time.perf_counter() - t0, 30,
           f"10 weights max rel gap {worst:.1e}; Hardy-Littlewood 1000 pairs, min gap {hl_min:.1e}")


def test_criterion_09_fractional():
    t0 = time.perf_counter()
    worst = 0.0
    for d in range(3, 9):
        tau = C.tau_fractional(d, 1.0, W.lp_norm(W.Constant(1.0), d / 2, d))
        worst = max(worst, abs(tau - (d - 2) ** 2 / 4) / ((d - 2) ** 2 / 4))
    min_gap = math.inf
    for kappa in (0.25, 0.5, 0.75, 1.0):
        for d in (3, 4):
            for phi in (W.Constant(1.0), W.CapIndicator(1.0, 0.5), W.CapIndicator(2.0, 1.5)):
                c = C.constants_fractional(d, kappa, W.lp_norm(phi, d / (2 * kappa), d))
                min_gap = min(min_gap, V.fractional_gaussian_check(d, kappa, phi, c).gap)
    record(9, worst <= 1e-12 and min_gap >= 0, time.perf_counter() - t0, 10,
           f"kappa=1 rel err {worst:.1e}; min Gaussian gap {min_gap:.3e}")


def _cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_criterion_10_pipeline():
    t0 = time.perf_counter()
    argv = ["report", "--d", "3", "--p", "1.125", "--weight", "cap:1,1.5707963267948966"]
    code, out = _cli(argv)
    rows = list(csv.DictReader(io.StringIO(out)))
    all_true = bool(rows) and all(r["holds"] == "true" for r in rows)
    code_bad, out_bad = _cli(argv + ["--tau-scale", "1.1"])
    flipped = sum(r["holds"] == "false" for r in csv.DictReader(io.StringIO(out_bad)))
    ok = code == 0 and all_true and code_bad == 3 and flipped >= 1
    record(10, ok, time.perf_counter() - t0, 180,
           f"exit {code} with {len(rows)} rows all true {all_true}; "
           f"tau x1.1: exit {code_bad}, {flipped} rows false")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
