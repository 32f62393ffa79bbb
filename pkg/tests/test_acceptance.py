"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Tolerances are the stated ones. Criteria that the model cannot meet are
left red; see the project notes for the analysis.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from fractunnel.analysis import default_bracket, find_peak, sweep
from fractunnel.chronometry import (
    asymptote,
    asymptotic_time,
    d_numerator_direct,
    dtheta_dE,
    standard_qm_time,
    theta_at,
    tunneling_time,
)
from fractunnel.errors import FractunnelError
from fractunnel.finite_diff import TWO_PI, fd_derivative
from fractunnel.params import geometry, kinematics
from fractunnel.scattering import transmission, v_denominator, xy_components
from fractunnel.validation import textbook_probability, validate_suite

V, E_REF, U = 10.0, 9.0, 1e-4
ALPHAS = (1.1, 1.3, 1.5, 1.7, 1.9, 2.0)
ENERGIES = (1.0, 3.0, 5.0, 7.0, 9.0)
WIDTHS = (0.001, 0.01, 0.05, 0.1)
SHAPE_ALPHAS = (1.5, 1.7, 1.9)


def verdict(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def oracle_grid():
    for a in ALPHAS:
        for E in ENERGIES:
            kin = kinematics(a, E, V, U)
            for b0 in WIDTHS:
                # keep q*b moderate where q_alpha is large
                yield a, E, kin, b0 * min(1.0, 200.0 / kin.q_alpha)


def worst_oracle_gap():
    worst, at = 0.0, None
    for a, E, _, b in oracle_grid():
        dth = dtheta_dE(a, E, V, b, U)
        if abs(dth) <= 1e-12:
            continue
        fd, _ = fd_derivative(lambda e: theta_at(a, e, V, b, U), E, lo=0.0, hi=V, period=TWO_PI)
        gap = abs(dth - fd) / abs(fd)
        if gap > worst:
            worst, at = gap, (a, E, b)
    return worst, at


def test_criterion_1_hartman_recovery(capsys):
    start = time.perf_counter()
    bs = np.arange(5.0, 30.0 + 1e-9, 0.5)
    taus = np.array([tunneling_time(2.0, E_REF, V, float(b), U).tau for b in bs])
    elapsed = time.perf_counter() - start
    dev = np.abs(taus - 1.0 / 3.0)
    slope = np.abs(np.diff(taus) / np.diff(bs))
    ok = dev.max() <= 1e-6 and slope.max() <= 1e-8 and elapsed < 1.0
    verdict(capsys, 1, ok,
            f"max|tau-1/3|={dev.max():.3e} at b={bs[dev.argmax()]:g}, "
            f"max|dtau/db|={slope.max():.3e}, runtime={elapsed:.3f}s")


def test_criterion_2_alpha2_equivalence(capsys):
    worst, at = 0.0, None
    for E in range(1, 10):
        for b in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0):
            t = tunneling_time(2.0, float(E), V, b, U).tau
            ref = standard_qm_time(float(E), V, b)
            gap = 0.0 if t == ref else abs(t - ref) / abs(ref)
            if gap > worst:
                worst, at = gap, (E, b)
    verdict(capsys, 2, worst <= 1e-6, f"worst relative gap {worst:.3e} at (E, b)={at}")


def test_criterion_3_derivative_oracle(capsys):
    worst, at = worst_oracle_gap()
    verdict(capsys, 3, worst <= 1e-6, f"worst relative gap {worst:.3e} at (alpha, E, b)={at}")


def test_criterion_4_denominator_identity(capsys):
    worst_v = 0.0
    for _, _, kin, b in oracle_grid():
        geo = geometry(kin, b)
        X, Y = xy_components(kin, geo)
        xy = X * X + Y * Y
        worst_v = max(worst_v, abs(v_denominator(kin, geo) - xy) / xy)
    worst_p = 0.0
    for E in ENERGIES:
        for b in (0.0,) + WIDTHS + (1.0, 5.0):
            ref = textbook_probability(E, V, b)
            worst_p = max(worst_p, abs(transmission(2.0, E, V, b, U).probability - ref) / ref)
    ok = worst_v <= 1e-10 and worst_p <= 1e-12
    verdict(capsys, 4, ok, f"v vs X^2+Y^2 {worst_v:.3e}; alpha=2 probability vs textbook {worst_p:.3e}")


def test_criterion_5_asymptote(capsys):
    worst = 0.0
    for a in ALPHAS[:-1]:
        for E in ENERGIES:
            kin = kinematics(a, E, V, U)
            b = 20.0 / geometry(kin, 1.0).xi  # 2 xi = 40
            full = tunneling_time(a, E, V, b, U).tau
            worst = max(worst, abs(full - asymptotic_time(a, E, V, b, U)) / abs(full))
    c = asymptote(2.0, E_REF, V, U)
    ok = worst <= 1e-3 and abs(c.tau1) <= 1e-12 and abs(c.slope) <= 1e-12
    verdict(capsys, 5, ok, f"worst crossover gap {worst:.3e}; alpha=2 tau1={c.tau1:.1e} slope={c.slope:.1e}")


def _shape(alpha):
    lo, hi = default_bracket(alpha, E_REF, V, U)
    taus = sweep("width", lo, hi, 600, alpha=alpha, V=V, E=E_REF, u=U).column("tau")
    s = np.sign(np.diff(taus))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1])), bool(s.size and s[0] > 0), hi


def test_criterion_6_single_interior_maximum(capsys):
    results = {a: _shape(a) for a in SHAPE_ALPHAS}
    ok = all(changes == 1 and rising for changes, rising, _ in results.values())
    detail = "; ".join(f"alpha={a}: {c} slope sign change(s), starts {'rising' if r else 'falling'} on b in [0, {hi:.4g}]"
                       for a, (c, r, hi) in results.items())
    verdict(capsys, 6, ok, detail)


def test_criterion_7_peak_ordering(capsys):
    peaks, missing = {}, []
    for a in SHAPE_ALPHAS:
        try:
            peaks[a] = find_peak(a, E_REF, V, U)
        except FractunnelError as exc:
            missing.append(f"alpha={a}: {type(exc).__name__}")
    ok = not missing
    if ok:
        taus = [peaks[a].tau_max for a in SHAPE_ALPHAS]
        bs = [peaks[a].b_max for a in SHAPE_ALPHAS]
        ok = all(np.diff(taus) > 0) and all(np.diff(bs) > 0)
        detail = f"tau_max={taus}, b_max={bs}"
    else:
        found = ", ".join(f"alpha={a}: b_max={p.b_max:.6g} tau_max={p.tau_max:.6g}" for a, p in peaks.items())
        detail = "no peak for " + ", ".join(missing) + (f"; found {found}" if found else "")
    verdict(capsys, 7, ok, detail)


def test_criterion_8_closed_form_audit(capsys):
    report = validate_suite()
    audit = report["closed-form-audit"]
    quantified = math.isfinite(audit.worst) and len(report.audit) == len(ALPHAS) * len(ENERGIES) * len(WIDTHS)
    worst, _ = worst_oracle_gap()
    ok = quantified and worst <= 1e-6
    verdict(capsys, 8, ok, f"audit worst={audit.worst:.3e} ({audit.note}); direct path oracle gap {worst:.3e}")


def test_criterion_9_eps_derivatives(capsys):
    worst = 0.0
    for a in ALPHAS:
        for E in ENERGIES:
            kin = kinematics(a, E, V, U)
            for name, value in (("eps_plus", kin.deps_plus), ("eps_minus", kin.deps_minus)):
                fd, _ = fd_derivative(lambda e: getattr(kinematics(a, e, V, U), name), E, lo=0.0, hi=V)
                # eps+ is stationary where eps = 1; scale by |eps-'| there
                worst = max(worst, abs(value - fd) / max(abs(fd), abs(kin.deps_minus)))
    special = kinematics(2.0, 9.0, V, U).deps_minus
    ok = worst <= 1e-8 and abs(special - 50.0 / 27.0) <= 1e-12 * 50.0 / 27.0
    verdict(capsys, 9, ok, f"worst relative gap {worst:.3e}; alpha=2 eps-' = {special!r} (50/27 = {50 / 27!r})")


def test_criterion_10_end_to_end(capsys):
    argv = [sys.executable, "-m", "fractunnel", "sweep", "--var", "width", "--from", "0", "--to", "12",
            "--steps", "600", "--alpha", "1.9", "--potential", "10", "--energy", "9"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    identical = first.returncode == second.returncode == 0 and first.stdout == second.stdout
    val = subprocess.run([sys.executable, "-m", "fractunnel", "validate"], capture_output=True, text=True)
    failing = [ln.split()[1] for ln in val.stdout.splitlines() if ln.startswith("FAIL")]
    ok = identical and val.returncode == 0
    verdict(capsys, 10, ok, f"sweep byte-identical={identical} ({len(first.stdout)} bytes); "
                            f"validate exit={val.returncode} failing={failing}")
