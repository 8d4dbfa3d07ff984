"""Acceptance gate: one test per release criterion, at stated tolerance.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail
line per criterion.  Shared fixtures (the 50-run randomized set, the
fine-grid resonant benchmark, the oracle pair, and the equivalence
reports) live in conftest and are built once per session.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from photon_work.analysis import compare_equivalences, detuning_scan
from photon_work.semiclassical import susceptibility


def test_criterion_01_first_law(run_set):
    """50 randomized full cycles: first-law residual below 1e-8 hbar
    omega0 each, all thermo evaluations within 10 s of wall clock."""
    tol = 1e-8 * run_set.system.omega0
    worst = max(abs(r.report.residual_first_law) for r in run_set.records)
    assert len(run_set.records) == 50
    assert worst < tol, f"worst first-law residual {worst:.3e}"
    assert run_set.timings["thermo"] < 10.0, run_set.timings


def test_criterion_02_exact_splits(run_set):
    """Same 50 runs: heat split within 1e-8 hbar omega0, work split and
    semiclassical drive split within 1e-8 hbar gamma0."""
    tol_w0 = 1e-8 * run_set.system.omega0
    worst_q = max(abs(r.report.residual_Q_split) for r in run_set.records)
    worst_w = max(abs(r.report.residual_W_split) for r in run_set.records)
    worst_s = max(abs(r.sreport.residual_decomposition) for r in run_set.records)
    assert worst_q < tol_w0, f"worst heat-split residual {worst_q:.3e}"
    assert worst_w < 1e-8, f"worst work-split residual {worst_w:.3e}"
    assert worst_s < 1e-8, f"worst drive-split residual {worst_s:.3e}"


def test_criterion_03_closed_form_vs_ode(run_set):
    """Same 50 runs (the matched resonant case included): RK4 amplitude
    agrees with the closed form below 1e-6 in max norm."""
    assert run_set.records[0].pulse.delta == 1.0
    assert run_set.records[0].pulse.deltaL == 0.0
    worst = max(r.ode_max_diff for r in run_set.records)
    assert worst < 1e-6, f"worst ODE deviation {worst:.3e}"


def test_criterion_04_oracle_agreement(oracle_pair):
    """Discretized continuum, W = 100 with 4001 modes, t <= 10: modulus
    within 1e-2 of the closed form, norm drift below 1e-9, error falls
    when the window doubles, both runs within 60 s."""
    base, doubled = oracle_pair
    assert base.max_abs_err < 1e-2, f"oracle error {base.max_abs_err:.3e}"
    assert base.max_drift < 1e-9, f"norm drift {base.max_drift:.3e}"
    assert doubled.max_abs_err < base.max_abs_err
    assert base.runtime + doubled.runtime < 60.0


def test_criterion_05_analytic_benchmark(confluent_run):
    """Matched resonant pulse on the fine grid: population peaks at
    2 e^{-2} (within 1e-6) at t = 2, one quantum flows in and back out
    (within 1e-4 hbar omega0 each way), and net work and heat vanish
    below 1e-8 hbar omega0."""
    h = confluent_run.grid.spacing
    pop = confluent_run.eff.pop
    k = int(np.argmax(pop))
    assert abs(pop[k] - 2.0 * math.exp(-2.0)) < 1e-6
    assert abs(k * h - 2.0) <= h
    omega0 = confluent_run.system.omega0
    rep = confluent_run.report
    assert abs(rep.Q1_abs - omega0) < 1e-4 * omega0
    assert abs(rep.Q1_em + omega0) < 1e-4 * omega0
    assert abs(rep.W1) < 1e-8 * omega0
    assert abs(rep.Q1) < 1e-8 * omega0


def test_criterion_06_equivalences(equivalence_pair):
    """Narrowband point (delta = 0.01, deltaL = 0.2): all three
    quantum/semiclassical pairings agree within 5 percent, tighten
    strictly one bandwidth decade down, everything within 120 s."""
    reports, timings = equivalence_pair
    wide, narrow = reports[0.01], reports[0.001]
    assert wide.regime.in_regime
    for attr in (
        "rel_err_work_reactive",
        "rel_err_heat_absorbed",
        "rel_err_heat_emitted",
    ):
        err = getattr(wide, attr)
        assert err <= 0.05, f"{attr} = {err:.4g}"
        assert getattr(narrow, attr) < err, attr
    assert sum(timings.values()) < 120.0, timings


def test_criterion_07_antisymmetry(system):
    """Detuning sweep at delta = 0.1: W1 is antisymmetric in the laser
    detuning within 1e-6 hbar gamma0 for |deltaL| in {0.2, 0.5, 1}."""
    scan = detuning_scan(system, 0.1, [-1.0, -0.5, -0.2, 0.2, 0.5, 1.0])
    assert [d for d, _ in scan.antisymmetry] == [0.2, 0.5, 1.0]
    worst = max(defect for _, defect in scan.antisymmetry)
    assert worst < 1e-6, f"worst antisymmetry defect {worst:.3e}"


def test_criterion_07_far_detuned_suppression(system):
    """Far-detuned work suppression: |W1(deltaL=20)| under one tenth of
    |W1(deltaL=1)| at delta = 0.1.

    Known red.  The converged ratio is 0.11473 (identical to nine digits
    at step 1e-3, 5e-4, and 2.5e-4, and confirmed by the discretized
    continuum), so the stated factor is not reachable: the quasi-steady
    estimate behind it (about 0.06 here) ignores the turn-on transient,
    which still carries about half the work at this bandwidth.  The
    assertion is kept at the stated threshold rather than widened.
    """
    scan = detuning_scan(system, 0.1, [1.0, 20.0])
    w = dict(zip(scan.deltaL.tolist(), np.abs(scan.W1).tolist()))
    ratio = w[20.0] / w[1.0]
    assert ratio < 0.1, f"|W1(20)| / |W1(1)| = {ratio:.6f}"


def test_criterion_08_susceptibility(system):
    """Lorentzian response: chi' vanishes and chi'' equals 2 g / gamma0
    exactly on resonance, and both quadratures match the Fourier
    transform of the exponential kernel within 1e-6 off resonance."""
    chi0 = susceptibility(system, system.omega0)
    assert chi0.real == 0.0
    assert chi0.imag == math.sqrt(2.0)

    g = system.g
    half = 0.5 * system.gamma0

    def kernel(tau):
        return g * math.exp(-half * tau)

    for omega in np.linspace(system.omega0 - 4.0, system.omega0 + 4.0, 9):
        wvar = omega - system.omega0
        re_part = -quad(kernel, 0.0, np.inf, weight="sin", wvar=wvar)[0]
        im_part = quad(kernel, 0.0, np.inf, weight="cos", wvar=wvar)[0]
        chi = susceptibility(system, omega)
        assert abs(chi.real - re_part) < 1e-6
        assert abs(chi.imag - im_part) < 1e-6


def test_criterion_09_nonmarkovian_sign_change(confluent_run):
    """Matched resonant pulse: the effective decay rate is negative
    (coherent absorption) strictly before the population peak at t = 2
    and positive after, on every unmasked sample away from the crossing
    itself (|t - 2| <= h/2 excluded)."""
    eff = confluent_run.eff
    t = confluent_run.grid.times()
    h = confluent_run.grid.spacing
    valid = eff.valid_mask & (np.abs(t - 2.0) > 0.5 * h)
    before = valid & (t < 2.0)
    after = valid & (t > 2.0)
    assert before.any() and after.any()
    assert np.all(eff.gamma_t[before] < 0.0)
    assert np.all(eff.gamma_t[after] > 0.0)
