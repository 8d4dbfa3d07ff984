"""Energy balance: work W1, generalized heat Q1, exact decompositions."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photon_work.dynamics import closed_form_trajectory, full_cycle_grid, integrate_psi
from photon_work.model import make_pulse, make_system, uniform_grid
from photon_work.thermo import (
    heat_Q1,
    heat_decomposition,
    internal_energy,
    thermo_report,
    work_W1,
    work_decomposition,
)


@pytest.fixture(scope="module")
def sys1():
    return make_system()


@pytest.fixture(scope="module")
def detuned_run(sys1):
    """A generic full cycle with both detuning and bandwidth mismatch."""
    pulse = make_pulse(0.3, 100.7, sys1)
    grid = full_cycle_grid(sys1, pulse, cycle_tol=1e-12, step=1e-3)
    traj = closed_form_trajectory(sys1, pulse, grid)
    return traj, thermo_report(traj)


def test_internal_energy_at_confluent_peak(confluent_run):
    # U(2) = omega0 * 2 e^{-2}; the shift term vanishes on resonance.
    k = round(2.0 / confluent_run.grid.spacing)
    expected = 100.0 * 2.0 * math.exp(-2.0)
    assert internal_energy(confluent_run.traj, k) == pytest.approx(
        expected, rel=1e-9
    )
    assert internal_energy(confluent_run.traj, 0) == 0.0


def test_confluent_half_cycle_heat(sys1):
    """Up to the population peak the emitter has absorbed exactly the
    internal energy it holds there: no work flows on resonance."""
    pulse = make_pulse(1.0, 100.0, sys1)
    traj = closed_form_trajectory(sys1, pulse, uniform_grid(2.0, 1e-4))
    expected = 100.0 * 2.0 * math.exp(-2.0)
    assert work_W1(traj, allow_partial=True) == 0.0
    assert heat_Q1(traj, allow_partial=True) == pytest.approx(expected, rel=1e-6)


def test_partial_grid_rejected_without_flag(sys1):
    pulse = make_pulse(1.0, 100.0, sys1)
    traj = closed_form_trajectory(sys1, pulse, uniform_grid(2.0, 1e-3))
    with pytest.raises(ValueError, match="boundary terms not negligible"):
        heat_Q1(traj)
    with pytest.raises(ValueError, match="allow_partial"):
        thermo_report(traj)


def test_full_cycle_work_heat_cancel(detuned_run):
    _, rep = detuned_run
    assert rep.Q1 == pytest.approx(-rep.W1, abs=1e-5)
    assert abs(rep.dU) < 1e-5


def test_full_cycle_boundary_work_vanishes(detuned_run):
    # The interaction-energy part of W1 is a pure boundary term; what
    # remains at the step used here is quadrature error, not physics.
    _, rep = detuned_run
    assert abs(rep.W1_int) < 1e-7
    assert rep.W1 == pytest.approx(rep.W1_reac, abs=1e-7)


def test_heat_split_signs(detuned_run):
    # The photon is first absorbed, then re-emitted into free modes.
    _, rep = detuned_run
    assert rep.Q1_abs > 0.0 > rep.Q1_em


def test_decomposition_functions_match_report(detuned_run):
    traj, rep = detuned_run
    qabs, qem = heat_decomposition(traj)
    wint, wreac = work_decomposition(traj)
    assert (qabs, qem) == (rep.Q1_abs, rep.Q1_em)
    assert (wint, wreac) == (rep.W1_int, rep.W1_reac)
    assert qabs + qem == pytest.approx(rep.Q1, abs=1e-12)
    assert wint + wreac == pytest.approx(rep.W1, abs=1e-12)


def test_resonant_work_is_exactly_zero(sys1):
    # deltaL = 0 keeps phi and psi in phase for any bandwidth, so the
    # work integrand is identically zero, not merely small.
    for delta in (0.37, 1.0, 4.0):
        pulse = make_pulse(delta, 100.0, sys1)
        grid = full_cycle_grid(sys1, pulse, cycle_tol=1e-12, step=1e-3)
        traj = closed_form_trajectory(sys1, pulse, grid)
        assert abs(work_W1(traj)) < 1e-16


def test_work_antisymmetric_under_detuning_flip(sys1):
    pulse_p = make_pulse(0.1, 100.4, sys1)
    pulse_m = make_pulse(0.1, 99.6, sys1)
    grid = full_cycle_grid(sys1, pulse_p, cycle_tol=1e-12, step=1e-3)
    w_p = work_W1(closed_form_trajectory(sys1, pulse_p, grid))
    w_m = work_W1(closed_form_trajectory(sys1, pulse_m, grid))
    assert w_p != 0.0
    assert abs(w_p + w_m) < 1e-12


def test_work_value_converges_with_step(sys1):
    pulse = make_pulse(0.1, 100.2, sys1)
    grid_ref = full_cycle_grid(sys1, pulse, cycle_tol=1e-12, step=2.5e-4)
    tf = grid_ref.tf
    ref = work_W1(closed_form_trajectory(sys1, pulse, grid_ref))

    def w_at(step):
        return work_W1(
            closed_form_trajectory(sys1, pulse, uniform_grid(tf, step)),
            allow_partial=True,
        )

    err_coarse = abs(w_at(2e-3) - ref)
    err_fine = abs(w_at(1e-3) - ref)
    assert err_fine < err_coarse
    assert err_fine < 1e-4 * abs(ref)


def test_zero_coupling_run_is_thermodynamically_silent(sys1):
    system = dataclasses.replace(sys1, g=0.0)
    pulse = make_pulse(1.0, 100.0, system)
    traj = integrate_psi(system, pulse, uniform_grid(10.0, 1e-3))
    rep = thermo_report(traj)
    assert rep.W1 == 0.0 and rep.Q1 == 0.0 and rep.dU == 0.0


@settings(max_examples=15, deadline=None)
@given(
    delta=st.floats(min_value=0.05, max_value=5.0),
    deltaL=st.floats(min_value=-3.0, max_value=3.0),
    step=st.sampled_from([5e-3, 2e-3, 1e-3]),
)
def test_residuals_are_step_independent(delta, deltaL, step):
    """The three decomposition residuals check quadrature consistency,
    so they sit at rounding level even on deliberately coarse grids."""
    system = make_system()
    pulse = make_pulse(delta, 100.0 + deltaL, system)
    traj = closed_form_trajectory(system, pulse, uniform_grid(30.0, step))
    rep = thermo_report(traj, allow_partial=True)
    assert abs(rep.residual_first_law) < 1e-10
    assert abs(rep.residual_Q_split) < 1e-10
    assert abs(rep.residual_W_split) < 1e-10


def test_report_metadata_names_rule_and_grid(detuned_run):
    _, rep = detuned_run
    assert rep.grid_meta.startswith("trapezoid n=")
