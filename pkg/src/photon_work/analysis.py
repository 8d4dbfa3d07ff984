"""Quantum vs semiclassical equivalences and detuning sweeps.

The headline comparisons pair each quantum energy current with its
coherent-drive counterpart in the narrowband low-excitation regime:

    W1      <->  reactive drive work
    Q1_abs  <->  absorptive drive work
    Q1_em   <->  drive heat

All three drive-side values come from the time-domain work decomposition
of a Bloch trajectory driven by the same envelope; in the low-excitation
regime the coherence tracks the quantum amplitude pointwise, so the
paired integrals converge as the bandwidth shrinks.  (The frequency
domain quadratures in the semiclassical module target the quasi-steady
tail only and drop a turn-on transient of the same order, so they are
not used for the reactive pair.)

Relative errors use the larger magnitude as denominator with an absolute
floor, since both members of the first pair vanish at zero detuning.
Regime indicators (bandwidth ratio and both peak populations) are always
recorded; equivalence is only a meaningful claim when the pulse is
narrowband (delta <= 0.01 gamma0) and both excitations stay below 0.02.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import closed_form_trajectory, full_cycle_grid
from .model import PulseParams, SystemParams, make_pulse
from .pulse import PulseEnvelope
from .semiclassical import integrate_bloch, work_total_and_decomposition
from .thermo import ThermoReport, thermo_report

__all__ = [
    "RegimeFlags",
    "EquivalenceReport",
    "DetuningScan",
    "compare_equivalences",
    "detuning_scan",
]

# Absolute floor for relative-error denominators, in hbar gamma0.
REL_ERR_FLOOR = 1e-8
REGIME_DELTA_MAX = 0.01
REGIME_POP_MAX = 0.02

_EQUIV_STEP_CAP = 5e-3
_SCAN_STEP_CAP = 5e-4
_GUARD = 0.02


@dataclass(frozen=True)
class RegimeFlags:
    """Narrowband low-excitation indicators recorded with every report."""

    delta_over_gamma0: float
    max_pop_quantum: float
    max_pop_semiclassical: float
    in_regime: bool


@dataclass(frozen=True)
class EquivalenceReport:
    """Paired quantum/semiclassical energies and their relative errors."""

    system: SystemParams
    pulse: PulseParams
    w1: float
    w_reac_alpha: float
    q1_abs: float
    w_abs_alpha: float
    q1_em: float
    q_alpha: float
    rel_err_work_reactive: float
    rel_err_heat_absorbed: float
    rel_err_heat_emitted: float
    regime: RegimeFlags


@dataclass(frozen=True, eq=False)
class DetuningScan:
    """Thermo functionals on a laser-detuning sweep at fixed bandwidth.

    ``antisymmetry`` lists (|deltaL|, |W1(+deltaL) + W1(-deltaL)|) for
    every detuning whose mirror value is also in the sweep.
    """

    delta: float
    deltaL: np.ndarray
    W1: np.ndarray
    Q1: np.ndarray
    Q1_abs: np.ndarray
    Q1_em: np.ndarray
    res_first_law: np.ndarray
    res_q_split: np.ndarray
    res_w_split: np.ndarray
    antisymmetry: tuple


def _rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), REL_ERR_FLOOR)


def _worker_count(n_jobs: int) -> int:
    env = os.environ.get("PHOTON_WORK_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1, n_jobs))


def compare_equivalences(
    system: SystemParams,
    pulse: PulseParams,
    step: float | None = None,
    cycle_tol: float = 1e-12,
) -> EquivalenceReport:
    """Run both pipelines on a full cycle and compare the three pairs.

    Parameters
    ----------
    system : SystemParams
    pulse : PulseParams
    step : float, optional
        Grid step; defaults to min(5e-3, 0.02/rate) with
        rate = max(gamma0, delta, |deltaL|), fine enough that the
        quadrature error is far below the equivalence scale even for the
        very long grids that narrowband pulses need.
    cycle_tol : float
        Full-cycle population tolerance passed to the grid builder.
    """
    rate = max(system.gamma0, pulse.delta, abs(pulse.deltaL))
    if step is None:
        step = min(_EQUIV_STEP_CAP, _GUARD / rate)
    grid = full_cycle_grid(system, pulse, cycle_tol=cycle_tol, step=step)

    traj = closed_form_trajectory(system, pulse, grid)
    rep = thermo_report(traj)
    max_pop_q = float(np.max(np.abs(traj.psi) ** 2))
    del traj

    envelope = PulseEnvelope(pulse, system)
    btraj = integrate_bloch(system, envelope, grid)
    srep = work_total_and_decomposition(btraj, envelope)
    max_pop_s = float(np.max(btraj.rho_ee))
    del btraj

    ratio = pulse.delta / system.gamma0
    regime = RegimeFlags(
        delta_over_gamma0=ratio,
        max_pop_quantum=max_pop_q,
        max_pop_semiclassical=max_pop_s,
        in_regime=(
            ratio <= REGIME_DELTA_MAX * (1.0 + 1e-12)
            and max_pop_q <= REGIME_POP_MAX
            and max_pop_s <= REGIME_POP_MAX
        ),
    )
    return EquivalenceReport(
        system=system,
        pulse=pulse,
        w1=rep.W1,
        w_reac_alpha=srep.W_reac,
        q1_abs=rep.Q1_abs,
        w_abs_alpha=srep.W_abs,
        q1_em=rep.Q1_em,
        q_alpha=srep.Q_alpha,
        rel_err_work_reactive=_rel_err(rep.W1, srep.W_reac),
        rel_err_heat_absorbed=_rel_err(rep.Q1_abs, srep.W_abs),
        rel_err_heat_emitted=_rel_err(rep.Q1_em, srep.Q_alpha),
        regime=regime,
    )


def _scan_point(
    system: SystemParams, delta: float, deltaL: float, step, cycle_tol
) -> ThermoReport:
    pulse = make_pulse(delta, system.omega0 + deltaL, system)
    rate = max(system.gamma0, delta, abs(deltaL))
    eff = step if step is not None else min(_SCAN_STEP_CAP, _GUARD / rate)
    grid = full_cycle_grid(system, pulse, cycle_tol=cycle_tol, step=eff)
    traj = closed_form_trajectory(system, pulse, grid)
    return thermo_report(traj)


def detuning_scan(
    system: SystemParams,
    delta: float,
    deltaL_list,
    step: float | None = None,
    cycle_tol: float = 1e-12,
) -> DetuningScan:
    """Closed-form thermo sweep over laser detunings at fixed bandwidth.

    Points run in parallel (capped by the PHOTON_WORK_THREADS environment
    variable) and are aggregated in list order, so results do not depend
    on scheduling.
    """
    values = [float(d) for d in deltaL_list]
    workers = _worker_count(len(values))
    if workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_scan_point, system, delta, d, step, cycle_tol)
                for d in values
            ]
            reports = [f.result() for f in futures]
    else:
        reports = [
            _scan_point(system, delta, d, step, cycle_tol) for d in values
        ]

    w1 = np.array([r.W1 for r in reports])
    pairs = []
    for i, d in enumerate(values):
        if d > 0 and -d in values:
            j = values.index(-d)
            pairs.append((d, abs(w1[i] + w1[j])))
    return DetuningScan(
        delta=delta,
        deltaL=np.array(values),
        W1=w1,
        Q1=np.array([r.Q1 for r in reports]),
        Q1_abs=np.array([r.Q1_abs for r in reports]),
        Q1_em=np.array([r.Q1_em for r in reports]),
        res_first_law=np.array([r.residual_first_law for r in reports]),
        res_q_split=np.array([r.residual_Q_split for r in reports]),
        res_w_split=np.array([r.residual_W_split for r in reports]),
        antisymmetry=tuple(pairs),
    )
