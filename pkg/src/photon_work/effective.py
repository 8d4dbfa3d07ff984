"""Time-dependent effective emitter parameters derived from amplitudes.

The driven emitter behaves like a two-level system with a shifted
transition frequency ``omega_s(t) = omega0 + delta_eff(t)`` and a
time-dependent decay rate ``Gamma(t)``:

    delta_eff(t) = g Im[phi(0,t) / psi(t)]
    Gamma(t)     = gamma0 + 2 g Re[phi(0,t) / psi(t)]

A negative ``Gamma(t)`` marks non-Markovian backflow (coherent absorption
from the pulse).  Ratios are evaluated through the conjugate product
``z = phi psi*`` divided by the population, which is numerically stable;
samples where the population falls below ``eta`` times its maximum are
masked invalid because the ratio quantities are undefined there.  The
interaction energy ``<H_int>(t) = 2 hbar g Im[phi psi*]`` stays regular
at psi = 0 and is never masked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import AmplitudeTrajectory
from .model import TimeGrid

__all__ = [
    "EffectiveTrajectory",
    "AmplitudeBelowThreshold",
    "effective_trajectory",
    "stark_shift",
    "decay_rate",
    "interaction_energy",
    "DEFAULT_ETA",
]

# Relative population threshold below which ratio quantities are masked.
DEFAULT_ETA = 1e-12


class AmplitudeBelowThreshold(ValueError):
    """Raised when a ratio quantity is requested at a masked sample."""


@dataclass(frozen=True, eq=False)
class EffectiveTrajectory:
    """Per-sample effective parameters of the driven emitter.

    ``delta_eff`` and ``gamma_t`` hold NaN at masked samples; ``h_int``
    and ``pop`` are regular everywhere.

    Attributes
    ----------
    grid : TimeGrid
    delta_eff : ndarray
        Dynamic frequency shift ``delta_eff(t_k)``.
    gamma_t : ndarray
        Effective decay rate ``Gamma(t_k)``.
    h_int : ndarray
        Interaction energy ``<H_int>(t_k)`` (real, units hbar gamma0).
    pop : ndarray
        Excited-state population ``|psi(t_k)|^2``.
    valid_mask : ndarray
        Boolean mask, True where ``pop >= eta * max(pop)``.
    """

    grid: TimeGrid
    delta_eff: np.ndarray
    gamma_t: np.ndarray
    h_int: np.ndarray
    pop: np.ndarray
    valid_mask: np.ndarray


def effective_trajectory(
    traj: AmplitudeTrajectory, eta: float = DEFAULT_ETA
) -> EffectiveTrajectory:
    """Derive all effective parameters from an amplitude trajectory."""
    z = traj.phi * np.conj(traj.psi)
    pop = np.abs(traj.psi) ** 2
    g = traj.system.g
    pmax = pop.max() if pop.size else 0.0
    valid = pop >= eta * pmax if pmax > 0.0 else np.zeros(pop.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        delta_eff = np.where(valid, g * z.imag / pop, np.nan)
        gamma_t = np.where(valid, traj.system.gamma0 + 2.0 * g * z.real / pop, np.nan)
    h_int = 2.0 * g * z.imag
    return EffectiveTrajectory(
        grid=traj.grid,
        delta_eff=delta_eff,
        gamma_t=gamma_t,
        h_int=h_int,
        pop=pop,
        valid_mask=valid,
    )


def _ratio_parts(traj: AmplitudeTrajectory, k: int, eta: float):
    pop = np.abs(traj.psi) ** 2
    pmax = pop.max() if pop.size else 0.0
    if pmax <= 0.0 or pop[k] < eta * pmax:
        raise AmplitudeBelowThreshold(
            f"amplitude below threshold at sample {k} (t={traj.grid.times()[k]:g})"
        )
    z = traj.phi[k] * np.conj(traj.psi[k])
    return z, pop[k]


def stark_shift(traj: AmplitudeTrajectory, k: int, eta: float = DEFAULT_ETA) -> float:
    """Dynamic frequency shift ``delta_eff(t_k) = g Im[phi psi*] / |psi|^2``.

    The shifted transition frequency is ``omega_s = omega0 + delta_eff``.

    Raises
    ------
    AmplitudeBelowThreshold
        If the population at sample ``k`` is below ``eta * max``.
    """
    z, p = _ratio_parts(traj, k, eta)
    return traj.system.g * z.imag / p


def decay_rate(traj: AmplitudeTrajectory, k: int, eta: float = DEFAULT_ETA) -> float:
    """Effective decay rate ``Gamma(t_k) = gamma0 + 2 g Re[phi psi*] / |psi|^2``.

    May be negative while the emitter absorbs from the pulse; the
    population obeys ``d|psi|^2/dt = -Gamma(t) |psi|^2``.

    Raises
    ------
    AmplitudeBelowThreshold
        If the population at sample ``k`` is below ``eta * max``.
    """
    z, p = _ratio_parts(traj, k, eta)
    return traj.system.gamma0 + 2.0 * traj.system.g * z.real / p


def interaction_energy(traj: AmplitudeTrajectory, k: int) -> float:
    """Interaction energy ``<H_int>(t_k) = 2 hbar g Im[phi psi*]``.

    Regular for every sample (including psi = 0); equals
    ``2 hbar delta_eff |psi|^2`` wherever the shift is defined.
    """
    z = traj.phi[k] * np.conj(traj.psi[k])
    return 2.0 * traj.system.g * z.imag
