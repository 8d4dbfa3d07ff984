"""Shared domain types, unit conventions, and parameter validation.

Natural units with hbar = 1 are used throughout: the spontaneous emission
rate ``gamma0`` sets the time unit, and every energy is reported in units
of ``hbar * gamma0`` (or scaled by ``omega0`` where noted).  The emitter
to continuum coupling ``g`` is never free: it is derived from the decay
rate through ``gamma0 = 4 * pi * g**2 * rho0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemParams",
    "PulseParams",
    "TimeGrid",
    "make_system",
    "make_pulse",
    "uniform_grid",
]


@dataclass(frozen=True)
class SystemParams:
    """Two-level emitter coupled to a flat field continuum.

    Instances should be built with :func:`make_system`, which derives ``g``
    and validates positivity.  Direct construction bypasses validation and
    is reserved for test hooks (for example ``dataclasses.replace`` with
    ``g=0`` to switch the coupling off).

    Attributes
    ----------
    gamma0 : float
        Spontaneous emission rate; sets the time unit.
    omega0 : float
        Emitter transition frequency, in units of ``gamma0``.
    rho0 : float
        Flat spectral density of the continuum (dimensionless).
    g : float
        Vacuum coupling frequency, derived from ``gamma0 = 4 pi g^2 rho0``.
    """

    gamma0: float
    omega0: float
    rho0: float
    g: float


@dataclass(frozen=True)
class PulseParams:
    """Truncated exponential pulse constants.

    Attributes
    ----------
    delta : float
        Pulse bandwidth, in units of ``gamma0``.
    omegaL : float
        Central pulse frequency, in units of ``gamma0``.
    deltaL : float
        Detuning ``omegaL - omega0``, derived by :func:`make_pulse`.
    """

    delta: float
    omegaL: float
    deltaL: float


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid starting at t = 0.

    The excitation is entirely in the field at t = 0, so every evolution
    starts there; ``tf`` is normally chosen by ``dynamics.full_cycle_grid``
    so that the emitter population has decayed below a cycle tolerance.

    Attributes
    ----------
    t0 : float
        Start time, always 0.
    tf : float
        End time, equal to ``(n - 1) * spacing``.
    n : int
        Number of samples (grid points, not steps).
    spacing : float
        Uniform step between samples.
    """

    t0: float
    tf: float
    n: int
    spacing: float

    def times(self) -> np.ndarray:
        """Return the sample times as an array of length ``n``."""
        return np.arange(self.n) * self.spacing


def make_system(
    gamma0: float = 1.0,
    omega0: float = 100.0,
    rho0: float = 1.0 / (2.0 * math.pi),
) -> SystemParams:
    """Build validated system parameters with the coupling derived.

    Parameters
    ----------
    gamma0 : float
        Spontaneous emission rate (time unit), must be positive.
    omega0 : float
        Transition frequency in units of ``gamma0``, must be positive.
    rho0 : float
        Flat spectral density; the default 1/(2 pi) makes the coupling
        ``g = sqrt(gamma0 / 2)``.  Must be positive.

    Returns
    -------
    SystemParams
        Parameters with ``g = sqrt(gamma0 / (4 pi rho0))`` so that
        ``gamma0 = 4 pi g^2 rho0`` holds to machine precision.
    """
    if not (gamma0 > 0):
        raise ValueError("gamma0 must be positive")
    if not (omega0 > 0):
        raise ValueError("omega0 must be positive")
    if not (rho0 > 0):
        raise ValueError("rho0 must be positive")
    g = math.sqrt(gamma0 / (4.0 * math.pi * rho0))
    return SystemParams(gamma0=gamma0, omega0=omega0, rho0=rho0, g=g)


def make_pulse(delta: float, omegaL: float, system: SystemParams) -> PulseParams:
    """Build validated pulse parameters with the detuning derived.

    Parameters
    ----------
    delta : float
        Pulse bandwidth, must be positive.
    omegaL : float
        Central pulse frequency.
    system : SystemParams
        Supplies ``omega0`` for the detuning ``deltaL = omegaL - omega0``.
    """
    if not (delta > 0):
        raise ValueError("delta must be positive")
    if not math.isfinite(omegaL):
        raise ValueError("omegaL must be finite")
    return PulseParams(delta=delta, omegaL=omegaL, deltaL=omegaL - system.omega0)


def uniform_grid(tf: float, step: float) -> TimeGrid:
    """Build a uniform grid on [0, tf] with the given step.

    ``tf`` is rounded up to an integer number of steps so the spacing is
    exactly ``step``.
    """
    if not (tf > 0):
        raise ValueError("tf must be positive")
    if not (step > 0):
        raise ValueError("step must be positive")
    n_steps = max(1, math.ceil(tf / step - 1e-9))
    return TimeGrid(t0=0.0, tf=n_steps * step, n=n_steps + 1, spacing=step)
