"""Coherent-pulse counterpart: optical Bloch equations and linear response.

A classical drive alpha(t) equal to the photon envelope phi(0, t) replaces
the quantized field.  The reduced state obeys the full nonlinear Bloch
pair (rotating frame at omega0, s = rho_eg e^{i omega0 t}):

    ds/dt = -(gamma0/2) s - g alpha~(t) (1 - 2 rho_ee)
    d(rho_ee)/dt = -gamma0 rho_ee - 2 g Re[alpha~(t) s*]

The work received from the drive, W_alpha = integral Tr[rho_s dH/dt] dt,
splits exactly into three pieces by writing rho_eg = R e^{i theta}:

    W_int  = change of <H_int>      (modulus-phase independent piece)
    W_reac = integral <H_int> (-R'/R) dt        (modulus part)
    W_abs  = integral omega_s^eg (-2 g Re[alpha rho_eg*]) dt  (phase part)

with omega_s^eg = -Im[d(rho_eg)/dt / rho_eg] the instantaneous emission
frequency.  The split is algebraic, valid for the full nonlinear motion,
and is evaluated here in regularized product form (the two ratio terms
carry the same guarded array and cancel in the sum), so the reported
residual is rounding noise for any parameters.  Heat follows the same
table: Q_alpha = -gamma0 integral (omega0 rho_ee + <H_int>/2) dt.

Linear response: the susceptibility of the dipole is a single Lorentzian

    chi~(omega) = i g / (gamma0/2 + i(omega0 - omega))

and the frequency-domain forms of the reactive and absorptive work are
quadratures of chi~' and chi~'' against the pulse spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .dynamics import MAX_STEP_FRACTION
from .effective import DEFAULT_ETA
from .model import PulseParams, SystemParams, TimeGrid
from .pulse import PulseEnvelope, normalization
from .thermo import FULL_CYCLE_POP

try:
    from numba import njit
except ImportError:
    njit = None

__all__ = [
    "BlochTrajectory",
    "SemiclassicalReport",
    "integrate_bloch",
    "susceptibility",
    "work_reactive",
    "work_absorptive",
    "work_total_and_decomposition",
    "transition_frequency_eg",
]

_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class BlochTrajectory:
    """Bloch pair solution in the rotating frame at omega0.

    ``alpha`` is the drive actually applied at each node (including any
    amplitude scaling), so downstream functionals stay consistent with
    the integration even off the matched single-photon normalization.
    """

    grid: TimeGrid
    rho_eg: np.ndarray
    rho_ee: np.ndarray
    alpha: np.ndarray
    system: SystemParams
    pulse: PulseParams


@dataclass(frozen=True)
class SemiclassicalReport:
    """Drive work, its three-way split, and the heat (hbar gamma0 units)."""

    W_alpha: float
    W_int: float
    W_reac: float
    W_abs: float
    Q_alpha: float
    residual_decomposition: float


def _bloch_loop(n, h, t0, gamma0, g, amp, dec_re, dec_im, rho_eg, rho_ee, alpha):
    half = 0.5 * gamma0
    s = 0.0 + 0.0j
    pp = 0.0
    for m in range(n - 1):
        t = t0 + m * h
        th = t + 0.5 * h
        t1 = t + h
        if t < 0.0:
            a0 = 0.0 + 0.0j
        else:
            e = amp * math.exp(-dec_re * t)
            a0 = complex(e * math.cos(dec_im * t), -e * math.sin(dec_im * t))
        if th < 0.0:
            ah = 0.0 + 0.0j
        else:
            e = amp * math.exp(-dec_re * th)
            ah = complex(e * math.cos(dec_im * th), -e * math.sin(dec_im * th))
        if t1 < 0.0:
            a1 = 0.0 + 0.0j
        else:
            e = amp * math.exp(-dec_re * t1)
            a1 = complex(e * math.cos(dec_im * t1), -e * math.sin(dec_im * t1))
        alpha[m] = a0

        k1s = -half * s - g * a0 * (1.0 - 2.0 * pp)
        k1p = -gamma0 * pp - 2.0 * g * (a0.real * s.real + a0.imag * s.imag)

        s2 = s + 0.5 * h * k1s
        p2 = pp + 0.5 * h * k1p
        k2s = -half * s2 - g * ah * (1.0 - 2.0 * p2)
        k2p = -gamma0 * p2 - 2.0 * g * (ah.real * s2.real + ah.imag * s2.imag)

        s3 = s + 0.5 * h * k2s
        p3 = pp + 0.5 * h * k2p
        k3s = -half * s3 - g * ah * (1.0 - 2.0 * p3)
        k3p = -gamma0 * p3 - 2.0 * g * (ah.real * s3.real + ah.imag * s3.imag)

        s4 = s + h * k3s
        p4 = pp + h * k3p
        k4s = -half * s4 - g * a1 * (1.0 - 2.0 * p4)
        k4p = -gamma0 * p4 - 2.0 * g * (a1.real * s4.real + a1.imag * s4.imag)

        s = s + (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        pp = pp + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        rho_eg[m + 1] = s
        rho_ee[m + 1] = pp
        alpha[m + 1] = a1
    if n == 1:
        t = t0
        if t < 0.0:
            alpha[0] = 0.0 + 0.0j
        else:
            e = amp * math.exp(-dec_re * t)
            alpha[0] = complex(e * math.cos(dec_im * t), -e * math.sin(dec_im * t))


if njit is not None:
    _bloch_loop = njit(cache=True)(_bloch_loop)


def integrate_bloch(
    system: SystemParams,
    envelope: PulseEnvelope,
    grid: TimeGrid,
    amplitude_scale: float = 1.0,
) -> BlochTrajectory:
    """Integrate the full nonlinear Bloch pair with classic RK4.

    Parameters
    ----------
    system : SystemParams
    envelope : PulseEnvelope
        Supplies the drive alpha~(t) = scale * phi~(0, t).
    grid : TimeGrid
        Uniform grid; the step guard of the amplitude integrator applies.
    amplitude_scale : float
        Multiplier on the drive.  1.0 is the matched single-photon
        envelope; other values deliberately break that normalization
        (linear-response scaling tests).
    """
    params = envelope.params
    h = grid.spacing
    rate = max(system.gamma0, params.delta, abs(params.deltaL))
    limit = MAX_STEP_FRACTION / rate
    if h > limit:
        raise ValueError(
            f"step {h:g} too large: need step <= {limit:g} for rates "
            f"(gamma0={system.gamma0:g}, delta={params.delta:g}, "
            f"deltaL={params.deltaL:g})"
        )
    n = grid.n
    rho_eg = np.zeros(n, dtype=np.complex128)
    rho_ee = np.zeros(n, dtype=np.float64)
    alpha = np.zeros(n, dtype=np.complex128)
    amp = amplitude_scale * normalization(envelope)
    _bloch_loop(
        n,
        h,
        grid.t0,
        system.gamma0,
        system.g,
        amp,
        0.5 * params.delta,
        params.deltaL,
        rho_eg,
        rho_ee,
        alpha,
    )
    return BlochTrajectory(
        grid=grid,
        rho_eg=rho_eg,
        rho_ee=rho_ee,
        alpha=alpha,
        system=system,
        pulse=params,
    )


def susceptibility(system: SystemParams, omega):
    """Linear susceptibility chi~'(omega) + i chi~''(omega) of the dipole.

    Single Lorentzian of half width gamma0/2 at omega0:
    chi~' = g(omega0 - omega)/((gamma0/2)^2 + (omega0 - omega)^2),
    chi~'' = (g gamma0/2)/(same denominator).
    """
    detun = system.omega0 - np.asarray(omega, dtype=float)
    denom = (0.5 * system.gamma0) ** 2 + detun**2
    chi = (system.g * detun + 1j * (0.5 * system.g * system.gamma0)) / denom
    if np.ndim(omega) == 0:
        return complex(chi)
    return chi


def _spectrum_quad(system: SystemParams, pulse: PulseParams, part: str) -> float:
    """Quadrature of chi~ part against |alpha~(omega)|^2 over the line."""
    g = system.gamma0
    half_g2 = (0.5 * g) ** 2
    half_d2 = (0.5 * pulse.delta) ** 2
    w0 = system.omega0
    wl = pulse.omegaL
    weight = system.rho0 * pulse.delta

    if part == "re":

        def f(w):
            return (
                system.g
                * (w0 - w)
                / (half_g2 + (w0 - w) ** 2)
                * weight
                / (half_d2 + (wl - w) ** 2)
            )

    else:

        def f(w):
            return (
                0.5
                * system.g
                * g
                / (half_g2 + (w0 - w) ** 2)
                * weight
                / (half_d2 + (wl - w) ** 2)
            )

    # Split at the midpoint so both Lorentzian peaks sit in the finite
    # panel, flagged as internal break points for the subdivision.
    wc = 0.5 * (w0 + wl)
    lo = wc - 10.0 * max(g, pulse.delta, 1.0)
    hi = wc + 10.0 * max(g, pulse.delta, 1.0)
    pts = sorted({w0, wl})
    total = 0.0
    total += quad(f, -np.inf, lo, epsabs=1e-13, epsrel=1e-11, limit=200)[0]
    total += quad(f, lo, hi, points=pts, epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    total += quad(f, hi, np.inf, epsabs=1e-13, epsrel=1e-11, limit=200)[0]
    return total


def work_reactive(system: SystemParams, pulse: PulseParams) -> float:
    """Reactive drive work from linear response,
    ``-hbar delta g integral chi~'(omega) |alpha~(omega)|^2 domega``.

    Odd in the laser detuning; positive for a blue-detuned narrowband
    pulse (the spectral weight sits where chi~' < 0, and the leading
    minus sign makes the level-shift work positive)."""
    return -pulse.delta * system.g * _spectrum_quad(system, pulse, "re")


def work_absorptive(system: SystemParams, pulse: PulseParams) -> float:
    """Absorptive drive work from linear response,
    ``hbar omegaL 2 g integral chi~''(omega) |alpha~(omega)|^2 domega``;
    tends to 2 hbar omegaL for a resonant monochromatic pulse."""
    return pulse.omegaL * 2.0 * system.g * _spectrum_quad(system, pulse, "im")


def _trap(h: float, y: np.ndarray) -> float:
    return h * (float(y.sum()) - 0.5 * (float(y[0]) + float(y[-1])))


def transition_frequency_eg(
    traj: BlochTrajectory, eta: float = DEFAULT_ETA
) -> np.ndarray:
    """Instantaneous emission frequency omega_s^eg(t) in product form.

    omega_s^eg = omega0 + g (1 - 2 rho_ee) Im[alpha rho_eg*] / |rho_eg|^2;
    NaN where |rho_eg|^2 falls below ``eta`` times its maximum.
    """
    mod2 = np.abs(traj.rho_eg) ** 2
    mmax = float(mod2.max()) if traj.grid.n else 0.0
    u = traj.alpha * np.conj(traj.rho_eg)
    occ = 1.0 - 2.0 * traj.rho_ee
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(
            mod2 > eta * mmax, traj.system.g * occ * u.imag / mod2, np.nan
        )
    return traj.system.omega0 + shift


def work_total_and_decomposition(
    traj: BlochTrajectory,
    envelope: PulseEnvelope,
    allow_partial: bool = False,
    eta: float = DEFAULT_ETA,
) -> SemiclassicalReport:
    """Drive work W_alpha, its exact three-way split, and the heat.

    All five functionals are composite trapezoids of pointwise integrands
    on the trajectory grid.  The integrands satisfy
    ``w = d<H_int>/dt + reac + abs`` exactly as array algebra (the guarded
    ratio terms cancel), so ``residual_decomposition`` is rounding noise.
    The drive derivative uses the exact envelope relation
    ``d(alpha~)/dt = -(delta/2 + i deltaL) alpha~`` applied to the stored
    drive samples, which keeps everything consistent with any amplitude
    scaling used at integration time.
    """
    params = envelope.params
    gamma0 = traj.system.gamma0
    omega0 = traj.system.omega0
    g = traj.system.g
    h = traj.grid.spacing
    n = traj.grid.n

    if not allow_partial and float(traj.rho_ee[-1]) > FULL_CYCLE_POP:
        raise ValueError(
            "boundary terms not negligible: end population "
            f"{float(traj.rho_ee[-1]):.3e} exceeds {FULL_CYCLE_POP:.0e}; extend "
            "the grid (full_cycle_grid) or pass allow_partial=True"
        )

    mod2_full = np.abs(traj.rho_eg) ** 2
    mmax = float(mod2_full.max()) if n else 0.0
    threshold = eta * mmax

    dec_re = 0.5 * params.delta
    dec_im = params.deltaL
    sums = dict.fromkeys(("w", "dh", "reac", "abs", "q"), 0.0)
    for i0 in range(0, max(n - 1, 1), _CHUNK):
        i1 = min(i0 + _CHUNK, n - 1)
        s = traj.rho_eg[i0 : i1 + 1]
        pp = traj.rho_ee[i0 : i1 + 1]
        a = traj.alpha[i0 : i1 + 1]
        mod2 = mod2_full[i0 : i1 + 1]
        u = a * np.conj(s)
        reu = u.real
        imu = u.imag
        # Im[(da/dt) s*] from the exact envelope derivative.
        im_adot = -dec_re * imu - dec_im * reu
        occ = 1.0 - 2.0 * pp
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(mod2 > threshold, reu * imu / mod2, 0.0)
        w = 2.0 * g * (im_adot - omega0 * reu)
        dh = 2.0 * g * (im_adot - 0.5 * gamma0 * imu)
        reac = g * gamma0 * imu + 2.0 * g * g * occ * r
        absb = -2.0 * g * omega0 * reu - 2.0 * g * g * occ * r
        q = -omega0 * gamma0 * pp - g * gamma0 * imu
        sums["w"] += _trap(h, w)
        sums["dh"] += _trap(h, dh)
        sums["reac"] += _trap(h, reac)
        sums["abs"] += _trap(h, absb)
        sums["q"] += _trap(h, q)

    w_alpha = sums["w"]
    w_int = sums["dh"]
    w_reac = sums["reac"]
    w_abs = sums["abs"]
    return SemiclassicalReport(
        W_alpha=w_alpha,
        W_int=w_int,
        W_reac=w_reac,
        W_abs=w_abs,
        Q_alpha=sums["q"],
        residual_decomposition=w_alpha - (w_int + w_reac + w_abs),
    )
