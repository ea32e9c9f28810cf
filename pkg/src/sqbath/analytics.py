"""Closed-form results: Bloch decay rates, driven Bloch equations, Mollow line
widths in the strong-driving limit, and the cross-decay scattering rate.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvariantError
from .expm import expm
from .models import DriveParams, SqueezedBathParams, SubsystemParams


@dataclass(frozen=True)
class BlochState:
    S_x: float
    S_y: float
    S_z: float

    def __post_init__(self):
        n2 = self.S_x**2 + self.S_y**2 + self.S_z**2
        if n2 > 1 + 1e-9:
            raise InvariantError(f"Bloch vector outside the unit ball: |S|^2 = {n2:.12g}")

    def as_array(self) -> np.ndarray:
        return np.array([self.S_x, self.S_y, self.S_z])


def bloch_decay_rates(p: SqueezedBathParams) -> tuple[float, float, float]:
    """``(gamma_x, gamma_y, gamma_z)`` of the undriven Gardiner-Bloch equation."""
    g, N, M = p.gamma, p.N, p.M
    return g * (N + 0.5 - M), g * (N + 0.5 + M), g * (2 * N + 1)


def partial_solid_angle_rates(p: SqueezedBathParams, epsilon: float) -> tuple[float, float]:
    """Transverse rates when only a fraction ``epsilon`` of the solid angle is squeezed."""
    if not 0.0 <= epsilon <= 1.0:
        raise InvariantError(f"solid-angle fraction must lie in [0, 1], got {epsilon}")
    g, N, M = p.gamma, p.N, p.M
    return (g * (epsilon * (N + 0.5 - M) + 0.5 * (1 - epsilon)),
            g * (epsilon * (N + 0.5 + M) + 0.5 * (1 - epsilon)))


def bloch_matrix(p: SqueezedBathParams, drive: Optional[DriveParams] = None,
                 g_l: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrix ``A`` and source ``b`` with ``dS/dt = A S + b``.

    Cross decay enters through ``g_l``: the squeezing terms and the longitudinal
    relaxation are weighted by ``g_l^2`` while the transverse background
    ``gamma (N + 1/2)`` is unchanged. ``g_l = 1`` is the plain driven squeezed
    bath. A drive phase ``phi_D`` rotates the drive axis in the x-y plane.
    """
    g, N, M, phi = p.gamma, p.N, p.M, p.phi
    gl2 = g_l**2
    mc, ms = gl2 * M * math.cos(phi), gl2 * M * math.sin(phi)
    om = drive.omega_D if drive else 0.0
    pd = drive.phi_D if drive else 0.0
    a = np.array([
        [-g * (N + 0.5 - mc), g * ms, om * math.sin(pd)],
        [g * ms, -g * (N + 0.5 + mc), om * math.cos(pd)],
        [-om * math.sin(pd), -om * math.cos(pd), -g * gl2 * (2 * N + 1)],
    ])
    b = np.array([0.0, 0.0, -gl2 * g])
    return a, b


def bloch_steady_state(p: SqueezedBathParams, drive: Optional[DriveParams] = None,
                       g_l: float = 1.0) -> BlochState:
    a, b = bloch_matrix(p, drive, g_l)
    return BlochState(*np.linalg.solve(a, -b))


def bloch_evolve(p: SqueezedBathParams, drive: Optional[DriveParams], g_l: float,
                 S0: BlochState, times: Sequence[float]) -> np.ndarray:
    """Integrate the affine Bloch ODE exactly; returns an array of shape ``(len(times), 3)``."""
    a, b = bloch_matrix(p, drive, g_l)
    aug = np.zeros((4, 4))
    aug[:3, :3], aug[:3, 3] = a, b
    x0 = np.append(S0.as_array(), 1.0)
    out = np.array([(expm(aug * t) @ x0)[:3].real for t in np.asarray(times, float)])
    for s in out:
        BlochState(*s)
    return out


def _phase_branch(phi: float) -> int:
    r = math.remainder(phi, 2 * math.pi)
    if abs(r) < 1e-12:
        return 0
    if abs(abs(r) - math.pi) < 1e-12:
        return 1
    raise InvariantError(f"line-width tables are defined only for phi in {{0, pi}}, got {phi}")


def mollow_linewidths(p: SqueezedBathParams, phi: Optional[float] = None,
                      g_l: float = 1.0) -> tuple[float, float]:
    """Strong-driving half widths ``(center, sideband)`` of the Mollow triplet.

    The drive axis is S_x, so the centre line decays with the S_x rate and the
    sidebands with the mean of the S_y and S_z rates, all including cross decay
    through ``g_l``. For ``g_l = 1`` this is the two-level table; for maximal
    squeezing and general ``g_l`` the four-level table.
    """
    phi = p.phi if phi is None else phi
    sign = -1.0 if _phase_branch(phi) == 0 else 1.0
    g, N, M = p.gamma, p.N, p.M
    center = g * (N + 0.5 + sign * g_l**2 * M)
    side = 0.25 * g * (2 * N + 1 + 2 * g_l**2 * (2 * N + 1 - sign * M))
    return center, side


def _amplitude(p: SubsystemParams, resolvent: bool) -> complex:
    # Gamma/(Delta - i Gamma/2) = 1/(Delta/Gamma - i/2): only dimensionless ratios enter
    half = 0.5j if resolvent else 0.0
    return (p.gc_a**2 / (p.Delta_a / p.Gamma_a - half)
            - p.gc_e**2 / (p.Delta_e / p.Gamma_e - half))


def cross_decay_rate(p: SubsystemParams) -> float:
    """Resolvent-corrected cross-decay rate, in units of ``p.prefactor``."""
    if p.Delta_a == 0 or p.Delta_e == 0:
        raise InvariantError("cross-decay rate needs nonzero detunings Delta_e, Delta_a")
    return p.prefactor * abs(_amplitude(p, True))**2


def second_order_cross_decay_rate(p: SubsystemParams) -> float:
    """Lowest-order perturbative rate (real energy denominators)."""
    if p.Delta_a == 0 or p.Delta_e == 0:
        raise InvariantError("cross-decay rate needs nonzero detunings Delta_e, Delta_a")
    return p.prefactor * abs(_amplitude(p, False))**2


def optimal_detuning_ratio(p: SubsystemParams) -> float:
    """``Delta_e / Delta_a`` at which the leading cross-decay amplitudes cancel."""
    den = p.gc_a**2 * p.Gamma_a
    if den == 0:
        raise InvariantError("optimal detuning ratio undefined: gc_a^2 Gamma_a = 0")
    return p.gc_e**2 * p.Gamma_e / den


def at_optimal_ratio(p: SubsystemParams) -> SubsystemParams:
    """Same parameters with ``Delta_e`` moved to the interference condition."""
    return dataclasses.replace(p, Delta_e=optimal_detuning_ratio(p) * p.Delta_a)
