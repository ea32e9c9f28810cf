"""Lindblad models: two-level atom in a squeezed bath and its four-level mimic.

Canonical level orders:

* two-level squeezed bath: ``("g", "e")`` with ``sigma = |g><e|``;
* four-level atom: ``("g-", "g+", "e-", "e+")``;
* effective ground-state model: ``("g-", "g+")`` with the Raman lowering
  operator ``sigma = |g-><g+|``, so ``g+`` plays the excited level;
* cross-decay subsystem: ``("g-", "g+", "e", "a")``.

Dissipators use ``D[c] rho = c rho c† - 1/2 {c†c, rho}`` and each jump channel
is stored as ``(rate, c)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvariantError
from .operators import HilbertSpace, Operator, basis_operator, projector

TWO_LEVEL = ("g", "e")
FOUR_LEVEL = ("g-", "g+", "e-", "e+")
GROUND = ("g-", "g+")
SUBSYSTEM = ("g-", "g+", "e", "a")

NORM_TOL = 1e-12
ADIABATIC_LIMIT = 0.2


class AdiabaticValidityWarning(UserWarning):
    """Pump strength is outside the regime where adiabatic elimination holds."""


@dataclass(frozen=True)
class SqueezedBathParams:
    N: float
    M: float
    phi: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvariantError(f"gamma must be positive, got {self.gamma}")
        if self.N < 0:
            raise InvariantError(f"photon number N must be >= 0, got {self.N}")
        if self.M < 0:
            raise InvariantError(f"squeezing parameter M must be >= 0, got {self.M}")
        if self.M**2 > self.N * (self.N + 1) + 1e-12:
            raise InvariantError(
                f"squeezing bound M^2 <= N(N+1) violated: M={self.M}, N={self.N}")

    @classmethod
    def maximal(cls, N: float, phi: float = 0.0, gamma: float = 1.0) -> "SqueezedBathParams":
        return cls(N=N, M=math.sqrt(N * (N + 1)), phi=phi, gamma=gamma)

    def split(self) -> tuple[float, float]:
        """Return ``(N1, N2)`` with ``N1 (N1 + 1) = M^2`` and ``N1 + N2 = N``."""
        n1 = 0.5 * (math.sqrt(1.0 + 4.0 * self.M**2) - 1.0)
        n2 = self.N - n1
        if n2 < 0:  # only reachable through the 1e-12 slack on the bound
            n1, n2 = self.N, 0.0
        return n1, n2


@dataclass(frozen=True)
class DriveParams:
    omega_D: float
    phi_D: float = 0.0


@dataclass(frozen=True)
class FourLevelParams:
    Omega: float
    eps_plus: float
    eps_minus: float
    phi_L: float = 0.0
    g_l: float = 1.0
    g_c: Optional[float] = None
    Gamma: float = 1.0
    drive: Optional[DriveParams] = None

    def __post_init__(self):
        if self.g_c is None:
            object.__setattr__(self, "g_c", math.sqrt(max(0.0, 1.0 - self.g_l**2)))
        if not self.Gamma > 0:
            raise InvariantError(f"Gamma must be positive, got {self.Gamma}")
        if self.Omega < 0:
            raise InvariantError(f"Omega must be >= 0, got {self.Omega}")
        if self.eps_plus < 0 or self.eps_minus < 0:
            raise InvariantError(
                f"field amplitudes must be >= 0, got eps_plus={self.eps_plus}, "
                f"eps_minus={self.eps_minus}")
        norm = self.eps_plus**2 + self.eps_minus**2
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantError(
                f"field normalization eps_plus^2 + eps_minus^2 = 1 violated: got {norm!r}")
        if self.g_l < 0 or self.g_c < 0:
            raise InvariantError(f"Clebsch-Gordan amplitudes must be >= 0: g_l={self.g_l}, g_c={self.g_c}")
        cg = self.g_l**2 + self.g_c**2
        if abs(cg - 1.0) > NORM_TOL:
            raise InvariantError(
                f"Clebsch-Gordan normalization g_l^2 + g_c^2 = 1 violated: got {cg!r}")

    @property
    def omega_over_Gamma(self) -> float:
        return self.Omega / self.Gamma

    @property
    def pump_rate(self) -> float:
        """Optical pumping scale ``Omega^2 / Gamma``."""
        return self.Omega**2 / self.Gamma

    @classmethod
    def from_squeezed(cls, N: float, gamma: float, *, Gamma: float = 1.0, phi: float = 0.0,
                      g_l: float = 1.0, drive: Optional[DriveParams] = None) -> "FourLevelParams":
        """Four-level parameters that mimic a maximally squeezed bath ``(N, gamma, phi)``."""
        ep, em, Om = inverse_map(N, gamma, Gamma)
        return cls(Omega=Om, eps_plus=ep, eps_minus=em, phi_L=phi, g_l=g_l,
                   g_c=math.sqrt(max(0.0, 1.0 - g_l**2)), Gamma=Gamma, drive=drive)


@dataclass(frozen=True)
class SubsystemParams:
    """Two upper manifolds ``e`` and ``a`` sharing the ground level ``g-``.

    ``Delta_e = w_L - w_eg`` and ``Delta_a = -(w_L - w_ag)``: positive values of
    both put the laser between the two manifolds.
    """
    Gamma_e: float
    Gamma_a: float
    Delta_e: float
    Delta_a: float
    gc_e: float
    gc_a: float
    prefactor: float = 1.0

    def __post_init__(self):
        if not (self.Gamma_e > 0 and self.Gamma_a > 0):
            raise InvariantError(
                f"decay rates must be positive: Gamma_e={self.Gamma_e}, Gamma_a={self.Gamma_a}")
        for name in ("gc_e", "gc_a"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise InvariantError(f"{name} must lie in [0, 1], got {v}")
        if self.prefactor < 0:
            raise InvariantError(f"prefactor must be >= 0, got {self.prefactor}")


@dataclass(frozen=True, eq=False)
class LindbladModel:
    space: HilbertSpace
    hamiltonian: Operator
    jumps: tuple[tuple[float, Operator], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple((float(r), c) for r, c in self.jumps))
        if self.hamiltonian.space != self.space:
            raise InvariantError("Hamiltonian lives on a different space than the model")
        if not self.hamiltonian.is_hermitian():
            raise InvariantError("Hamiltonian must be Hermitian to 1e-12")
        for r, c in self.jumps:
            if r < 0:
                raise InvariantError(f"jump rate must be >= 0, got {r}")
            if c.space != self.space:
                raise InvariantError("jump operator lives on a different space than the model")

    def operator(self, ket: str, bra: str) -> Operator:
        return basis_operator(self.space, ket, bra)

    def effective_hamiltonian(self) -> np.ndarray:
        """Non-Hermitian ``H - i/2 sum_k r_k c_k† c_k`` as a plain array."""
        h = np.array(self.hamiltonian.matrix)
        for r, c in self.jumps:
            h = h - 0.5j * r * (c.matrix.conj().T @ c.matrix)
        return h

    def total_jump_rate(self) -> float:
        """Largest eigenvalue of ``sum_k r_k c_k† c_k`` (maximal jump rate of any state)."""
        k = np.zeros((self.space.dim, self.space.dim), complex)
        for r, c in self.jumps:
            k += r * (c.matrix.conj().T @ c.matrix)
        return float(np.linalg.eigvalsh(0.5 * (k + k.conj().T)).max()) if self.jumps else 0.0


def _drive_term(space: HilbertSpace, lower: str, upper: str,
                drive: Optional[DriveParams]) -> Operator:
    if drive is None or drive.omega_D == 0:
        return space.zero()
    s = basis_operator(space, lower, upper)
    h = (0.5 * drive.omega_D) * (np.exp(-1j * drive.phi_D) * s.dag() + np.exp(1j * drive.phi_D) * s)
    return Operator(space, 0.5 * (h.matrix + h.matrix.conj().T), hermitian=True)


def squeezed_bath_master(p: SqueezedBathParams, drive: Optional[DriveParams] = None,
                         labels: tuple[str, str] = TWO_LEVEL) -> LindbladModel:
    """Two-level atom in a broadband squeezed bath, three-channel form.

    Channels ``(gamma, Sigma)``, ``(gamma N2, sigma)``, ``(gamma N2, sigma†)`` with
    ``Sigma = sqrt(N1+1) sigma + exp(i phi) sqrt(N1) sigma†``. Channels with zero
    rate are dropped.
    """
    space = HilbertSpace(labels)
    g, e = labels
    s = basis_operator(space, g, e)
    n1, n2 = p.split()
    big_sigma = math.sqrt(n1 + 1.0) * s + (np.exp(1j * p.phi) * math.sqrt(n1)) * s.dag()
    jumps = [(p.gamma, big_sigma)]
    if n2 > 0:
        jumps += [(p.gamma * n2, s), (p.gamma * n2, s.dag())]
    return LindbladModel(space, _drive_term(space, g, e, drive), tuple(jumps))


def four_level_master(p: FourLevelParams) -> LindbladModel:
    """Full J=1/2 -> J=1/2 atom with weak pumps, spontaneous decay and a Raman drive."""
    space = HilbertSpace(FOUR_LEVEL)
    op = lambda k, b: basis_operator(space, k, b)  # noqa: E731
    s1, s2 = op("g-", "e-"), op("g+", "e+")
    s_plus, s_minus = op("g+", "e-"), op("g-", "e+")
    half = 0.5 * p.Omega
    h = (p.eps_minus * half) * (s_minus.dag() + s_minus)
    h = h + (p.eps_plus * half) * (np.exp(-1j * p.phi_L) * s_plus.dag() + np.exp(1j * p.phi_L) * s_plus)
    h = h + _drive_term(space, "g-", "g+", p.drive)
    h = Operator(space, 0.5 * (h.matrix + h.matrix.conj().T), hermitian=True)
    jumps = [(p.g_l**2 * p.Gamma, s1 + s2)]
    if p.g_c > 0:
        jumps += [(p.g_c**2 * p.Gamma, s_minus), (p.g_c**2 * p.Gamma, s_plus)]
    return LindbladModel(space, h, tuple(jumps))


def effective_ground_master(p: FourLevelParams) -> LindbladModel:
    """Ground-state master equation after adiabatic elimination of the upper levels.

    Channels ``(g_l^2 Omega^2/Gamma, eps+ sigma + exp(i phi_L) eps- sigma†)`` and the
    cross-decay dephasing ``(g_c^2 Omega^2 / (4 Gamma), sigma_z)``.
    """
    if p.omega_over_Gamma > ADIABATIC_LIMIT:
        warnings.warn(
            f"Omega/Gamma = {p.omega_over_Gamma:.3g} exceeds {ADIABATIC_LIMIT}; "
            "adiabatic elimination is unreliable", AdiabaticValidityWarning, stacklevel=2)
    space = HilbertSpace(GROUND)
    s = basis_operator(space, "g-", "g+")
    sigma_t = p.eps_plus * s + (np.exp(1j * p.phi_L) * p.eps_minus) * s.dag()
    jumps = [(p.g_l**2 * p.pump_rate, sigma_t)]
    if p.g_c > 0:
        sz = Operator(space, projector(space, ["g+"]).matrix - projector(space, ["g-"]).matrix,
                      hermitian=True)
        jumps.append((p.g_c**2 * p.pump_rate / 4.0, sz))
    return LindbladModel(space, _drive_term(space, "g-", "g+", p.drive), tuple(jumps))


def map_parameters(p: FourLevelParams) -> SqueezedBathParams:
    """Squeezed-bath parameters ``(gamma, N, M, phi)`` mimicked by the four-level atom."""
    ep2, em2 = p.eps_plus**2, p.eps_minus**2
    if not p.eps_plus > p.eps_minus:
        raise InvariantError(
            f"mapping singular: ε₊ must exceed ε₋ (eps_plus={p.eps_plus}, eps_minus={p.eps_minus})")
    diff = ep2 - em2
    N = em2 / diff
    # M^2 = N(N+1) holds identically; evaluate it that way so the bound check is exact
    M = p.eps_minus * p.eps_plus / diff
    return SqueezedBathParams(N=N, M=min(M, math.sqrt(N * (N + 1))), phi=p.phi_L,
                              gamma=diff * p.pump_rate)


def inverse_map(N: float, gamma: float, Gamma: float = 1.0) -> tuple[float, float, float]:
    """``(eps_plus, eps_minus, Omega)`` giving photon number ``N`` and rate ``gamma``."""
    if N < 0:
        raise InvariantError(f"photon number N must be >= 0, got {N}")
    if not gamma > 0:
        raise InvariantError(f"target rate gamma must be positive, got {gamma}")
    em = math.sqrt(N / (2 * N + 1))
    ep = math.sqrt((N + 1) / (2 * N + 1))
    return ep, em, math.sqrt(gamma * Gamma * (2 * N + 1))


def interference_subsystem_model(p: SubsystemParams,
                                 couplings: Optional[tuple[float, float]] = None,
                                 gl_e: Optional[float] = None,
                                 gl_a: Optional[float] = None) -> LindbladModel:
    """Ground level ``g-`` pumped through two upper manifolds with interfering decay.

    In the laser frame ``e`` sits at energy ``-Delta_e`` and ``a`` at ``+Delta_a``.
    ``g-`` couples to both with Rabi frequencies ``couplings``; by default
    ``Omega_x = 2 sqrt(prefactor) gc_x sqrt(Gamma_x)`` so the circular-photon
    scattering rate in the weak-drive limit is ``prefactor`` times the squared
    amplitude sum. Circular photons return the atom to ``g-``, linear ones take
    it to ``g+``; each polarization is one interfering channel.
    """
    space = HilbertSpace(SUBSYSTEM)
    op = lambda k, b: basis_operator(space, k, b)  # noqa: E731
    if couplings is None:
        amp = math.sqrt(p.prefactor)
        couplings = (2 * amp * p.gc_e * math.sqrt(p.Gamma_e), 2 * amp * p.gc_a * math.sqrt(p.Gamma_a))
    om_e, om_a = couplings
    gl_e = math.sqrt(1 - p.gc_e**2) if gl_e is None else gl_e
    gl_a = math.sqrt(1 - p.gc_a**2) if gl_a is None else gl_a
    h = (-p.Delta_e) * projector(space, ["e"]) + p.Delta_a * projector(space, ["a"])
    h = h + (0.5 * om_e) * (op("e", "g-") + op("g-", "e"))
    h = h + (0.5 * om_a) * (op("a", "g-") + op("g-", "a"))
    h = Operator(space, h.matrix, hermitian=True)
    circular = (p.gc_e * math.sqrt(p.Gamma_e)) * op("g-", "e") + (p.gc_a * math.sqrt(p.Gamma_a)) * op("g-", "a")
    linear = (gl_e * math.sqrt(p.Gamma_e)) * op("g+", "e") + (gl_a * math.sqrt(p.Gamma_a)) * op("g+", "a")
    return LindbladModel(space, h, ((1.0, circular), (1.0, linear)))
