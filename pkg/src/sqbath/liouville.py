"""Superoperator form of Lindblad models: steady states, propagation, eigenmodes.

Vectorization is column stacking, ``vec(rho) = rho.flatten(order="F")``, with the
identity ``vec(A X B) = (B^T kron A) vec(X)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvariantError, NumericalError
from .expm import expm
from .models import LindbladModel
from .operators import DensityMatrix, HilbertSpace

TRACE_TOL = 1e-10
ZERO_MODE_TOL = 1e-10


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).flatten(order="F")


def unvec(v: np.ndarray, dim: Optional[int] = None) -> np.ndarray:
    v = np.asarray(v)
    dim = dim or int(round(np.sqrt(v.shape[-1])))
    return v.reshape(dim, dim, order="F")


def _superop_left(a: np.ndarray) -> np.ndarray:
    """Matrix of ``X -> A X``."""
    return np.kron(np.eye(a.shape[0]), a)


def _superop_right(b: np.ndarray) -> np.ndarray:
    """Matrix of ``X -> X B``."""
    return np.kron(b.T, np.eye(b.shape[0]))


@dataclass(frozen=True, eq=False)
class Liouvillian:
    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        d2 = self.space.dim**2
        if m.shape != (d2, d2):
            raise InvariantError(f"Liouvillian shape {m.shape} does not match d^2 = {d2}")
        leak = np.max(np.abs(vec(np.eye(self.space.dim)).conj() @ m), initial=0.0)
        if leak > TRACE_TOL * max(1.0, self.scale):
            raise InvariantError(f"Liouvillian is not trace preserving: |1^T L| = {leak:.3e}")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.any() else 0.0

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)

    def propagator(self, t: float) -> np.ndarray:
        return expm(self.matrix * t)


@dataclass(frozen=True)
class EigenMode:
    eigenvalue: complex

    @property
    def position(self) -> float:
        return float(self.eigenvalue.imag)

    @property
    def halfwidth(self) -> float:
        return float(-self.eigenvalue.real)


@dataclass(frozen=True)
class MollowTriplet:
    center: EigenMode
    sidebands: tuple[EigenMode, EigenMode]
    next_halfwidth: Optional[float]

    @property
    def halfwidths(self) -> tuple[float, float, float]:
        lo, hi = self.sidebands
        return self.center.halfwidth, lo.halfwidth, hi.halfwidth

    @property
    def positions(self) -> tuple[float, float, float]:
        lo, hi = self.sidebands
        return self.center.position, lo.position, hi.position


def build_liouvillian(model: LindbladModel) -> Liouvillian:
    h = model.hamiltonian.matrix
    L = -1j * (_superop_left(h) - _superop_right(h))
    for r, c in model.jumps:
        c = c.matrix
        cdc = c.conj().T @ c
        L = L + r * (np.kron(c.conj(), c) - 0.5 * _superop_left(cdc) - 0.5 * _superop_right(cdc))
    return Liouvillian(model.space, L)


def _eigvals(L: Liouvillian) -> np.ndarray:
    return np.linalg.eigvals(L.matrix)


def steady_state(L: Liouvillian) -> DensityMatrix:
    """Unique stationary state by shifted inverse iteration on the null vector."""
    lam = _eigvals(L)
    mags = np.sort(np.abs(lam))
    scale = mags[-1] if mags[-1] > 0 else 1.0
    if mags[0] > ZERO_MODE_TOL * scale:
        raise NumericalError(f"Liouvillian has no null eigenvalue (smallest |λ| = {mags[0]:.3e})")
    gap = mags[1]
    if gap < ZERO_MODE_TOL * scale:
        raise NumericalError(
            f"non-unique steady state: second-smallest |λ| = {gap:.3e} is below "
            f"{ZERO_MODE_TOL:g} x spectral scale {scale:.3e}")
    n = L.matrix.shape[0]
    shift = 1e-3 * gap
    a = L.matrix + shift * np.eye(n)
    x = vec(np.eye(L.dim) / L.dim)
    tol = 1e-12 * np.linalg.norm(L.matrix, 2)
    for _ in range(60):
        y = np.linalg.solve(a, x)
        x = y / np.linalg.norm(y)
        if np.linalg.norm(L.matrix @ x) <= tol:
            break
    rho = unvec(x, L.dim)
    tr = np.trace(rho)
    if abs(tr) < 1e-14:
        raise NumericalError("null vector of the Liouvillian is traceless")
    rho = rho / tr
    try:
        return DensityMatrix.from_matrix(L.space, rho)
    except InvariantError as exc:
        raise NumericalError(f"steady state failed density-matrix checks: {exc}") from exc


def evolve(L: Liouvillian, rho0: DensityMatrix, times: Sequence[float]) -> list[DensityMatrix]:
    """``rho(t) = exp(L t) rho0`` at each requested time."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise InvariantError("times must be a one-dimensional grid")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise InvariantError("times must be sorted and nonnegative")
    if rho0.space != L.space:
        raise InvariantError("initial state and Liouvillian live on different spaces")
    v0 = vec(rho0.matrix)
    out = []
    for t in times:
        if t == 0.0:
            out.append(rho0)
            continue
        m = unvec(L.propagator(t) @ v0, L.dim)
        try:
            out.append(DensityMatrix(L.space, m))
        except InvariantError as exc:
            raise NumericalError(f"evolved state at t={t:g} is not a density matrix: {exc}") from exc
    return out


def eigenmodes(L: Liouvillian) -> list[EigenMode]:
    """All ``d^2`` eigenmodes sorted by halfwidth, then position."""
    lam = _eigvals(L)
    if lam.real.max() > 1e-8 * max(1.0, np.abs(lam).max()):
        raise NumericalError(f"Liouvillian has a growing mode: max Re λ = {lam.real.max():.3e}")
    modes = [EigenMode(complex(z)) for z in lam]
    return sorted(modes, key=lambda m: (m.halfwidth, m.position))


def mollow_modes(modes: Sequence[EigenMode], omega_D: float) -> MollowTriplet:
    """The three narrowest lines near ``0`` and ``+-omega_D``, and the next-narrowest width."""
    if not omega_D > 0:
        raise InvariantError(f"Mollow analysis needs omega_D > 0, got {omega_D}")
    scale = max(abs(m.eigenvalue) for m in modes) or 1.0
    live = [m for m in modes if abs(m.eigenvalue) >= ZERO_MODE_TOL * scale]
    live.sort(key=lambda m: (m.halfwidth, m.position))
    win = 0.5 * omega_D

    def pick(target):
        for m in live:
            if abs(m.position - target) < win:
                return m
        raise NumericalError(f"triplet not resolved: no mode within {win:g} of position {target:g}")

    center, upper, lower = pick(0.0), pick(omega_D), pick(-omega_D)
    chosen = {id(center), id(upper), id(lower)}
    rest = [m for m in live if id(m) not in chosen]
    return MollowTriplet(center, (lower, upper), rest[0].halfwidth if rest else None)
