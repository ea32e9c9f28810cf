"""Stationary two-time correlations and the spectra built from them.

Fourier convention: ``S(w) = 2 Re int_0^inf exp(i w tau) C(tau) dtau``, evaluated
with the coherent part ``lim C(tau)`` removed and reported separately. With this
convention a mode ``lambda`` of the Liouvillian contributes a line centred at
``Im(lambda)`` with half width ``-Re(lambda)``.

Operator ordering follows the regression theorem::

    order="AB":  C(tau) = <A(tau) B(0)> = Tr[A exp(L tau)(B rho)]
    order="BA":  C(tau) = <B(0) A(tau)> = Tr[A exp(L tau)(rho B)]
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvariantError, NumericalError
from .liouville import Liouvillian, vec
from .models import FourLevelParams
from .operators import DensityMatrix, Operator, basis_operator

STATIONARY_TOL = 1e-8
DEFAULT_POINTS = 2001


@dataclass(frozen=True, eq=False)
class CorrelationSeries:
    taus: np.ndarray
    values: np.ndarray
    coherent: complex = 0.0

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        if taus.ndim != 1 or taus.size == 0 or taus[0] != 0.0 or np.any(np.diff(taus) <= 0):
            raise InvariantError("correlation grid must start at 0 and increase strictly")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))


@dataclass(frozen=True, eq=False)
class Spectrum:
    omegas: np.ndarray
    values: np.ndarray
    coherent: complex = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NumericalError("spectrum contains non-finite values")
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, "values", vals)


def default_grid(omega_D: Optional[float] = None, gamma: float = 1.0,
                 points: int = DEFAULT_POINTS) -> np.ndarray:
    """``points`` frequencies over +-1.5 omega_D (driven) or +-10 gamma (undriven)."""
    half = 1.5 * omega_D if omega_D else 10.0 * gamma
    return np.linspace(-half, half, points)


def _source(L: Liouvillian, B: Operator, rho: DensityMatrix, order: str) -> np.ndarray:
    if order == "AB":
        return B.matrix @ rho.matrix
    if order == "BA":
        return rho.matrix @ B.matrix
    raise InvariantError(f"order must be 'AB' or 'BA', got {order!r}")


def _check_stationary(L: Liouvillian, rho: DensityMatrix):
    if rho.space != L.space:
        raise InvariantError("steady state and Liouvillian live on different spaces")
    res = np.linalg.norm(L.matrix @ vec(rho.matrix))
    if res > STATIONARY_TOL * max(L.scale, 1e-300):
        raise InvariantError(f"rho_ss is not stationary: ||L rho_ss|| = {res:.3e}")


def _readout(A: Operator) -> np.ndarray:
    """Row vector r with ``r @ vec(X) = Tr(A X)``."""
    return vec(A.matrix.T)


def two_time_correlation(L: Liouvillian, A: Operator, B: Operator, rho_ss: DensityMatrix,
                         taus: Sequence[float], order: str = "AB") -> CorrelationSeries:
    """Regression-theorem correlation on ``taus``; the coherent limit is attached."""
    _check_stationary(L, rho_ss)
    taus = np.asarray(taus, dtype=float)
    y = vec(_source(L, B, rho_ss, order))
    r = _readout(A)
    steps = np.diff(taus)
    h = taus[-1] / max(taus.size - 1, 1)
    # arange-style grids carry round-off in the individual steps
    uniform = steps.size > 0 and np.max(np.abs(steps - h)) <= 1e-9 * h
    vals = np.empty(taus.size, complex)
    if uniform:
        # C(k m + j) = (r P^j) (P^(k m) y): ~2 sqrt(n) sequential products instead of n
        step = L.propagator(h)
        m = max(1, int(np.sqrt(taus.size)))
        rows = np.empty((m, r.size), complex)
        rows[0] = r
        for j in range(1, m):
            rows[j] = rows[j - 1] @ step
        big = L.propagator(h * m)
        n_blk = -(-taus.size // m)
        cols = np.empty((r.size, n_blk), complex)
        cols[:, 0] = y
        for k in range(1, n_blk):
            cols[:, k] = big @ cols[:, k - 1]
        vals = (rows @ cols).T.reshape(-1)[:taus.size]
    else:
        for k, t in enumerate(taus):
            vals[k] = r @ (L.propagator(t) @ y) if t > 0 else r @ y
    coherent = complex(np.trace(A.matrix @ rho_ss.matrix) * np.trace(_source(L, B, rho_ss, order)))
    return CorrelationSeries(taus, vals, coherent)


def _resolvent_solve(L: Liouvillian, rho: DensityMatrix, y: np.ndarray, r: np.ndarray,
                     omegas: np.ndarray, workers: int = 1, chunk: int = 32) -> np.ndarray:
    """``2 Re r . x(w)`` with ``x = -(L + i w)^-1 y`` for traceless ``y``.

    The zero mode is shifted away by ``L - |rho><1|``; on traceless vectors the
    result is unchanged and the system is regular at ``w = 0``.
    """
    n = L.matrix.shape[0]
    reg = L.matrix - np.outer(vec(rho.matrix), vec(np.eye(L.dim)).conj())
    eye = np.eye(n)

    def run(ws):
        mats = reg[None, :, :] + 1j * ws[:, None, None] * eye[None, :, :]
        x = -np.linalg.solve(mats, np.broadcast_to(y, (ws.size, n))[..., None])[..., 0]
        return 2.0 * np.real(x @ r)

    chunks = [omegas[i:i + chunk] for i in range(0, omegas.size, chunk)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    return np.concatenate(parts) if parts else np.empty(0)


def spectrum_from_resolvent(L: Liouvillian, A: Operator, B: Operator, rho_ss: DensityMatrix,
                            omegas: Sequence[float], order: str = "AB",
                            workers: int = 1) -> Spectrum:
    """One-sided Fourier transform of the connected correlation by linear solves."""
    _check_stationary(L, rho_ss)
    omegas = np.asarray(omegas, dtype=float)
    src = _source(L, B, rho_ss, order)
    tr_src = np.trace(src)
    y = vec(src - tr_src * rho_ss.matrix)
    coherent = complex(np.trace(A.matrix @ rho_ss.matrix) * tr_src)
    vals = _resolvent_solve(L, rho_ss, y, _readout(A), omegas, workers)
    return Spectrum(omegas, vals, coherent)


def _filon(taus: np.ndarray, c: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    h = np.diff(taus)
    out = np.empty(omegas.size)
    for i, w in enumerate(omegas):
        th = w * h
        small = np.abs(th) < 1e-3
        safe = np.where(small, 1.0, th)
        e = np.exp(1j * safe)
        # beta = int_0^1 s exp(i th s) ds, full = int_0^1 exp(i th s) ds
        beta = np.where(small, 0.5 + 1j * th / 3 - th**2 / 8,
                        e / (1j * safe) + (e - 1) / safe**2)
        full = np.where(small, 1.0 + 1j * th / 2 - th**2 / 6, (e - 1) / (1j * safe))
        alpha = full - beta
        phase = np.exp(1j * w * taus[:-1])
        out[i] = 2.0 * np.real(np.sum(h * phase * (alpha * c[:-1] + beta * c[1:])))
    return out


def correlation_fourier(series: CorrelationSeries, omegas: Sequence[float],
                        extrapolate: bool = False) -> np.ndarray:
    """``2 Re int exp(i w tau) (C - C_coh) dtau`` of the piecewise-linear interpolant.

    Each interval is integrated exactly against the oscillating kernel, so the
    error is of order ``(lambda dtau)^2`` for a mode ``lambda`` of the correlation,
    independent of ``w``. With ``extrapolate`` one Richardson step combines the
    full grid and every second point, ``(4 F_h - F_2h) / 3``, removing the
    leading term; this needs an odd number of points.
    """
    omegas = np.asarray(omegas, dtype=float)
    c = series.values - series.coherent
    out = _filon(series.taus, c, omegas)
    if not extrapolate:
        return out
    if series.taus.size < 5 or series.taus.size % 2 == 0:
        raise InvariantError(f"extrapolation needs an odd number of at least 5 points, got {series.taus.size}")
    return (4.0 * out - _filon(series.taus[::2], c[::2], omegas)) / 3.0


def _ground_sigma(space) -> Operator:
    labels = space.labels
    if "g-" in labels and "g+" in labels:
        return basis_operator(space, "g-", "g+")
    if "g" in labels and "e" in labels:
        return basis_operator(space, "g", "e")
    raise InvariantError(f"cannot identify the two-level transition in labels {labels}")


def fluorescence_spectrum_two_level(L: Liouvillian, rho_ss: DensityMatrix,
                                    omegas: Sequence[float], workers: int = 1) -> Spectrum:
    """Fourier transform of ``<sigma†(0) sigma(tau)>``."""
    s = _ground_sigma(L.space)
    return spectrum_from_resolvent(L, s, s.dag(), rho_ss, omegas, order="BA", workers=workers)


def quadrature_operator(space, p: FourLevelParams) -> Operator:
    """``X = eps+ exp(-i phi_L) sigma + eps- sigma†`` on the ground levels of ``space``."""
    s = _ground_sigma(space)
    return (p.eps_plus * np.exp(-1j * p.phi_L)) * s + p.eps_minus * s.dag()


def fluorescence_spectrum_four_level(L: Liouvillian, p: FourLevelParams, rho_ss: DensityMatrix,
                                     omegas: Sequence[float], workers: int = 1) -> Spectrum:
    """Fourier transform of the ground-state quadrature correlation ``<X†(0) X(tau)>``."""
    x = quadrature_operator(L.space, p)
    return spectrum_from_resolvent(L, x, x.dag(), rho_ss, omegas, order="BA", workers=workers)


def absorption_spectrum(L: Liouvillian, rho_ss: DensityMatrix, omegas: Sequence[float],
                        workers: int = 1) -> Spectrum:
    """Fourier transform of ``<[sigma(tau), sigma†(0)]>``; positive is absorption."""
    _check_stationary(L, rho_ss)
    s = _ground_sigma(L.space)
    sd = s.dag().matrix
    y = vec(sd @ rho_ss.matrix - rho_ss.matrix @ sd)
    vals = _resolvent_solve(L, rho_ss, y, _readout(s), np.asarray(omegas, float), workers)
    return Spectrum(omegas, vals, 0.0)


def absorption_correlation(L: Liouvillian, rho_ss: DensityMatrix,
                           taus: Sequence[float]) -> CorrelationSeries:
    """``<[sigma(tau), sigma†(0)]>`` on ``taus`` (no coherent part by construction)."""
    s = _ground_sigma(L.space)
    a = two_time_correlation(L, s, s.dag(), rho_ss, taus, order="AB")
    b = two_time_correlation(L, s, s.dag(), rho_ss, taus, order="BA")
    return CorrelationSeries(a.taus, a.values - b.values, 0.0)
