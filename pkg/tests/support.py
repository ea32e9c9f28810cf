"""Shared numerical oracles for the test suite."""
import math

import numpy as np

from sqbath.correlations import CorrelationSeries, correlation_fourier, two_time_correlation


def min_halfwidth(L) -> float:
    lam = np.linalg.eigvals(L.matrix)
    lam = lam[np.argsort(np.abs(lam))[1:]]
    return float(-lam.real.max())


def tau_grid(L, omegas, tau_halfwidths=30.0, phase_step=0.1) -> np.ndarray:
    """``[0, 30 / narrowest halfwidth]`` with an odd point count and ``w_max dtau <= phase_step``."""
    t_max = tau_halfwidths / min_halfwidth(L)
    w_max = max(np.abs(omegas).max(), 1.0 / t_max)
    n = 2 * math.ceil(t_max * w_max / phase_step) + 1
    return np.linspace(0.0, t_max, n)


def ft_spectrum(L, A, B, rho, omegas, order) -> np.ndarray:
    series = two_time_correlation(L, A, B, rho, tau_grid(L, omegas), order=order)
    return correlation_fourier(series, omegas, extrapolate=True)


def ft_of_series(series: CorrelationSeries, omegas) -> np.ndarray:
    return correlation_fourier(series, omegas, extrapolate=True)


def max_rel_error(a, b) -> float:
    return float(np.max(np.abs(a - b) / np.abs(b)))
