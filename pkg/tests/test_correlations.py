import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sqbath.analytics import mollow_linewidths
from sqbath.correlations import (CorrelationSeries, absorption_correlation, absorption_spectrum,
                                 correlation_fourier, default_grid, fluorescence_spectrum_four_level,
                                 fluorescence_spectrum_two_level, quadrature_operator,
                                 spectrum_from_resolvent, two_time_correlation)
from sqbath.errors import InvariantError
from sqbath.experiments import eigenscan_point, fit_center_halfwidth
from sqbath.liouville import build_liouvillian, eigenmodes, mollow_modes, steady_state
from sqbath.models import (AdiabaticValidityWarning, DriveParams, FourLevelParams, SqueezedBathParams,
                           effective_ground_master, map_parameters, squeezed_bath_master)
from sqbath.operators import DensityMatrix, basis_operator

from support import ft_of_series, ft_spectrum, max_rel_error, tau_grid


def two_level(p, drive=None):
    L = build_liouvillian(squeezed_bath_master(p, drive))
    return L, steady_state(L)


def effective(p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticValidityWarning)
        L = build_liouvillian(effective_ground_master(p))
    return L, steady_state(L)


def test_tau_zero_is_equal_time_expectation():
    L, rho = two_level(SqueezedBathParams.maximal(0.7, 0.4), DriveParams(2.0, 0.3))
    s = basis_operator(L.space, "g", "e")
    c = two_time_correlation(L, s, s.dag(), rho, [0.0, 0.5], order="BA")
    assert c.values[0] == pytest.approx(np.trace(s.dag().matrix @ s.matrix @ rho.matrix), abs=1e-14)
    c = two_time_correlation(L, s, s.dag(), rho, [0.0], order="AB")
    assert c.values[0] == pytest.approx(np.trace(s.matrix @ s.dag().matrix @ rho.matrix), abs=1e-14)


def test_identity_correlation_is_constant():
    L, rho = two_level(SqueezedBathParams.maximal(1.0), DriveParams(3.0))
    one = L.space.identity()
    c = two_time_correlation(L, one, one, rho, np.linspace(0, 5, 11))
    assert np.allclose(c.values, 1.0, atol=1e-12)
    assert c.coherent == pytest.approx(1.0)


def test_vacuum_ground_state_has_no_emission():
    L, rho = two_level(SqueezedBathParams(0.0, 0.0))
    s = basis_operator(L.space, "g", "e")
    c = two_time_correlation(L, s, s.dag(), rho, np.linspace(0, 3, 7), order="BA")
    assert np.allclose(c.values, 0.0, atol=1e-12)


def test_uniform_and_pointwise_paths_agree():
    L, rho = two_level(SqueezedBathParams.maximal(0.3, 1.0), DriveParams(4.0, 0.2))
    s = basis_operator(L.space, "g", "e")
    uni = two_time_correlation(L, s, s.dag(), rho, np.linspace(0, 6, 301), order="BA")
    ragged = np.linspace(0, 6, 301) ** 1.0001 * 6 / 6 ** 1.0001
    rag = two_time_correlation(L, s, s.dag(), rho, ragged, order="BA")
    ref = [np.trace(s.matrix @ (L.propagator(t) @ (rho.matrix @ s.dag().matrix).reshape(-1, order="F")
                                ).reshape(2, 2, order="F")) for t in (0.0, 3.0, 6.0)]
    assert np.allclose(uni.values[[0, 150, 300]], ref, atol=1e-12)
    assert np.allclose(rag.values[[0, -1]], ref[::2], atol=1e-12)


def test_requires_stationary_state():
    L, rho = two_level(SqueezedBathParams.maximal(1.0), DriveParams(1.0))
    s = basis_operator(L.space, "g", "e")
    with pytest.raises(InvariantError, match="stationary"):
        two_time_correlation(L, s, s.dag(), DensityMatrix.basis_state(L.space, "e"), [0.0, 1.0])
    with pytest.raises(InvariantError):
        spectrum_from_resolvent(L, s, s.dag(), rho, [0.0], order="XY")


def test_series_grid_validation():
    with pytest.raises(InvariantError):
        CorrelationSeries(np.array([0.1, 0.2]), np.zeros(2))
    with pytest.raises(InvariantError):
        correlation_fourier(CorrelationSeries(np.linspace(0, 1, 4), np.zeros(4)), [0.0], extrapolate=True)


def test_undriven_absorption_is_lorentzian():
    # <sigma(tau) sigma†(0)> of a ground-state atom decays at gamma/2
    L, rho = two_level(SqueezedBathParams(0.0, 0.0, gamma=1.3))
    s = basis_operator(L.space, "g", "e")
    w = default_grid(gamma=1.3)
    spec = spectrum_from_resolvent(L, s, s.dag(), rho, w, order="AB")
    g2 = 0.65
    assert np.allclose(spec.values, 2 * g2 / (g2**2 + w**2), rtol=1e-10)
    assert np.allclose(absorption_spectrum(L, rho, w).values, spec.values, rtol=1e-10)
    half = spec.values.max() / 2
    above = w[spec.values >= half]
    assert above.max() == pytest.approx(g2, abs=w[1] - w[0])


@pytest.mark.parametrize("p,drive", [
    (SqueezedBathParams.maximal(1.0), DriveParams(5.0)),
    (SqueezedBathParams.maximal(0.4, math.pi), DriveParams(3.0, 0.7)),
    (SqueezedBathParams(0.5, 0.2, 1.0), None),
])
def test_resolvent_matches_fourier_transform_of_correlation(p, drive):
    L, rho = two_level(p, drive)
    s = basis_operator(L.space, "g", "e")
    w = default_grid(drive.omega_D if drive else None, p.gamma, 401)
    res = fluorescence_spectrum_two_level(L, rho, w).values
    assert max_rel_error(ft_spectrum(L, s, s.dag(), rho, w, "BA"), res) < 1e-2
    absorb = absorption_spectrum(L, rho, w).values
    series = absorption_correlation(L, rho, tau_grid(L, w))
    assert max_rel_error(ft_of_series(series, w), absorb) < 1e-2


@given(st.floats(0, 3), st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(0, 10), st.floats(0, 2 * math.pi))
@settings(max_examples=25)
def test_fluorescence_nonnegative(N, frac, phi, om, phi_d):
    p = SqueezedBathParams(N, frac * math.sqrt(N * (N + 1)), phi)
    L, rho = two_level(p, DriveParams(om, phi_d))
    spec = fluorescence_spectrum_two_level(L, rho, default_grid(om or None, 1.0, 301))
    assert spec.values.min() >= -1e-8 * spec.values.max()


def test_vacuum_strong_drive_standard_mollow():
    L, rho = two_level(SqueezedBathParams(0.0, 0.0), DriveParams(50.0))
    t = mollow_modes(eigenmodes(L), 50.0)
    assert t.halfwidths == pytest.approx((0.5, 0.75, 0.75), rel=1e-3)


@pytest.mark.parametrize("phi", [0.0, math.pi])
def test_two_level_center_width_from_fit(phi):
    p = SqueezedBathParams.maximal(1.0, phi)
    L, rho = two_level(p, DriveParams(50.0))
    c, _ = mollow_linewidths(p)
    w = np.linspace(-4 * c, 4 * c, 801)
    spec = fluorescence_spectrum_two_level(L, rho, w)
    assert fit_center_halfwidth(w, spec.values, c) == pytest.approx(c, rel=1e-2)


def test_two_level_phase_changes_intensity_not_positions():
    out = []
    for phi in (0.0, math.pi):
        L, rho = two_level(SqueezedBathParams.maximal(1.0, phi), DriveParams(50.0))
        t = mollow_modes(eigenmodes(L), 50.0)
        spec = fluorescence_spectrum_two_level(L, rho, [0.0])
        out.append((t.positions, spec.values[0]))
    # both within the strong-drive splitting correction of order gamma^2 / omega_D
    assert out[0][0] == pytest.approx(out[1][0], abs=1e-3 * 50)
    assert abs(out[0][1] / out[1][1] - 1) > 0.1


def test_four_level_without_eps_minus_is_scaled_two_level():
    p = FourLevelParams(0.01, 1.0, 0.0, drive=DriveParams(3e-4))
    L, rho = effective(p)
    w = np.linspace(-5e-4, 5e-4, 101)
    four = fluorescence_spectrum_four_level(L, p, rho, w)
    two = fluorescence_spectrum_two_level(L, rho, w)
    assert np.allclose(four.values, two.values, rtol=1e-10, atol=0)


def test_quadrature_operator_form():
    p = FourLevelParams(0.01, 0.8, 0.6, phi_L=0.4)
    L, _ = effective(p)
    s = basis_operator(L.space, "g-", "g+")
    x = quadrature_operator(L.space, p)
    assert np.allclose(x.matrix, 0.8 * np.exp(-0.4j) * s.matrix + 0.6 * s.dag().matrix)


def squeezed_point(phi, g_l=1.0, om_over_gamma=7.1, N=0.2):
    p = FourLevelParams.from_squeezed(N, 7.1e-5, phi=phi, g_l=g_l)
    gamma = map_parameters(p).gamma
    return FourLevelParams.from_squeezed(N, 7.1e-5, phi=phi, g_l=g_l,
                                         drive=DriveParams(om_over_gamma * gamma)), gamma


def test_fluorescence_center_narrower_at_zero_phase():
    widths = []
    for phi in (0.0, math.pi):
        p, gamma = squeezed_point(phi)
        L, rho = effective(p)
        c = mollow_modes(eigenmodes(L), p.drive.omega_D).center.halfwidth
        w = np.linspace(-6 * c, 6 * c, 1201)
        spec = fluorescence_spectrum_four_level(L, p, rho, w)
        widths.append(fit_center_halfwidth(w, spec.values, c))
    assert widths[0] < widths[1]


def test_four_level_widths_with_cross_decay():
    g_l = math.sqrt(1 / 3)
    for phi in (0.0, math.pi):
        p, gamma = squeezed_point(phi, g_l, om_over_gamma=50.0, N=1.0)
        L, rho = effective(p)
        c, s = mollow_linewidths(map_parameters(p), phi, g_l)
        t = mollow_modes(eigenmodes(L), p.drive.omega_D)
        assert t.halfwidths == pytest.approx((c, s, s), rel=1e-2)
        w = np.linspace(-4 * c, 4 * c, 801)
        spec = fluorescence_spectrum_four_level(L, p, rho, w)
        assert fit_center_halfwidth(w, spec.values, c) == pytest.approx(c, rel=1e-2)


@pytest.mark.parametrize("x", [0.01, 0.02, 0.05])
def test_full_and_effective_widths_agree(x):
    r = eigenscan_point(0.2, x, 7.1)
    assert r["full"]["halfwidths"] == pytest.approx(r["effective"]["halfwidths"], rel=1e-2)
    assert r["full"]["positions"][0] == pytest.approx(r["effective"]["positions"][0], abs=1e-6 * 7.1)


def test_sideband_shift_is_second_order_in_pump():
    pts = [eigenscan_point(0.2, x, 7.1) for x in (0.01, 0.02, 0.04)]
    shifts = [abs(r["full"]["positions"][2] - r["effective"]["positions"][2]) for r in pts]
    slope = np.polyfit(np.log([0.01, 0.02, 0.04]), np.log(shifts), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.05)


@pytest.mark.xfail(strict=True, reason="sideband positions of the full model shift by ~1.35 (Omega/Gamma)^2 omega_D")
@pytest.mark.parametrize("x", [0.01, 0.05])
def test_full_and_effective_sideband_positions_to_1e6(x):
    r = eigenscan_point(0.2, x, 7.1)
    assert r["full"]["positions"] == pytest.approx(r["effective"]["positions"], abs=1e-6 * 7.1)


def test_absorption_signs_with_moderate_drive():
    vals = {}
    for phi in (0.0, math.pi):
        p = FourLevelParams.from_squeezed(1.0, 1e-4 / 3, phi=phi)
        gamma = map_parameters(p).gamma
        p = FourLevelParams.from_squeezed(1.0, 1e-4 / 3, phi=phi, drive=DriveParams(7.1 * gamma))
        L, rho = effective(p)
        w = default_grid(p.drive.omega_D)
        vals[phi] = (w / gamma, absorption_spectrum(L, rho, w).values)
    w, a = vals[0.0]
    mid = (np.abs(w) > 0.5) & (np.abs(w) < 6.0)
    assert a[np.argmin(np.abs(w))] > 0 and a[mid].min() < 0
    w, a = vals[math.pi]
    assert a[np.argmin(np.abs(w))] < 0


@given(st.floats(0, 3), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0.5, 8))
@settings(max_examples=20)
def test_unsqueezed_absorption_ignores_drive_phase(N, phi, phi_d, om):
    w = np.linspace(-2 * om, 2 * om, 41)
    ref = absorption_spectrum(*two_level(SqueezedBathParams(N, 0.0, phi), DriveParams(om)), w).values
    rot = absorption_spectrum(*two_level(SqueezedBathParams(N, 0.0, phi), DriveParams(om, phi_d)), w).values
    assert np.allclose(rot, ref, atol=1e-8 * np.abs(ref).max(), rtol=0)


@given(st.floats(0, 3), st.floats(0, 1), st.floats(0, 6))
@settings(max_examples=20)
def test_correlation_bounded_by_equal_time_value(N, frac, om):
    p = SqueezedBathParams(N, frac * math.sqrt(N * (N + 1)))
    L, rho = two_level(p, DriveParams(om))
    s = basis_operator(L.space, "g", "e")
    c = two_time_correlation(L, s, s.dag(), rho, np.linspace(0, 10, 201), order="BA")
    assert np.all(np.abs(c.values) <= abs(c.values[0]) * (1 + 1e-6))
