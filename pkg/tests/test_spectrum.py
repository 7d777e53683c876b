import numpy as np
import pytest

from nanorabi import (CorrelationSeries, DiagnosticWarning, Spectrum, analytic_spectrum,
                      default_omega_grid, emf_correlation, find_peaks, half_line_fourier,
                      numeric_spectrum, spectral_params, splitting)
from nanorabi.spectrum import _dtft_direct

from conftest import reference_params


def lorentzian_corr(gamma, omega0, dt, t_max):
    tau = np.arange(0, t_max + dt / 2, dt)
    return CorrelationSeries(tau, np.exp(-gamma * tau - 1j * omega0 * tau))


def lorentzian(omega, center, gamma, weight=1.0):
    return weight * gamma / np.pi / ((omega - center) ** 2 + gamma ** 2)


def test_synthetic_exponential_gives_lorentzian():
    gamma, w0 = 0.05, 1.0
    corr = lorentzian_corr(gamma, w0, 0.01, 14 / gamma)
    omega = np.linspace(-3, 1, 2001)
    s = half_line_fourier(corr, omega, decay_rate=gamma)
    # the correlation exp(-i w0 tau) peaks at omega = -w0 under exp(-i omega tau)
    expected = lorentzian(omega, -w0, gamma)
    assert np.max(np.abs(s.values - expected)) / np.max(expected) < 1e-6
    peak = s.values[np.argmin(np.abs(omega + w0))]
    assert peak == pytest.approx(1 / (np.pi * gamma), rel=1e-6)
    assert s.meta["tail_bound"] < 1e-6


def test_zero_correlation_gives_zero_spectrum():
    tau = np.arange(0, 10, 0.1)
    s = half_line_fourier(CorrelationSeries(tau, np.zeros_like(tau)), np.linspace(-1, 1, 11))
    assert np.array_equal(s.values, np.zeros(11))


def test_linearity():
    a = lorentzian_corr(0.05, 1.0, 0.02, 300)
    b = lorentzian_corr(0.08, -0.5, 0.02, 300)
    omega = np.linspace(-2, 2, 401)
    lhs = half_line_fourier(2.5 * a + b, omega).values
    rhs = 2.5 * half_line_fourier(a, omega).values + half_line_fourier(b, omega).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))


def test_chirp_and_direct_sums_agree():
    corr = lorentzian_corr(0.01, 1.2, 0.05, 1400)
    omega = np.linspace(-1.5, -0.9, 301)
    fast = half_line_fourier(corr, omega).values
    w = np.full(corr.tau.size, 0.05)
    w[[0, -1]] = 0.025
    slow = _dtft_direct(corr.values * w, corr.tau, omega).real / np.pi
    assert np.max(np.abs(fast - slow)) < 1e-9 * np.max(np.abs(slow))
    # a non-uniform frequency grid takes the direct path
    omega2 = np.sort(np.concatenate([omega[::3], [-1.2001]]))
    s2 = half_line_fourier(corr, omega2).values
    ref = _dtft_direct(corr.values * w, corr.tau, omega2).real / np.pi
    assert np.allclose(s2, ref, rtol=1e-12, atol=0)


def test_undecayed_correlation_warns():
    corr = lorentzian_corr(0.001, 1.0, 0.1, 100)
    with pytest.warns(DiagnosticWarning, match="not decayed"):
        s = half_line_fourier(corr, np.linspace(-2, 0, 11), decay_rate=0.001)
    assert s.meta["tail_bound"] > 1e-6


def test_numeric_matches_analytic_without_drive():
    p = reference_params()
    omega = np.linspace(-1.6, -0.4, 1201)
    num = numeric_spectrum(p, omega)
    ana = analytic_spectrum(p, omega)
    # analytic formula omits the 1/pi of the half-line transform
    rel = np.max(np.abs(np.pi * num.values - ana.values) / ana.values)
    assert rel < 0.01


def test_sampling_density_convergence():
    p = reference_params(xi=0.02, chi=0.01, n_fock=4)
    omega = default_omega_grid(p)
    coarse = numeric_spectrum(p, omega).values
    tau = np.arange(0, 14 / spectral_params(p).gamma_min + 0.0125, 0.025)
    fine = numeric_spectrum(p, omega, tau).values
    assert np.max(np.abs(fine - coarse)) / np.max(fine) < 1e-6


def test_default_omega_grid():
    p = reference_params(chi=0.02)
    omega = default_omega_grid(p)
    assert omega.size == 2001
    assert omega[1000] == pytest.approx(-1.02, abs=1e-15)
    assert omega[-1] - omega[0] == pytest.approx(8 * p.g)


def test_find_peaks_two_lorentzians():
    omega = np.linspace(-1.5, -0.5, 2001)
    s = Spectrum(omega, lorentzian(omega, -1.2, 0.003) + lorentzian(omega, -0.8, 0.003, 0.9))
    peaks = find_peaks(s)
    assert len(peaks.peaks) == 2
    assert np.allclose(peaks.centers, [-1.2, -0.8], atol=1e-4)
    assert peaks.splitting == pytest.approx(0.4, abs=1e-4)
    assert all(pk.half_width == pytest.approx(0.003, rel=0.05) for pk in peaks.peaks)


def test_find_peaks_single_lorentzian():
    omega = np.linspace(-1, 1, 1001)
    peaks = find_peaks(Spectrum(omega, lorentzian(omega, 0.1234, 0.01)))
    assert len(peaks.peaks) == 1
    assert peaks.splitting is None
    assert peaks.peaks[0].center == pytest.approx(0.1234, abs=1e-4)


def test_find_peaks_ignores_small_bumps():
    omega = np.linspace(-1, 1, 1001)
    y = lorentzian(omega, 0.0, 0.01) + lorentzian(omega, 0.5, 0.01, 0.01)
    assert len(find_peaks(Spectrum(omega, y)).peaks) == 1
    assert len(find_peaks(Spectrum(omega, y), rel_prominence=0.001).peaks) == 2


def test_find_peaks_on_analytic_spectrum():
    p = reference_params()
    peaks = find_peaks(analytic_spectrum(p, default_omega_grid(p)))
    assert abs(peaks.splitting - splitting(p)) < 1e-3


def test_find_peaks_scale_invariant():
    omega = np.linspace(-1.5, -0.5, 2001)
    s = Spectrum(omega, lorentzian(omega, -1.2, 0.003) + lorentzian(omega, -0.8, 0.004, 0.7))
    base = find_peaks(s)
    exact = find_peaks(s.scaled(8.0))
    assert np.array_equal(exact.centers, base.centers)
    assert [pk.half_width for pk in exact.peaks] == [pk.half_width for pk in base.peaks]
    assert [pk.height for pk in exact.peaks] == [8.0 * pk.height for pk in base.peaks]
    other = find_peaks(s.scaled(3.7))
    assert np.allclose(other.centers, base.centers, rtol=0, atol=1e-12)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        Spectrum([0.0, 1.0], [1.0])
