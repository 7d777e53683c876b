"""Half-line Fourier transform of correlations and peak extraction."""
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .analytic import spectral_params
from .correlation import default_tau_grid, emf_correlation
from .errors import DiagnosticWarning
from .model import Params
from .series import CorrelationSeries, Spectrum

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-6
DEFAULT_N_OMEGA = 2001
DEFAULT_HALF_WINDOW_IN_G = 4.0


def default_omega_grid(p: Params, n: int = DEFAULT_N_OMEGA, half_width: float = None) -> np.ndarray:
    """``n`` points on ``center +- 4 g``, ``center = -(da + dc + 2 chi) / 2``."""
    center = -0.5 * p.delta_a - 0.5 * (p.delta_c + 2 * p.chi)
    if half_width is None:
        half_width = DEFAULT_HALF_WINDOW_IN_G * p.g
    return np.linspace(center - half_width, center + half_width, n)


def _uniform(x):
    if x.size < 3:
        return True
    d = np.diff(x)
    return bool(np.allclose(d, d[0], rtol=1e-9, atol=0.0))


def _dtft_direct(weights, tau, omega, chunk=64):
    out = np.empty(omega.size, dtype=complex)
    for start in range(0, omega.size, chunk):
        w = omega[start:start + chunk]
        out[start:start + chunk] = np.exp(-1j * np.outer(w, tau)) @ weights
    return out


def _dtft_chirp(weights, h, omega):
    # sum_n x_n exp(-i (w0 + k dw) n h) as a chirp-z transform
    w0 = omega[0]
    dw = omega[1] - omega[0] if omega.size > 1 else 0.0
    return scipy.signal.czt(weights, m=omega.size, w=np.exp(-1j * dw * h), a=np.exp(1j * w0 * h))


def half_line_fourier(corr: CorrelationSeries, omega_grid, decay_rate: float = None) -> Spectrum:
    """``S(w) = (1/pi) Re int_0^T dtau exp(-i w tau) corr(tau)`` by the trapezoidal rule.

    Parameters
    ----------
    corr : CorrelationSeries
        Samples starting at ``tau = 0``.
    omega_grid : array_like
        Strictly ascending frequencies.
    decay_rate : float, optional
        Slowest decay rate of ``corr``. When given, the tail criterion is
        ``exp(-decay_rate * T) < 1e-6``; otherwise the sampled ratio is used,
        which also counts a stationary offset ``<V>^2`` as undecayed.

    Returns
    -------
    Spectrum
        ``meta`` records the sampled tail ratio ``|corr(T)| / max|corr|``
        and, if available, the exponential tail bound. A
        :class:`DiagnosticWarning` is issued when the criterion fails.
    """
    tau = corr.tau
    omega = np.asarray(omega_grid, dtype=float)
    if tau[0] != 0.0:
        raise ValueError("correlation must start at tau = 0")
    values = corr.values
    if tau.size == 1:
        return Spectrum(omega, np.zeros_like(omega), {"t_max": 0.0})

    steps = np.diff(tau)
    w = np.empty_like(tau)
    w[0] = 0.5 * steps[0]
    w[-1] = 0.5 * steps[-1]
    w[1:-1] = 0.5 * (steps[:-1] + steps[1:])

    if _uniform(tau) and _uniform(omega):
        raw = steps[0] * _dtft_chirp(values * (w / steps[0]), steps[0], omega)
    else:
        raw = _dtft_direct(values * w, tau, omega)

    peak = np.max(np.abs(values))
    tail_n = max(1, tau.size // 100)
    tail = float(np.max(np.abs(values[-tail_n:])) / peak) if peak > 0 else 0.0
    meta = {"t_max": float(tau[-1]), "dt": float(steps[0]), "tail_ratio": tail}
    problems = []
    if decay_rate is not None:
        bound = float(np.exp(-decay_rate * tau[-1]))
        meta["tail_bound"] = bound
        if bound > TAIL_TOL:
            problems.append(f"exp(-Gamma T) = {bound:.3g}")
    elif tail > TAIL_TOL:
        problems.append(f"sampled tail ratio {tail:.3g}")
    if problems:
        warnings.warn("correlation not decayed by end of grid: " + ", ".join(problems),
                      DiagnosticWarning, stacklevel=2)
    return Spectrum(omega, raw.real / np.pi, meta)


def numeric_spectrum(p: Params, omega_grid=None, tau_grid=None, L=None, rho_ss=None) -> Spectrum:
    """Full numerical pipeline: steady state, regression, half-line transform."""
    if omega_grid is None:
        omega_grid = default_omega_grid(p)
    if tau_grid is None:
        tau_grid = default_tau_grid(p)
    corr = emf_correlation(p, tau_grid, L=L, rho_ss=rho_ss)
    s = half_line_fourier(corr, omega_grid, decay_rate=spectral_params(p).gamma_min)
    s.meta["source"] = "numeric"
    return s


@dataclass(frozen=True)
class Peak:
    center: float
    height: float
    half_width: float


@dataclass(frozen=True)
class PeakSet:
    peaks: tuple = field(default_factory=tuple)

    @property
    def centers(self):
        return np.array([pk.center for pk in self.peaks])

    @property
    def splitting(self):
        """``|center_1 - center_2|`` if there are exactly two peaks, else None."""
        if len(self.peaks) != 2:
            return None
        return abs(self.peaks[0].center - self.peaks[1].center)


def _parabola_vertex(x, y):
    x0, x1, x2 = x
    y0, y1, y2 = y
    d0, d2 = x0 - x1, x2 - x1
    # fit y = y1 + b (x - x1) + c (x - x1)^2 through the three points
    denom = d0 * d2 * (d0 - d2)
    c = ((y0 - y1) * d2 - (y2 - y1) * d0) / denom
    b = ((y2 - y1) * d0 * d0 - (y0 - y1) * d2 * d2) / denom
    if c >= 0:
        return x1, y1
    shift = -b / (2 * c)
    return x1 + shift, y1 + b * shift + c * shift * shift


def _crossing(x, y, i, level, direction):
    j = i
    while 0 <= j + direction < len(y) and y[j + direction] > level:
        j += direction
    k = j + direction
    if not 0 <= k < len(y):
        return None
    return x[j] + (level - y[j]) * (x[k] - x[j]) / (y[k] - y[j])


def find_peaks(s: Spectrum, rel_prominence: float = 0.05) -> PeakSet:
    """Local maxima with prominence above ``rel_prominence * max(S)``.

    Centers and heights come from a parabola through the three samples
    around each maximum; half-widths from linearly interpolated
    half-maximum crossings (NaN if a crossing lies outside the grid).
    Any number of peaks is returned; the caller decides what to do with it.
    """
    x, y = s.omega, s.values
    top = np.max(y)
    if not top > 0:
        return PeakSet(())
    idx, _ = scipy.signal.find_peaks(y, prominence=rel_prominence * top)
    peaks = []
    for i in idx:
        center, height = _parabola_vertex(x[i - 1:i + 2], y[i - 1:i + 2])
        level = 0.5 * height
        left = _crossing(x, y, i, level, -1)
        right = _crossing(x, y, i, level, +1)
        hw = 0.5 * (right - left) if left is not None and right is not None else float("nan")
        peaks.append(Peak(float(center), float(height), float(hw)))
    if len(peaks) != 2:
        logger.info("find_peaks located %d peaks", len(peaks))
    return PeakSet(tuple(peaks))
