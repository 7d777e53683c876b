"""Closed-form weak-driving results for the correlation spectrum.

In the one-excitation sector the coherences ``x = rho_00,01`` and
``y = rho_00,10`` obey, to first order in the drive,

    dx/dt = [i (dc + 2 chi) - kappa] x + i g y - i xi
    dy/dt = (i da - gamma/2) y + i g x

whose propagator has eigenvalues ``-Gamma_n - i omega_n`` (n = 1, 2).
Everything here is scalar arithmetic on :class:`~nanorabi.model.Params`
plus one ODE integration used as an independent check.
"""
import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateParametersError
from .model import Params
from .series import Spectrum

DEGENERATE_G = 1e-12


@dataclass(frozen=True)
class SpectralParams:
    big_g: complex
    gamma_1: float
    gamma_2: float
    omega_1: float
    omega_2: float

    @property
    def gammas(self):
        return np.array([self.gamma_1, self.gamma_2])

    @property
    def omegas(self):
        return np.array([self.omega_1, self.omega_2])

    @property
    def gamma_min(self) -> float:
        return min(self.gamma_1, self.gamma_2)


def big_g(p: Params) -> complex:
    """``G = sqrt(g^2 - [i (delta + 2 chi) + (gamma/2 - kappa)]^2 / 4)``, principal branch."""
    bracket = complex(p.gamma / 2 - p.kappa, p.delta + 2 * p.chi)
    G = cmath.sqrt(p.g ** 2 - 0.25 * bracket ** 2)
    if G.real == 0.0 and G.imag < 0.0:
        G = -G
    return G


def spectral_params(p: Params) -> SpectralParams:
    G = big_g(p)
    half_width = 0.5 * (p.gamma / 2 + p.kappa)
    center = -0.5 * p.delta_a - 0.5 * (p.delta_c + 2 * p.chi)
    return SpectralParams(
        big_g=G,
        gamma_1=half_width - G.imag,
        gamma_2=half_width + G.imag,
        omega_1=G.real + center,
        omega_2=-G.real + center,
    )


def _require_nondegenerate(G):
    if abs(G) <= DEGENERATE_G:
        raise DegenerateParametersError(
            f"|G| = {abs(G):.3g} at critical coupling; closed forms are singular")


def _branch_data(p, sp=None):
    sp = sp or spectral_params(p)
    G = sp.big_g
    _require_nondegenerate(G)
    rates = sp.gammas + 1j * sp.omegas
    # numerators of the two exponential branches of mu
    num = rates + (1j * p.delta_a - p.gamma / 2)
    return G, rates, num


def mu_nu_c(p: Params, tau):
    """Time-dependent coefficients ``mu``, ``nu`` and ``C`` at ``tau`` (scalar or array).

    ``rho_00,01(tau) = mu rho_00,01(0) + nu rho_00,10(0) - i xi C rho_00,00``.
    """
    G, rates, num = _branch_data(p)
    tau = np.asarray(tau, dtype=float)
    e1 = np.exp(-rates[0] * tau)
    e2 = np.exp(-rates[1] * tau)
    mu = num[0] / (2j * G) * e1 + num[1] / (-2j * G) * e2
    nu = p.g / (-2 * G) * e1 + p.g / (2 * G) * e2
    c = (num[0] / rates[0] * (1 - e1) - num[1] / rates[1] * (1 - e2)) / (2j * G)
    return mu, nu, c


def first_order_system(p: Params):
    """Coefficient matrix and drive vector of the first-order coherence equations."""
    A = np.array([[1j * (p.delta_c + 2 * p.chi) - p.kappa, 1j * p.g],
                  [1j * p.g, 1j * p.delta_a - p.gamma / 2]])
    b = np.array([-1j * p.xi, 0.0])
    return A, b


def steady_elements(p: Params):
    """Weak-driving steady coherences ``(rho_00,01, rho_00,10)``."""
    qubit = complex(p.delta_a, p.gamma / 2)
    denom = complex(p.delta_c + 2 * p.chi, p.kappa) - p.g ** 2 / qubit
    if abs(denom) < 1e-14:
        raise DegenerateParametersError("steady-state denominator vanishes")
    r01 = p.xi / denom
    r10 = -p.g * r01 / qubit
    return r01, r10


def solve_first_order(p: Params, tau_grid, initial=None, rtol=1e-12, atol=1e-14):
    """Integrate the first-order coherence equations numerically.

    ``rho_00,00`` is frozen at 1. Starts from the weak-driving steady values
    unless ``initial = (x0, y0)`` is given. Returns two complex arrays.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau grid must be a non-empty strictly ascending sequence")
    A, b = first_order_system(p)
    y0 = np.array(steady_elements(p) if initial is None else initial, dtype=complex)
    if tau.size == 1:
        return np.array([y0[0]]), np.array([y0[1]])
    sol = solve_ivp(lambda t, y: A @ y + b, (tau[0], tau[-1]), y0, method="DOP853",
                    t_eval=tau, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return sol.y[0], sol.y[1]


ELEMENTS = ("00,00", "00,01", "00,10", "01,01", "01,10", "10,10")


def density_element_rhs(p: Params, y) -> np.ndarray:
    """Right-hand side of the six density-matrix element equations.

    ``y`` holds ``rho_{00,00}, rho_{00,01}, rho_{00,10}, rho_{01,01},
    rho_{01,10}, rho_{10,10}`` (see :data:`ELEMENTS`); the remaining
    one-excitation elements follow by Hermiticity. Exact for ``xi = 0``.
    """
    r0000, r0001, r0010, r0101, r0110, r1010 = y
    r0100 = np.conj(r0001)
    r1001 = np.conj(r0110)
    g, xi, k, gm = p.g, p.xi, p.kappa, p.gamma
    return np.array([
        1j * xi * r0100 - 1j * xi * r0001 + 2 * k * r0101 + gm * r1010,
        (1j * (p.delta_c + 2 * p.chi) - k) * r0001 + 1j * g * r0010 + 1j * xi * (r0101 - r0000),
        (1j * p.delta_a - gm / 2) * r0010 + 1j * g * r0001 + 1j * xi * r0110,
        -2 * k * r0101 + 1j * g * (r0110 - r1001) + 1j * xi * (r0001 - r0100),
        (-1j * (p.delta + 2 * p.chi) - k - gm / 2) * r0110 + 1j * g * (r0101 - r1010)
        + 1j * xi * r0010,
        -gm * r1010 + 1j * g * (r1001 - r0110),
    ])


def eta(p: Params, omega, sp: SpectralParams = None) -> np.ndarray:
    """Lorentzian weights ``eta_n(omega)``, shape ``(2, len(omega))``."""
    sp = sp or spectral_params(p)
    G = sp.big_g
    _require_nondegenerate(G)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.empty((2, omega.size), dtype=complex)
    for i, n in enumerate((1, 2)):
        gn, wn = sp.gammas[i], sp.omegas[i]
        pref = (gn - 1j * wn + (-1j * p.delta_a - p.gamma / 2)) / ((-1) ** n * 2j * G.conjugate())
        out[i] = pref * (gn - 1j * (omega - wn))
    return out


def analytic_spectrum(p: Params, omega_grid) -> Spectrum:
    """Two-Lorentzian weak-driving spectrum.

    Equals ``pi`` times the half-line transform of ``mu(tau)^*``; the drive
    strength does not enter.
    """
    sp = spectral_params(p)
    omega = np.asarray(omega_grid, dtype=float)
    w = eta(p, omega, sp)
    values = sum(w[i].real / ((omega - sp.omegas[i]) ** 2 + sp.gammas[i] ** 2) for i in range(2))
    return Spectrum(omega, values, {"source": "analytic"})


def splitting(p: Params) -> float:
    """Peak separation ``|omega_1 - omega_2| = 2 Re G`` (GHz)."""
    return 2 * big_g(p).real
