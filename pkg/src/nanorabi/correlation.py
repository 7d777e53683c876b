"""Two-time correlations from the quantum regression theorem.

``<A(tau) B(0)> = Tr{A exp(L tau)[B rho_ss]}``. The regressed quantity
``B rho_ss`` is not a density matrix, so it goes through
:func:`~nanorabi.dynamics.evolve_observed` with no state checks.
"""
import numpy as np

from .analytic import spectral_params
from .errors import DegenerateParametersError
from .dynamics import check_grid, evolve_observed, liouvillian, steady_state, vec
from .model import Params
from .operators import SystemOperators
from .series import CorrelationSeries

DEFAULT_DT = 0.05
DEFAULT_DECAY_FACTOR = 14.0


def default_tau_grid(p: Params, dt: float = DEFAULT_DT, t_max: float = None) -> np.ndarray:
    """Uniform grid on ``[0, t_max]`` with ``t_max = 14 / Gamma_min`` by default.

    Raises :class:`DegenerateParametersError` when no default is possible
    because one dressed mode does not decay (``Gamma_min <= 0``).
    """
    if t_max is None:
        gamma_min = spectral_params(p).gamma_min
        if not gamma_min > 0:
            raise DegenerateParametersError(
                f"smallest dressed decay rate is {gamma_min:.3g}; pass t_max explicitly")
        t_max = DEFAULT_DECAY_FACTOR / gamma_min
    if dt <= 0 or t_max <= 0:
        raise ValueError("dt and t_max must be positive")
    n = int(np.ceil(t_max / dt - 1e-9)) + 1
    return dt * np.arange(n)


def _trace_row(A):
    # Tr(A X) = sum_ij A_ji X_ij = vec(A^T) . vec(X)
    return vec(np.asarray(A).T)


def two_time(L, rho_ss, A, B, tau_grid) -> CorrelationSeries:
    """``<A(tau) B(0)>`` in the state ``rho_ss`` on ``tau_grid``."""
    tau = check_grid(tau_grid)
    values = evolve_observed(L, vec(np.asarray(B) @ rho_ss), _trace_row(A), tau)[0]
    return CorrelationSeries(tau, values)


EMF_TERMS = ("ad_a", "a_ad", "a_a", "ad_ad")
_EMF_SIGNS = {"ad_a": 1.0, "a_ad": 1.0, "a_a": -1.0, "ad_ad": -1.0}


def emf_terms(p: Params, tau_grid, L=None, rho_ss=None) -> dict:
    """The four regression terms of the emf correlation.

    Keys are ``"ad_a"`` for ``<ad(tau) a(0)>``, ``"a_ad"``, ``"a_a"`` and
    ``"ad_ad"`` likewise.
    """
    tau = check_grid(tau_grid)
    ops = SystemOperators.build(p.n_fock)
    if L is None:
        L = liouvillian(p, ops)
    if rho_ss is None:
        rho_ss = steady_state(L)
    a, ad = ops.a, ops.ad
    rows = np.stack([_trace_row(ad), _trace_row(a)])
    out = evolve_observed(L, np.stack([vec(a @ rho_ss), vec(ad @ rho_ss)]), rows, tau)
    from_a, from_ad = out[:, 0], out[:, 1]
    return {
        "ad_a": CorrelationSeries(tau, from_a[0]),
        "a_a": CorrelationSeries(tau, from_a[1]),
        "ad_ad": CorrelationSeries(tau, from_ad[0]),
        "a_ad": CorrelationSeries(tau, from_ad[1]),
    }


def emf_correlation(p: Params, tau_grid=None, L=None, rho_ss=None) -> CorrelationSeries:
    """``<V(tau) V(0)>`` with ``V = i (ad - a)`` (unit prefactor).

    ``= <ad a> + <a ad> - <a a> - <ad ad>`` evaluated against the numerical
    steady state.
    """
    if tau_grid is None:
        tau_grid = default_tau_grid(p)
    terms = emf_terms(p, tau_grid, L=L, rho_ss=rho_ss)
    total = sum(_EMF_SIGNS[k] * terms[k].values for k in EMF_TERMS)
    return CorrelationSeries(terms["a_ad"].tau, total)
