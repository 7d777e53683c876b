"""Vacuum-Rabi-splitting correlation spectra of a qubit coupled to a nonlinear resonator."""
from .analytic import (SpectralParams, analytic_spectrum, big_g, mu_nu_c, solve_first_order,
                       spectral_params, splitting, steady_elements)
from .correlation import default_tau_grid, emf_correlation, emf_terms, two_time
from .dynamics import liouvillian, propagate, steady_state
from .errors import (ConfigError, DegenerateParametersError, DiagnosticWarning,
                     SingularSteadyStateError)
from .model import Detunings, Params, detunings, hamiltonian_lab, hamiltonian_rotating
from .operators import HilbertConfig, annihilation, number_operator, sigma_minus, tensor
from .series import CorrelationSeries, Spectrum
from .spectrum import (Peak, PeakSet, default_omega_grid, find_peaks, half_line_fourier,
                       numeric_spectrum)

__version__ = "0.1.0"
