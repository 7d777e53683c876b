"""Model parameters and the driven nonlinear Jaynes-Cummings Hamiltonians.

Units: angular frequencies and rates in GHz with hbar = 1, times in ns.
"""
import dataclasses
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .operators import SystemOperators


@dataclass(frozen=True)
class Params:
    """Physical and numerical parameters.

    Frequencies are stored as detunings from the drive; ``omega_p`` is only
    used by the lab-frame Hamiltonian. Defaults are the weak-driving working
    point with ``chi = 0.01`` and ``xi = 0.02``.
    """

    delta_a: float = 1.0
    delta_c: float = 1.0
    g: float = 0.2
    xi: float = 0.02
    chi: float = 0.01
    kappa: float = 0.004
    gamma: float = 0.004
    n_fock: int = 10
    omega_p: float = 1.0
    allow_negative_chi: bool = False

    def __post_init__(self):
        for name in ("delta_a", "delta_c", "g", "xi", "chi", "kappa", "gamma", "omega_p"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if isinstance(self.n_fock, bool) or int(self.n_fock) != self.n_fock:
            raise ConfigError(f"n_fock must be an integer, got {self.n_fock!r}")
        object.__setattr__(self, "n_fock", int(self.n_fock))

        for name in ("g", "kappa", "gamma"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.n_fock < 1:
            raise ConfigError(f"n_fock must be >= 1, got {self.n_fock}")
        if self.xi < 0:
            raise ConfigError(f"xi must be >= 0, got {self.xi}")
        if self.chi < 0 and not self.allow_negative_chi:
            raise ConfigError(
                f"chi must be >= 0, got {self.chi} (pass allow_negative_chi to override)")
        if abs(self.chi) > self.g / 5:
            warnings.warn(f"|chi| = {abs(self.chi)} exceeds g/5; outside the small-nonlinearity "
                          "regime the weak-driving formulas assume", stacklevel=3)

    @classmethod
    def from_frequencies(cls, omega_a, omega_c, omega_p, **kwargs) -> "Params":
        """Build from bare qubit, resonator and drive frequencies."""
        return cls(delta_a=omega_a - omega_p, delta_c=omega_c - omega_p,
                   omega_p=omega_p, **kwargs)

    @property
    def omega_a(self) -> float:
        return self.delta_a + self.omega_p

    @property
    def omega_c(self) -> float:
        return self.delta_c + self.omega_p

    @property
    def delta(self) -> float:
        return self.delta_c - self.delta_a

    def replace(self, **changes) -> "Params":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class Detunings:
    delta_a: float
    delta_c: float
    delta: float


def detunings(p: Params) -> Detunings:
    return Detunings(p.delta_a, p.delta_c, p.delta_c - p.delta_a)


def _ops(p):
    return SystemOperators.build(p.n_fock)


def _jc_coupling(ops, g):
    # g (a sigma_+ + a^dag sigma_-) is Hermitian as written; summing the
    # two conjugate halves keeps it exactly so.
    half = g * (ops.a @ ops.sp)
    return half + half.conj().T


def hamiltonian_rotating(p: Params, ops: SystemOperators = None) -> np.ndarray:
    """Drive-frame Hamiltonian.

    ``H = da sp sm + g (a sp + ad sm) + dc ad a - xi (a + ad)
    + chi ad a + chi (ad a)^2``
    """
    ops = ops or _ops(p)
    n = ops.n_phonon
    h = (p.delta_a * ops.n_qubit
         + _jc_coupling(ops, p.g)
         + p.delta_c * n
         - p.xi * (ops.a + ops.ad)
         + p.chi * n
         + p.chi * (n @ n))
    h.setflags(write=False)
    return h


def hamiltonian_lab(p: Params, t: float, ops: SystemOperators = None) -> np.ndarray:
    """Lab-frame Hamiltonian with a classical sinusoidal drive at time ``t`` (ns).

    ``H = wa sp sm + g (a sp + ad sm) + wc ad a - xi sin(wp t) (a + ad)``.
    Only used for qualitative checks; all results use the drive frame.
    """
    ops = ops or _ops(p)
    h = (p.omega_a * ops.n_qubit
         + _jc_coupling(ops, p.g)
         + p.omega_c * ops.n_phonon
         - p.xi * math.sin(p.omega_p * t) * (ops.a + ops.ad))
    h.setflags(write=False)
    return h
