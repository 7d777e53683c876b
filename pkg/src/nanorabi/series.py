"""Sampled correlation and spectrum containers."""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CorrelationSeries:
    """Complex samples of a two-time correlation on an ascending tau grid (ns)."""

    tau: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if tau.shape != values.shape or tau.ndim != 1:
            raise ValueError(f"tau and values must be equal-length 1-d arrays, "
                             f"got {tau.shape} and {values.shape}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "values", values)

    def __add__(self, other):
        self._check_grid(other)
        return CorrelationSeries(self.tau, self.values + other.values)

    def __sub__(self, other):
        self._check_grid(other)
        return CorrelationSeries(self.tau, self.values - other.values)

    def __mul__(self, alpha):
        return CorrelationSeries(self.tau, alpha * self.values)

    __rmul__ = __mul__

    def _check_grid(self, other):
        if not np.array_equal(self.tau, other.tau):
            raise ValueError("correlation series live on different tau grids")


@dataclass(frozen=True)
class Spectrum:
    """Real spectrum samples (arbitrary units) on an ascending omega grid (GHz)."""

    omega: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if omega.shape != values.shape or omega.ndim != 1:
            raise ValueError(f"omega and values must be equal-length 1-d arrays, "
                             f"got {omega.shape} and {values.shape}")
        if np.any(np.diff(omega) <= 0):
            raise ValueError("omega grid must be strictly ascending")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    def scaled(self, alpha: float) -> "Spectrum":
        return Spectrum(self.omega, alpha * self.values, dict(self.meta))

    def normalized(self) -> "Spectrum":
        """Rescale so the maximum is 1."""
        return self.scaled(1.0 / np.max(self.values))
