"""Truncated qubit x Fock-space operators.

Basis ordering is qubit-major, phonon-minor: the product state |j, k> has
index ``j * (n_fock + 1) + k`` with j in {0, 1} and k in {0, ..., n_fock}.
All returned arrays are complex128 and read-only.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HilbertConfig:
    """Truncated Hilbert space of one qubit and one resonator mode."""

    n_fock: int

    def __post_init__(self):
        if int(self.n_fock) != self.n_fock or self.n_fock < 1:
            raise ValueError(f"n_fock must be an integer >= 1, got {self.n_fock!r}")

    @property
    def n_levels(self) -> int:
        return self.n_fock + 1

    @property
    def dim(self) -> int:
        return 2 * (self.n_fock + 1)

    def index(self, j: int, k: int) -> int:
        """Flat index of the product state |j, k>."""
        if j not in (0, 1) or not 0 <= k <= self.n_fock:
            raise IndexError(f"state |{j},{k}> outside truncated space")
        return j * self.n_levels + k

    def basis(self, j: int, k: int) -> np.ndarray:
        ket = np.zeros(self.dim, dtype=complex)
        ket[self.index(j, k)] = 1.0
        return ket


def _frozen(m):
    m = np.asarray(m, dtype=complex)
    m.setflags(write=False)
    return m


def annihilation(n_fock: int) -> np.ndarray:
    """Truncated annihilation operator on |0>..|n_fock>.

    ``<k-1|a|k> = sqrt(k)``; the commutator [a, a^dag] is the identity except
    on the top level.
    """
    if int(n_fock) != n_fock or n_fock < 1:
        raise ValueError(f"n_fock must be an integer >= 1, got {n_fock!r}")
    return _frozen(np.diag(np.sqrt(np.arange(1, n_fock + 1, dtype=float)), k=1))


def creation(n_fock: int) -> np.ndarray:
    return _frozen(annihilation(n_fock).conj().T)


def sigma_minus() -> np.ndarray:
    """Qubit lowering operator, ``sigma_minus |1> = |0>``."""
    return _frozen([[0.0, 1.0], [0.0, 0.0]])


def sigma_plus() -> np.ndarray:
    return _frozen(sigma_minus().conj().T)


def sigma_z() -> np.ndarray:
    """``[sigma_minus, sigma_plus]``, i.e. diag(+1, -1) in (|0>, |1>).

    Sign is opposite to the usual physics convention; nothing downstream
    depends on it.
    """
    sm, sp = sigma_minus(), sigma_plus()
    return _frozen(sm @ sp - sp @ sm)


def tensor(*ops) -> np.ndarray:
    """Kronecker product, leftmost factor most significant (qubit first)."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return _frozen(out)


def identity(dim: int) -> np.ndarray:
    return _frozen(np.eye(dim))


def phonon_number(n_fock: int) -> np.ndarray:
    """``a^dag a`` with exact integer diagonal (``sqrt(k)**2`` is not exactly ``k``)."""
    return _frozen(np.diag(np.arange(n_fock + 1, dtype=float)))


def number_operator(cfg: HilbertConfig) -> np.ndarray:
    """Total excitation number ``sigma_+ sigma_- (x) I + I (x) a^dag a``."""
    sm = sigma_minus()
    return _frozen(tensor(sm.conj().T @ sm, identity(cfg.n_levels))
                   + tensor(identity(2), phonon_number(cfg.n_fock)))


@dataclass(frozen=True)
class SystemOperators:
    """Full-space operators for a given truncation, built once and shared."""

    cfg: HilbertConfig
    a: np.ndarray
    sm: np.ndarray
    n_phonon: np.ndarray
    n_qubit: np.ndarray
    eye: np.ndarray

    @property
    def ad(self) -> np.ndarray:
        return self.a.conj().T

    @property
    def sp(self) -> np.ndarray:
        return self.sm.conj().T

    @classmethod
    def build(cls, n_fock: int) -> "SystemOperators":
        cfg = HilbertConfig(n_fock)
        a1 = annihilation(n_fock)
        sm1 = sigma_minus()
        i2, ic = identity(2), identity(cfg.n_levels)
        return cls(
            cfg=cfg,
            a=tensor(i2, a1),
            sm=tensor(sm1, ic),
            n_phonon=tensor(i2, phonon_number(n_fock)),
            n_qubit=tensor(sm1.conj().T @ sm1, ic),
            eye=identity(cfg.dim),
        )
