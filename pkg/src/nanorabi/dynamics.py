"""Lindblad generator, time propagation and steady state.

Density matrices are vectorized by column stacking, ``vec(rho) =
rho.reshape(-1, order="F")``, so that ``A rho B -> kron(B.T, A) vec(rho)``.
The dissipator keeps the normalization

    kappa (2 a rho ad - ad a rho - rho ad a)
    + gamma/2 (2 sm rho sp - sp sm rho - rho sp sm)

so the resonator energy decays at 2 kappa and the qubit population at gamma.
"""
import math
import warnings

import numpy as np
import scipy.linalg as la
from scipy.integrate import solve_ivp

from .errors import DiagnosticWarning, SingularSteadyStateError
from .model import Params, hamiltonian_rotating
from .operators import SystemOperators

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-8
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = math.isqrt(v.size)
    return v.reshape(dim, dim, order="F")


def spre(a):
    return np.kron(np.eye(a.shape[0]), a)


def spost(a):
    return np.kron(a.T, np.eye(a.shape[0]))


def lindblad_dissipator(c: np.ndarray) -> np.ndarray:
    """Superoperator of ``2 c rho c^dag - c^dag c rho - rho c^dag c``."""
    cdc = c.conj().T @ c
    return 2 * np.kron(c.conj(), c) - spre(cdc) - spost(cdc)


def liouvillian(p: Params, ops: SystemOperators = None) -> np.ndarray:
    """Dense generator ``L`` with ``d vec(rho)/dt = L vec(rho)``."""
    ops = ops or SystemOperators.build(p.n_fock)
    h = hamiltonian_rotating(p, ops)
    L = (-1j * (spre(h) - spost(h))
         + p.kappa * lindblad_dissipator(ops.a)
         + 0.5 * p.gamma * lindblad_dissipator(ops.sm))
    L.setflags(write=False)
    return L


def density_diagnostics(rho: np.ndarray) -> dict:
    """Hermiticity error, trace error and smallest eigenvalue of ``rho``."""
    rho = np.asarray(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace_err = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.min(la.eigvalsh(0.5 * (rho + rho.conj().T))))
    return {"hermiticity": herm, "trace": trace_err, "min_eig": min_eig}


def validate_density_matrix(rho: np.ndarray) -> None:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    d = density_diagnostics(rho)
    if d["hermiticity"] > HERMITICITY_TOL:
        raise ValueError(f"density matrix not Hermitian (error {d['hermiticity']:.3g})")
    if d["trace"] > TRACE_TOL:
        raise ValueError(f"density matrix trace off by {d['trace']:.3g}")
    if d["min_eig"] < -POSITIVITY_TOL:
        raise ValueError(f"density matrix not positive (min eigenvalue {d['min_eig']:.3g})")


def check_grid(tau_grid) -> np.ndarray:
    """Validate a propagation grid: starts at 0, strictly ascending."""
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise ValueError("tau grid must be a non-empty 1-d sequence")
    if tau[0] != 0.0:
        raise ValueError(f"tau grid must start at 0, got {tau[0]}")
    if np.any(np.diff(tau) <= 0):
        raise ValueError("tau grid must be strictly ascending")
    return tau


def _is_uniform(tau):
    if tau.size < 3:
        return True
    steps = np.diff(tau)
    return bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0))


def evolve(L: np.ndarray, v0: np.ndarray, tau_grid, method: str = "expm") -> np.ndarray:
    """Return ``exp(L tau_i) v0`` for every grid point, shape ``(n_tau, dim2)``.

    No state invariants are assumed, so this also serves the regression
    theorem, where ``v0`` is ``vec(B rho_ss)``.
    """
    tau = check_grid(tau_grid)
    L = np.asarray(L)
    v0 = np.asarray(v0, dtype=complex)
    out = np.empty((tau.size, v0.size), dtype=complex)
    out[0] = v0
    if tau.size == 1:
        return out
    if method == "expm":
        steps = np.diff(tau)
        if _is_uniform(tau):
            props = {None: la.expm(L * steps[0])}
            key = lambda s: None
        else:
            props = {}
            key = float
        v = v0
        for i, s in enumerate(steps, start=1):
            k = key(s)
            if k not in props:
                props[k] = la.expm(L * s)
            v = props[k] @ v
            out[i] = v
    elif method == "ode":
        sol = solve_ivp(lambda t, y: L @ y, (tau[0], tau[-1]), v0, method="DOP853",
                        t_eval=tau, rtol=ODE_RTOL, atol=ODE_ATOL)
        if not sol.success:
            raise RuntimeError(f"ODE integration failed: {sol.message}")
        out[:] = sol.y.T
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    return out


def evolve_observed(L: np.ndarray, v0: np.ndarray, rows: np.ndarray, tau_grid) -> np.ndarray:
    """Return ``rows @ exp(L tau_i) v0`` for each grid point.

    ``v0`` may be one vector or a stack ``(k, dim2)`` of them; the result has
    shape ``(n_rows, n_tau)`` or ``(n_rows, k, n_tau)`` accordingly.

    On a uniform grid ``tau_k = k h`` this splits ``k = m q + j`` and forms
    ``(rows P^j) (P^(m q) v0)`` with ``P = expm(L h)``, which needs about
    ``2 sqrt(n_tau)`` matrix-vector products instead of ``n_tau``.
    """
    tau = check_grid(tau_grid)
    rows = np.atleast_2d(np.asarray(rows, dtype=complex))
    v0 = np.asarray(v0, dtype=complex)
    single = v0.ndim == 1
    starts = np.atleast_2d(v0)
    n = tau.size
    if n < 3 or not _is_uniform(tau):
        out = np.stack([rows @ evolve(L, v, tau).T for v in starts], axis=1)
        return out[:, 0] if single else out
    h = tau[1] - tau[0]
    m = math.isqrt(n - 1) + 1
    n_giant = -(-n // m)
    step = la.expm(L * h)
    baby = np.empty((m,) + rows.shape, dtype=complex)
    baby[0] = rows
    for j in range(1, m):
        baby[j] = baby[j - 1] @ step
    jump = la.expm(L * (h * m))
    giant = np.empty((n_giant,) + starts.shape, dtype=complex)
    giant[0] = starts
    for q in range(1, n_giant):
        giant[q] = giant[q - 1] @ jump.T
    r, k = rows.shape[0], starts.shape[0]
    prod = baby.reshape(m * r, -1) @ giant.reshape(n_giant * k, -1).T
    out = prod.reshape(m, r, n_giant, k).transpose(1, 3, 2, 0).reshape(r, k, n_giant * m)
    out = out[:, :, :n]
    return out[:, 0] if single else out


def hermitian_coordinates(dim: int):
    """Real coordinates for Hermitian ``dim x dim`` matrices.

    Returns ``(T, P)`` with ``vec(rho) = T x`` and ``x = P vec(rho)``, where
    ``x`` lists ``Re rho_ij`` for ``i <= j`` followed by ``Im rho_ij`` for
    ``i < j``. Any real ``x`` maps to an exactly Hermitian matrix.
    """
    iu, ju = np.triu_indices(dim)
    iv, jv = np.triu_indices(dim, k=1)
    n_re = iu.size
    d2 = dim * dim
    T = np.zeros((d2, d2), dtype=complex)
    P = np.zeros((d2, d2), dtype=complex)
    cols = np.arange(n_re)
    np.add.at(T, (iu + ju * dim, cols), 1.0)
    off = iu != ju
    T[ju[off] + iu[off] * dim, cols[off]] += 1.0
    np.add.at(P, (cols, iu + ju * dim), 0.5)
    np.add.at(P, (cols, ju + iu * dim), 0.5)
    cols = n_re + np.arange(iv.size)
    T[iv + jv * dim, cols] = 1j
    T[jv + iv * dim, cols] = -1j
    P[cols, iv + jv * dim] = -0.5j
    P[cols, jv + iv * dim] = 0.5j
    return T, P


def _propagate_hermitian_ode(L: np.ndarray, rho0: np.ndarray, tau: np.ndarray) -> np.ndarray:
    dim = rho0.shape[0]
    T, P = hermitian_coordinates(dim)
    L_real = P @ L @ T
    if np.max(np.abs(L_real.imag)) > 1e-12 * max(1.0, np.max(np.abs(L_real.real))):
        raise ValueError("generator does not preserve Hermiticity")
    L_real = np.ascontiguousarray(L_real.real)
    x0 = (P @ vec(rho0)).real
    sol = solve_ivp(lambda t, y: L_real @ y, (tau[0], tau[-1]), x0, method="DOP853",
                    t_eval=tau, rtol=ODE_RTOL, atol=ODE_ATOL)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return (sol.y.T @ T.T)


def propagate(rho0: np.ndarray, L: np.ndarray, tau_grid, method: str = "expm") -> np.ndarray:
    """Evolve a density matrix; returns the stack ``rho(tau_i)``, shape ``(n, dim, dim)``.

    ``method`` is ``"expm"`` (exact propagator per distinct step) or
    ``"ode"`` (adaptive DOP853 at rtol 1e-10). The ODE path integrates the
    real Hermitian coordinates of :func:`hermitian_coordinates`, so every
    output is Hermitian regardless of the step error. A trace drift above
    1e-8 is reported as a :class:`DiagnosticWarning`.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density_matrix(rho0)
    dim = rho0.shape[0]
    if L.shape != (dim * dim, dim * dim):
        raise ValueError(f"Liouvillian shape {L.shape} does not match state dimension {dim}")
    if method == "ode":
        vs = _propagate_hermitian_ode(np.asarray(L), rho0, check_grid(tau_grid))
    else:
        vs = evolve(L, vec(rho0), tau_grid, method=method)
    states = vs.reshape(-1, dim, dim).transpose(0, 2, 1)
    drift = np.max(np.abs(np.trace(states, axis1=1, axis2=2) - np.trace(rho0)))
    if drift > TRACE_DRIFT_TOL:
        warnings.warn(f"trace drift {drift:.3g} exceeds {TRACE_DRIFT_TOL:g}",
                      DiagnosticWarning, stacklevel=2)
    if np.array_equal(np.asarray(tau_grid, dtype=float)[:1], [0.0]):
        states[0] = rho0
    return states


def steady_state(L: np.ndarray) -> np.ndarray:
    """Unique ``rho_ss`` with ``L vec(rho_ss) = 0`` and unit trace.

    The first row of ``L`` is replaced by the trace functional and the
    resulting system solved directly. Raises
    :class:`SingularSteadyStateError` if the kernel is not one-dimensional.
    """
    L = np.asarray(L)
    d2 = L.shape[0]
    dim = math.isqrt(d2)
    sv = la.svdvals(L)
    scale = max(1.0, sv[0])
    if sv[-2] <= 1e-12 * scale:
        raise SingularSteadyStateError(
            f"Liouvillian kernel is degenerate (second-smallest singular value {sv[-2]:.3g})")
    M = np.array(L, dtype=complex)
    M[0] = vec(np.eye(dim))
    rhs = np.zeros(d2, dtype=complex)
    rhs[0] = 1.0
    try:
        x = la.solve(M, rhs)
    except la.LinAlgError as exc:
        raise SingularSteadyStateError(str(exc)) from exc
    rho = unvec(x, dim)
    rho = 0.5 * (rho + rho.conj().T)
    return rho


def steady_state_residual(L: np.ndarray, rho: np.ndarray) -> float:
    return float(np.max(np.abs(L @ vec(rho))))
