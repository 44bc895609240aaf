"""Time-ordered propagation with simultaneous integration of the local generator.

The coupled system

    dU/dt = -i H(lam, t) U,        U(0) = 1
    dh/dt = U† (dH/dlam)(lam, t) U,  h(0) = 0

is integrated as one complex state with an adaptive Runge-Kutta 5(4) pair,
so the propagator and the transformed local generator h(t) = i U† dU/dlam
see identical time discretization.  No unitarity re-projection is applied;
integration error is tracked, not hidden.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, PropagationError

TOL_MIN = 1e-13
TOL_MAX = 1e-6
DEFAULT_TOL = 1e-10

# The requested tolerance is a bound on acceptable error in the recorded
# matrices, so the integrator itself runs tighter than that.
_INTERNAL_TOL_FACTOR = 50.0
_RTOL_FLOOR = 3e-14


@dataclass(frozen=True)
class HamiltonianFamily:
    """A parametrized Hamiltonian H(lam, t) together with dH/dlam.

    `evaluate` and `evaluate_dlambda` must return Hermitian (dim, dim)
    arrays for every queried (lam, t).
    """

    dim: int
    evaluate: Callable[[float, float], np.ndarray]
    evaluate_dlambda: Callable[[float, float], np.ndarray]


@dataclass(frozen=True)
class PropagationRecord:
    """Propagators and local generators sampled along a time grid.

    U[k] is the propagator from 0 to times[k]; h[k] the generator at the
    same instant.  tol is the error target the integration was run at:
    each U is unitary, and each h Hermitian, to within 10*tol.
    """

    lam: float
    times: np.ndarray
    U: np.ndarray  # shape (n_times, dim, dim)
    h: np.ndarray  # shape (n_times, dim, dim)
    tol: float


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise DomainError("times must be a non-empty 1-d grid")
    if times[0] != 0.0:
        raise DomainError("times must start at 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise DomainError("times must be strictly ascending")
    return times


def _check_tol(tol: float) -> float:
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise DomainError(f"tol {tol:g} outside [{TOL_MIN:g}, {TOL_MAX:g}]")
    return float(tol)


def propagate(family: HamiltonianFamily, lam: float, times, tol: float = DEFAULT_TOL) -> PropagationRecord:
    """Integrate U and h for one parameter value over a requested time grid."""
    times = _check_times(times)
    tol = _check_tol(tol)
    n = family.dim
    nsq = n * n

    def rhs(t, y):
        u = y[:nsq].reshape(n, n)
        ham = np.asarray(family.evaluate(lam, t), dtype=complex)
        dham = np.asarray(family.evaluate_dlambda(lam, t), dtype=complex)
        if not (np.all(np.isfinite(ham)) and np.all(np.isfinite(dham))):
            raise PropagationError(f"non-finite Hamiltonian evaluation at t={t:g}")
        du = -1j * (ham @ u)
        dh = u.conj().T @ dham @ u
        return np.concatenate([du.ravel(), dh.ravel()])

    y0 = np.concatenate([np.eye(n, dtype=complex).ravel(), np.zeros(nsq, dtype=complex)])
    if times[-1] == 0.0:
        u_out = y0[:nsq].reshape(1, n, n).copy()
        h_out = y0[nsq:].reshape(1, n, n).copy()
        return PropagationRecord(lam=float(lam), times=times, U=u_out, h=h_out, tol=tol)

    inner = max(tol / _INTERNAL_TOL_FACTOR, _RTOL_FLOOR)
    sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, method="RK45",
                    t_eval=times, rtol=inner, atol=inner)
    if not sol.success:
        raise PropagationError(f"integration failed: {sol.message}")

    y = sol.y.T  # (n_times, 2*nsq)
    u_out = y[:, :nsq].reshape(-1, n, n)
    h_out = y[:, nsq:].reshape(-1, n, n)
    return PropagationRecord(lam=float(lam), times=times, U=u_out, h=h_out, tol=tol)


def propagator_at(family: HamiltonianFamily, lam: float, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Convenience: U(0->t) only."""
    grid = np.array([0.0, float(t)]) if t > 0 else np.array([0.0])
    return propagate(family, lam, grid, tol=tol).U[-1]


def generator_finite_difference(family: HamiltonianFamily, lam: float, t: float,
                                dlam: float = 1e-4, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Local generator via i U(lam)† [U(lam+d) - U(lam-d)] / (2d).

    A direct discretization of h = i U† dU/dlam, independent of the
    augmented-ODE route; agrees with it to O(dlam²) + O(tol).  The result
    is symmetrized by (A + A†)/2.
    """
    if dlam <= 0:
        raise DomainError("dlam must be positive")
    u0 = propagator_at(family, lam, t, tol=tol)
    up = propagator_at(family, lam + dlam, t, tol=tol)
    um = propagator_at(family, lam - dlam, t, tol=tol)
    h = 1j * u0.conj().T @ (up - um) / (2.0 * dlam)
    return (h + h.conj().T) / 2.0
