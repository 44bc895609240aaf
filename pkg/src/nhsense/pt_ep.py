"""Periodically driven PT-symmetric sensor operated near an exceptional point.

The non-Hermitian Hamiltonian J(1+cos(w t)) sigma_x + i Gamma sigma_z plus a
weak parameter-encoding drive (delta/2) cos(w_d t)(1 - sigma_z) is propagated
over one modulation period T = 2 pi/w.  The measurable pair (P_J, P_Gamma)
yields a response energy via P_J - P_Gamma = sin²(E T); its shot-noise
variance, susceptibility, and sensitivity are evaluated together with the
sensitivity bound of the Hermitian counterpart that couples to the drive
directly.

The identity part of the drive only contributes a global phase of unit
modulus; it is kept in the propagator so U matches the defining expression
literally.  The gain convention +i Gamma sigma_z is propagated as written;
the passive realization enters only through the noise scale C0 = e^{2 Gamma T}.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import DomainError, PropagationError
from .evolution import TOL_MAX, TOL_MIN, _INTERNAL_TOL_FACTOR, _RTOL_FLOOR
from .operators import ID2, SIGMA_X, SIGMA_Z

DEFAULT_TOL = 1e-10
DIFF_FLOOR = 1e-9  # rows are usable only for P_J - P_Gamma in (DIFF_FLOOR, 1 - DIFF_FLOOR)

SCAN_COLUMNS = ("omega_delta", "PJ", "PGamma", "E_res", "var_E", "chi_E",
                "sensitivity", "hermitian_bound", "excluded_reason")


@dataclass(frozen=True)
class PtEpParams:
    """Coupling J, dissipation Gamma, drive frequency omega, perturbation
    amplitude delta and frequency omega_delta (the estimated parameter)."""

    J: float
    Gamma: float
    omega: float
    delta: float
    omega_delta: float
    nu: int = 1

    def __post_init__(self):
        if self.J <= 0:
            raise DomainError("J must be positive")
        if self.Gamma < 0:
            raise DomainError("Gamma must be nonnegative")
        if self.omega <= 0:
            raise DomainError("omega must be positive")
        if self.delta < 0:
            raise DomainError("delta must be nonnegative")
        if self.omega_delta <= 0:
            raise DomainError("omega_delta must be positive")
        if self.nu < 1:
            raise DomainError("trial count must be >= 1")

    @property
    def T(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def C0(self) -> float:
        return math.exp(2.0 * self.Gamma * self.T)


@dataclass(frozen=True)
class EpScanRow:
    omega_delta: float
    PJ: float
    PGamma: float
    E_res: float
    var_E: float
    chi_E: float
    sensitivity: float
    hermitian_bound: float
    excluded_reason: str = ""


@dataclass(frozen=True)
class EpHermitianBound:
    """Sensitivity bound of the Hermitian counterpart.

    `bound` is the uncertainty-bound integral evaluated by quadrature (the
    authoritative value); `as_printed` is a circulating closed-form variant
    that squares the integral while keeping a single sqrt(nu).  It is
    dimensionally inconsistent with `bound` and reported side by side for
    comparison only.
    """

    bound: float
    as_printed: float


def hamiltonian_total(p: PtEpParams, t: float) -> np.ndarray:
    """J(1+cos(w t)) sigma_x + i Gamma sigma_z + (delta/2) cos(w_d t)(1 - sigma_z)."""
    drive = p.J * (1.0 + math.cos(p.omega * t))
    pert = 0.5 * p.delta * math.cos(p.omega_delta * t)
    return drive * SIGMA_X + 1j * p.Gamma * SIGMA_Z + pert * (ID2 - SIGMA_Z)


def propagate_interval(p: PtEpParams, t0: float, t1: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Time-ordered propagator of the full non-Hermitian Hamiltonian on [t0, t1].

    No unitarity is expected; |det U| stays 1 because the Hamiltonian trace
    is real (the anti-Hermitian part is traceless).
    """
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise DomainError(f"tol {tol:g} outside [{TOL_MIN:g}, {TOL_MAX:g}]")
    if t1 < t0:
        raise DomainError("t1 must be >= t0")
    if t1 == t0:
        return np.eye(2, dtype=complex)

    def rhs(t, y):
        u = y.reshape(2, 2)
        return (-1j * hamiltonian_total(p, t) @ u).ravel()

    inner = max(tol / _INTERNAL_TOL_FACTOR, _RTOL_FLOOR)
    sol = solve_ivp(rhs, (t0, t1), np.eye(2, dtype=complex).ravel(),
                    method="RK45", rtol=inner, atol=inner)
    if not sol.success:
        raise PropagationError(f"integration failed: {sol.message}")
    return sol.y[:, -1].reshape(2, 2)


def propagate_period(p: PtEpParams, tol: float = DEFAULT_TOL) -> np.ndarray:
    """U(T) over one modulation period."""
    return propagate_interval(p, 0.0, p.T, tol=tol)


def pj_pgamma(u) -> tuple[float, float]:
    """Measured pair P_J = |<up|U|down>|², P_Gamma = |<-x|U|+x>|².

    Convention |up> = (1, 0), |down> = (0, 1).  Either value may exceed 1
    under gain.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DomainError(f"expected a 2x2 propagator, got shape {u.shape}")
    pj = abs(u[0, 1]) ** 2
    pg = abs(u[0, 0] + u[0, 1] - u[1, 0] - u[1, 1]) ** 2 / 4.0
    return float(pj), float(pg)


def response_energy(pj: float, pgamma: float, period: float) -> float:
    """E_res = arcsin(sqrt(P_J - P_Gamma))/T, principal branch in [0, pi/(2T)].

    P_J - P_Gamma outside [0, 1] means a complex response energy; that
    region is excluded, and the offending difference is reported.
    """
    diff = pj - pgamma
    if not (0.0 <= diff <= 1.0):
        raise DomainError(f"P_J - P_Gamma = {diff:.6g} outside [0, 1]: complex response energy")
    return math.asin(math.sqrt(diff)) / period


def _diff_at(p: PtEpParams, tol: float) -> float:
    pj, pg = pj_pgamma(propagate_period(p, tol=tol))
    return pj - pg


def find_ep(j: float, omega: float, bracket: tuple[float, float] | None = None,
            tol: float = 1e-10, prop_tol: float = 1e-12) -> float:
    """Dissipation rate at the phase boundary: root of P_J - P_Gamma at delta = 0.

    A coarse pre-scan over the bracket locates a sign change, then bisection
    narrows it to |dGamma| <= tol.
    """
    if bracket is None:
        bracket = (0.01 * j, 3.0 * j)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 <= lo < hi):
        raise DomainError("bracket must satisfy 0 <= lo < hi")

    def g(gamma: float) -> float:
        # delta = 0 removes the perturbation; omega_delta is then inert.
        return _diff_at(PtEpParams(J=j, Gamma=gamma, omega=omega, delta=0.0, omega_delta=1.0), prop_tol)

    grid = np.linspace(lo, hi, 25)
    vals = [g(x) for x in grid]
    a = b = None
    for k in range(len(grid) - 1):
        if vals[k] == 0.0:
            return float(grid[k])
        if vals[k] * vals[k + 1] < 0:
            a, b, fa = grid[k], grid[k + 1], vals[k]
            break
    if a is None:
        raise DomainError(f"no sign change of P_J - P_Gamma in Gamma bracket ({lo:g}, {hi:g})")

    while (b - a) / 2.0 > tol:
        mid = 0.5 * (a + b)
        fm = g(mid)
        if fm == 0.0:
            return float(mid)
        if fa * fm < 0:
            b = mid
        else:
            a, fa = mid, fm
    return float(0.5 * (a + b))


def find_response_dip(p: PtEpParams, bracket: tuple[float, float],
                      tol: float = 1e-10, prop_tol: float = 1e-12) -> float:
    """omega_delta where P_J - P_Gamma crosses zero (the response-energy dip).

    The bracket endpoints must give opposite signs of the difference.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 < lo < hi):
        raise DomainError("bracket must satisfy 0 < lo < hi")

    def g(wd: float) -> float:
        return _diff_at(replace(p, omega_delta=wd), prop_tol)

    fa, fb = g(lo), g(hi)
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0:
        raise DomainError(f"no sign change of P_J - P_Gamma in omega_delta bracket ({lo:g}, {hi:g})")
    a, b = lo, hi
    while (b - a) / 2.0 > tol:
        mid = 0.5 * (a + b)
        fm = g(mid)
        if fm == 0.0:
            return float(mid)
        if fa * fm < 0:
            b = mid
        else:
            a, fa = mid, fm
    return float(0.5 * (a + b))


def response_variance(pj: float, pgamma: float, c0: float, nu: int, period: float) -> float:
    """Shot-noise variance of the response energy.

    (1/(4 nu T²)) [C0(P_J+P_Gamma) - (P_J²+P_Gamma²)] / [(P_J-P_Gamma)(1-P_J+P_Gamma)];
    identical to propagating the two scaled-binomial variances through the
    arcsin extraction to first order.  Diverges (+inf) at the zero of the
    denominator, i.e. at the dip itself.
    """
    if c0 < 1.0:
        raise DomainError(f"C0 must be >= 1, got {c0}")
    if nu < 1:
        raise DomainError("trial count must be >= 1")
    if not (0.0 <= pj <= c0) or not (0.0 <= pgamma <= c0):
        raise DomainError("P values must lie in [0, C0]")
    diff = pj - pgamma
    if not (0.0 <= diff <= 1.0):
        raise DomainError(f"P_J - P_Gamma = {diff:.6g} outside [0, 1]")
    den = diff * (1.0 - diff)
    num = c0 * (pj + pgamma) - (pj**2 + pgamma**2)
    if den < 1e-14:
        return float("inf")
    return num / (4.0 * nu * period**2 * den)


def _response_at(p: PtEpParams, tol: float) -> float:
    pj, pg = pj_pgamma(propagate_period(p, tol=tol))
    return response_energy(pj, pg, p.T)


def ep_susceptibility(p: PtEpParams, tol: float = DEFAULT_TOL, rel_step: float = 1e-5) -> float:
    """|dE_res/d omega_delta| by Richardson-extrapolated central difference.

    Raises DomainError if either sampled side leaves the real-response
    region.
    """
    step = rel_step * p.omega_delta

    def central(h: float) -> float:
        ep_plus = _response_at(replace(p, omega_delta=p.omega_delta + h), tol)
        ep_minus = _response_at(replace(p, omega_delta=p.omega_delta - h), tol)
        return (ep_plus - ep_minus) / (2.0 * h)

    d = (4.0 * central(step / 2.0) - central(step)) / 3.0
    return abs(d)


def ep_sensitivity(p: PtEpParams, tol: float = DEFAULT_TOL) -> float:
    """Overall sensitivity sqrt(Var[E_res]) / |dE_res/d omega_delta|."""
    pj, pg = pj_pgamma(propagate_period(p, tol=tol))
    var = response_variance(pj, pg, p.C0, p.nu, p.T)
    chi = ep_susceptibility(p, tol=tol)
    if chi == 0.0:
        return float("inf")
    return math.sqrt(var) / chi


def hermitian_bound_ep(p: PtEpParams) -> EpHermitianBound:
    """Uncertainty bound of the Hermitian counterpart coupling to the drive.

    The spectral width of the drive derivative is delta * s * |sin(w_d s)|,
    integrated over one period by adaptive quadrature with the kink points
    of |sin| supplied explicitly.  For w_d T <= pi the integral reduces to
    delta [sin(w_d T) - w_d T cos(w_d T)] / w_d².
    """
    if p.delta == 0.0:
        return EpHermitianBound(bound=float("inf"), as_printed=float("inf"))
    wd, period = p.omega_delta, p.T
    kinks = [k * math.pi / wd for k in range(1, int(wd * period / math.pi) + 1)
             if k * math.pi / wd < period]
    integral, _ = quad(lambda s: p.delta * s * abs(math.sin(wd * s)), 0.0, period,
                       points=kinks or None, epsabs=1e-13, epsrel=1e-10, limit=200)
    bound = 1.0 / (math.sqrt(p.nu) * integral)
    shape = math.sin(wd * period) - wd * period * math.cos(wd * period)
    as_printed = wd**4 / (math.sqrt(p.nu) * p.delta**2 * shape**2) if shape != 0 else float("inf")
    return EpHermitianBound(bound=bound, as_printed=as_printed)


def _scan_row(base: PtEpParams, wd: float, tol: float) -> EpScanRow:
    p = replace(base, omega_delta=wd)
    pj, pg = pj_pgamma(propagate_period(p, tol=tol))
    diff = pj - pg
    bound = hermitian_bound_ep(p).bound
    if not (DIFF_FLOOR < diff < 1.0 - DIFF_FLOOR):
        return EpScanRow(
            omega_delta=wd, PJ=pj, PGamma=pg, E_res=float("nan"),
            var_E=float("nan"), chi_E=float("nan"), sensitivity=float("nan"),
            hermitian_bound=bound,
            excluded_reason=f"P_J - P_Gamma = {diff:.6g} outside usable range")
    e_res = response_energy(pj, pg, p.T)
    var = response_variance(pj, pg, p.C0, p.nu, p.T)
    try:
        chi = ep_susceptibility(p, tol=tol)
    except DomainError:
        return EpScanRow(
            omega_delta=wd, PJ=pj, PGamma=pg, E_res=e_res,
            var_E=var, chi_E=float("nan"), sensitivity=float("nan"),
            hermitian_bound=bound,
            excluded_reason="susceptibility stencil leaves the real-response region")
    sens = math.sqrt(var) / chi if chi > 0 else float("inf")
    return EpScanRow(
        omega_delta=wd, PJ=pj, PGamma=pg, E_res=e_res, var_E=var,
        chi_E=chi, sensitivity=sens, hermitian_bound=bound)


def scan(base: PtEpParams, omega_delta_grid, tol: float = DEFAULT_TOL,
         threads: int = 1) -> list[EpScanRow]:
    """Evaluate the full measurement chain on a grid of omega_delta values.

    Grid points whose P_J - P_Gamma falls outside (DIFF_FLOOR, 1 - DIFF_FLOOR),
    or whose susceptibility stencil leaves that region, are flagged with a
    reason and carry NaN in the derived columns instead of being dropped.
    Rows are independent; with threads > 1 they are evaluated concurrently
    and assembled in grid order.
    """
    grid = np.asarray(omega_delta_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("omega_delta grid must be non-empty")
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda wd: _scan_row(base, float(wd), tol), grid))
    return [_scan_row(base, float(wd), tol) for wd in grid]
