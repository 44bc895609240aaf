"""Single-qubit pseudo-Hermitian sensor realized by a dilated two-qubit system.

The non-Hermitian two-level dynamics is simulated exactly by unitary
evolution of an ancilla+system pair with a specific probe state, conditioned
on the ancilla staying in |0>.  This module carries both descriptions (the
effective two-level closed forms and the 4-dim dilation), the projection
noise sensitivity of the population measurement, the closed-form QFI and its
rate, and the sensitivity bound of the Hermitian counterpart.

Basis ordering for the two-qubit space is kron(ancilla, system):
index 0 = |0_a 0_s>, 1 = |0_a 1_s>, 2 = |1_a 0_s>, 3 = |1_a 1_s>.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .evolution import DEFAULT_TOL, HamiltonianFamily, propagate
from .noise import GRADIENT_FLOOR, binomial_variance
from .operators import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, expm_hermitian, tensor
from .qfi import qfi_pure

SWEEP_COLUMNS = ("lam", "S", "chi", "P1", "dP1_dlam", "sensitivity",
                 "qfi_closed", "qfi_numeric", "rate_closed", "hermitian_bound")


@dataclass(frozen=True)
class PseudoHermitianParams:
    """Dilation parameter epsilon, qubit frequency omega, encoded parameter lam."""

    epsilon: float
    omega: float
    lam: float = 0.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive (epsilon = 0 coalesces the probe)")
        if self.omega <= 0:
            raise DomainError("omega must be positive")

    @property
    def b(self) -> float:
        e = self.epsilon
        return 4.0 * self.omega * e * (1.0 + e) / (1.0 + 2.0 * e)

    @property
    def c(self) -> float:
        e = self.epsilon
        return 2.0 * self.omega * math.sqrt(e * (1.0 + e)) / (1.0 + 2.0 * e)

    @property
    def Omega(self) -> float:
        """Level splitting sqrt((lam+b)² + c²) of each decoupled block."""
        return math.hypot(self.lam + self.b, self.c)

    @property
    def delta_lam(self) -> float:
        """Asymmetry (lam + 2 eps omega)/Omega of the effective two-level model."""
        return (self.lam + 2.0 * self.epsilon * self.omega) / self.Omega

    @property
    def tau(self) -> float:
        """Protocol time pi/(4 omega sqrt(eps(1+eps))), a quarter period at lam=0."""
        return math.pi / (4.0 * self.omega * math.sqrt(self.epsilon * (1.0 + self.epsilon)))


@dataclass(frozen=True)
class SweepRow:
    lam: float
    S: float
    chi: float
    P1: float
    dP1_dlam: float
    sensitivity: float
    qfi_closed: float
    qfi_numeric: float
    rate_closed: float
    hermitian_bound: float


def dilated_hamiltonian(p: PseudoHermitianParams) -> np.ndarray:
    """(b + lam) I⊗sigma_x - c sigma_y⊗sigma_y, the dilated two-qubit Hamiltonian."""
    return (p.b + p.lam) * tensor(ID2, SIGMA_X) - p.c * tensor(SIGMA_Y, SIGMA_Y)


def hamiltonian_family(epsilon: float, omega: float) -> HamiltonianFamily:
    """The dilated Hamiltonian as a family over the encoded parameter."""
    dsx = tensor(ID2, SIGMA_X)

    def evaluate(lam, t):
        return dilated_hamiltonian(PseudoHermitianParams(epsilon, omega, lam))

    return HamiltonianFamily(dim=4, evaluate=evaluate, evaluate_dlambda=lambda lam, t: dsx)


def probe_state(epsilon: float) -> np.ndarray:
    """Probe (sqrt((1+e)/(1+2e))|0>_a + sqrt(e/(1+2e))|1>_a) ⊗ |0>_s."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    a0 = math.sqrt((1.0 + epsilon) / (1.0 + 2.0 * epsilon))
    a1 = math.sqrt(epsilon / (1.0 + 2.0 * epsilon))
    return np.array([a0, 0.0, a1, 0.0], dtype=complex)


def two_level_population(p: PseudoHermitianParams, t: float) -> float:
    """Normalized population S = 1/[1 + delta_lam² tan²(Omega t)] in |0>_s.

    Evaluated as cos²/(cos² + delta² sin²), which extends continuously
    through the tan poles (S -> 0 there for delta_lam != 0, S = 1 when the
    asymmetry vanishes and the state never leaves |0>_s).
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    cs = math.cos(p.Omega * t)
    sn = math.sin(p.Omega * t)
    num = cs * cs
    den = num + (p.delta_lam * sn) ** 2
    if den < 1e-300:
        return 1.0  # delta_lam == 0 and cos == 0: population never left |0>_s
    return num / den


def _evolved_probe(p: PseudoHermitianParams, t: float) -> np.ndarray:
    return expm_hermitian(dilated_hamiltonian(p), t) @ probe_state(p.epsilon)


def postselection_success(p: PseudoHermitianParams, t: float) -> float:
    """Probability of finding the ancilla in |0>_a after evolving for t."""
    psi = _evolved_probe(p, t)
    return float(abs(psi[0]) ** 2 + abs(psi[1]) ** 2)


def conditional_population_from_dilation(p: PseudoHermitianParams, t: float) -> float:
    """P(|0_s>) conditioned on the ancilla in |0_a>, from the 4-dim evolution.

    Equals two_level_population up to numerical error (dilation correctness).
    Returns NaN when the conditioning probability is below 1e-14 (undefined).
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    psi = _evolved_probe(p, t)
    p00 = abs(psi[0]) ** 2
    p01 = abs(psi[1]) ** 2
    if p00 + p01 < 1e-14:
        return float("nan")
    return p00 / (p00 + p01)


def p1_closed(p: PseudoHermitianParams, t: float) -> float:
    """Closed-form probability of |0_a 0_s>: (1+e)/(1+2e) cos²(t sqrt(radicand)).

    The radicand lam² + 8e(1+e) lam w/(1+2e) + 4e(1+e) w² equals
    (lam+b)² + c² identically, hence is never negative; the guard is kept
    as a construction check.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    e, w, lam = p.epsilon, p.omega, p.lam
    radicand = lam * lam + 8.0 * e * (1.0 + e) * lam * w / (1.0 + 2.0 * e) + 4.0 * e * (1.0 + e) * w * w
    if radicand < 0:
        raise DomainError(f"negative radicand {radicand:g} at lam={lam:g}")
    return (1.0 + e) / (1.0 + 2.0 * e) * math.cos(t * math.sqrt(radicand)) ** 2


def _richardson_dlam(f, p: PseudoHermitianParams, t: float, step: float | None) -> float:
    if step is None:
        step = 1e-5 * max(1.0, abs(p.lam))

    def central(h):
        fp = f(PseudoHermitianParams(p.epsilon, p.omega, p.lam + h), t)
        fm = f(PseudoHermitianParams(p.epsilon, p.omega, p.lam - h), t)
        return (fp - fm) / (2.0 * h)

    return (4.0 * central(step / 2.0) - central(step)) / 3.0


def susceptibility(p: PseudoHermitianParams, t: float, step: float | None = None) -> float:
    """chi_s = dS/dlam by Richardson-extrapolated central difference."""
    return _richardson_dlam(two_level_population, p, t, step)


def p1_slope(p: PseudoHermitianParams, t: float, step: float | None = None) -> float:
    """dP1/dlam by Richardson-extrapolated central difference of p1_closed."""
    return _richardson_dlam(p1_closed, p, t, step)


def sensitivity(p: PseudoHermitianParams, t: float, nu: int, step: float | None = None) -> float:
    """Projection-noise sensitivity sqrt(Var[P1])/|dP1/dlam| of the P1 measurement.

    Returns +inf when the slope vanishes but the variance does not, and NaN
    at exact dip points where both vanish (0/0, excluded from minima).
    """
    p1 = p1_closed(p, t)
    var = binomial_variance(p1, nu)
    slope = p1_slope(p, t, step)
    if abs(slope) < GRADIENT_FLOOR:
        if var < GRADIENT_FLOOR**2:
            return float("nan")
        return float("inf")
    return math.sqrt(var) / abs(slope)


def generator_closed(p: PseudoHermitianParams, t: float) -> np.ndarray:
    """Closed-form transformed local generator of the dilated system.

    Block form P(up_y)⊗h1 + P(down_y)⊗h2 over the ancilla sigma_y
    eigenprojectors, with h1 = hx sx + hy sy + hz sz and h2 = hx sx - hy sy
    - hz sz.
    """
    om = p.Omega
    lb = p.lam + p.b
    hx = t * lb**2 / om**2 + p.c**2 * math.sin(2.0 * om * t) / (2.0 * om**3)
    hy = p.c * lb / om**2 * (math.sin(2.0 * om * t) / (2.0 * om) - t)
    hz = -p.c * math.sin(om * t) ** 2 / om**2
    h1 = hx * SIGMA_X + hy * SIGMA_Y + hz * SIGMA_Z
    h2 = hx * SIGMA_X - hy * SIGMA_Y - hz * SIGMA_Z
    proj_up = 0.5 * (ID2 + SIGMA_Y)
    proj_dn = 0.5 * (ID2 - SIGMA_Y)
    return tensor(proj_up, h1) + tensor(proj_dn, h2)


def qfi_closed(p: PseudoHermitianParams, t: float) -> float:
    """Closed-form QFI 4(b+lam)² t²/Omega² + 4 c² sin²(Omega t)/Omega⁴."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    om = p.Omega
    lb = p.lam + p.b
    return 4.0 * lb**2 * t**2 / om**2 + 4.0 * p.c**2 * math.sin(om * t) ** 2 / om**4


def qfi_rate_closed(p: PseudoHermitianParams, t: float) -> float:
    """Closed-form d sqrt(F)/dt; lies in [-2, 2] and tends to 2 as t -> 0."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    om = p.Omega
    cos2 = ((p.lam + p.b) / om) ** 2
    sin2 = (p.c / om) ** 2
    x = om * t
    num = cos2 + sin2 * np.sinc(2.0 * x / math.pi)
    den = math.sqrt(cos2 + sin2 * np.sinc(x / math.pi) ** 2)
    return float(2.0 * num / den)


def qfi_numeric(p: PseudoHermitianParams, t: float, tol: float = DEFAULT_TOL) -> float:
    """QFI from the numerically propagated generator (independent of closed forms)."""
    family = hamiltonian_family(p.epsilon, p.omega)
    grid = np.array([0.0, t]) if t > 0 else np.array([0.0])
    record = propagate(family, p.lam, grid, tol=tol)
    return qfi_pure(record.h[-1], probe_state(p.epsilon))


def hermitian_bound(t: float, nu: int) -> float:
    """Sensitivity bound 1/(2 sqrt(nu) t) of the Hermitian counterpart."""
    if t <= 0:
        raise DomainError("t must be positive")
    if nu < 1:
        raise DomainError("trial count must be >= 1")
    return 1.0 / (2.0 * math.sqrt(nu) * t)


def _sweep_row(epsilon: float, omega: float, lam: float, nu: int, tol: float) -> SweepRow:
    p = PseudoHermitianParams(epsilon, omega, lam)
    t = p.tau
    return SweepRow(
        lam=lam,
        S=two_level_population(p, t),
        chi=susceptibility(p, t),
        P1=p1_closed(p, t),
        dP1_dlam=p1_slope(p, t),
        sensitivity=sensitivity(p, t, nu),
        qfi_closed=qfi_closed(p, t),
        qfi_numeric=qfi_numeric(p, t, tol=tol),
        rate_closed=qfi_rate_closed(p, t),
        hermitian_bound=hermitian_bound(t, nu),
    )


def sweep(epsilon: float, omega: float, lam_grid, nu: int = 1,
          tol: float = DEFAULT_TOL, threads: int = 1) -> list[SweepRow]:
    """One row per lam at the protocol time t = tau(epsilon, omega).

    tau is always recomputed from (epsilon, omega); rows with an undefined
    sensitivity carry NaN rather than being dropped.  Rows are independent,
    so threads > 1 evaluates them concurrently; output order follows the
    grid regardless.
    """
    lam_grid = np.asarray(lam_grid, dtype=float)
    if lam_grid.size == 0:
        raise DomainError("lam grid must be non-empty")
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda lam: _sweep_row(epsilon, omega, float(lam), nu, tol),
                                 lam_grid))
    return [_sweep_row(epsilon, omega, float(lam), nu, tol) for lam in lam_grid]
