"""Fermi-Dirac and Bose-Einstein thermodynamics over a wall spectrum.

The chemical potential is solved from the particle-number sum

    N = sum_n 1/(e^{(E_n - mu) beta} +- 1)

(upper sign fermions, lower bosons; at most one fermion per level, spin
degeneracy 1).  Internally the solve runs in the shifted variable
gamma = beta*(E_0 - mu), which is exactly the quantity that must stay
positive for bosons and keeps every exponent well conditioned when mu
crowds the ground level to within 1e-14.

The heat capacity uses the implicit-function temperature derivative of mu:
with w_n = e^{x_n}/(e^{x_n} +- 1)^2 and x_n = beta (E_n - mu),

    beta dmu/dbeta = sum (E_n - mu) w_n / sum w_n,

which collapses the full expression to a manifestly nonnegative variance
form c = beta^2 (B2 - B1^2/B0) over the w-weighted moments about mu.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SolverError
from .ladder import BOSE, DIST, FERMI, OCC, ladder_sums
from .spectrum import Spectrum
from .specfun import lambert_w

__all__ = [
    "Statistics",
    "EnsembleSpec",
    "GcPoint",
    "CondensateReport",
    "solve_mu",
    "gc_point",
    "fd_plateau",
    "fd_single_peak",
    "asymptotic_mu_cn",
    "be_critical",
    "ground_occupation",
]

_SQRT_PI = math.sqrt(math.pi)
WEAK_FIELD_MAX = 1e-2
_N_RESIDUAL = 1e-10


class Statistics(enum.Enum):
    FERMI_DIRAC = "fd"
    BOSE_EINSTEIN = "be"


@dataclass(frozen=True)
class EnsembleSpec:
    """Grand-canonical ensemble: statistics plus particle number N >= 1."""

    statistics: Statistics
    n_particles: int

    def __post_init__(self) -> None:
        if not isinstance(self.statistics, Statistics):
            raise DomainError(f"statistics must be a Statistics value, got {self.statistics!r}")
        n = int(self.n_particles)
        if n < 1 or n != self.n_particles:
            raise DomainError(f"n_particles must be a positive integer, got {self.n_particles!r}")
        object.__setattr__(self, "n_particles", n)

    @property
    def sign(self) -> int:
        return FERMI if self.statistics is Statistics.FERMI_DIRAC else BOSE


@dataclass(frozen=True)
class GcPoint:
    """One evaluated grand-canonical state."""

    beta: float
    mu: float
    mean_energy: float
    heat_capacity_per_particle: float
    n0: float | None = None  # ground-level fraction, Bose systems only


@dataclass(frozen=True)
class CondensateReport:
    """Condensation threshold of a Bose system."""

    beta_cr: float
    t_cr: float
    asymptotic_beta_cr: float


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    return beta


# ---------------------------------------------------------------------------
# chemical-potential solve in gamma = beta (E_0 - mu)
# ---------------------------------------------------------------------------

def _n_of_gamma(spectrum: Spectrum, beta: float, sign: int, gamma: float) -> float:
    return ladder_sums(spectrum, beta, OCC, sign, gamma=gamma, powers=(0,))[0]


def _dn_dgamma(spectrum: Spectrum, beta: float, sign: int, gamma: float) -> float:
    # dN/dgamma = -sum w_n
    return -ladder_sums(spectrum, beta, DIST, sign, gamma=gamma, powers=(0,))[0]


def _newton_polish(spectrum: Spectrum, beta: float, sign: int, n_target: float,
                   gamma: float, lo: float, hi: float) -> float:
    for _ in range(8):
        resid = _n_of_gamma(spectrum, beta, sign, gamma) - n_target
        if abs(resid) <= 0.1 * _N_RESIDUAL * n_target:
            break
        slope = _dn_dgamma(spectrum, beta, sign, gamma)
        if slope == 0.0:
            break
        step = resid / slope
        nxt = gamma - step
        gamma = nxt if lo < nxt < hi else max(lo, min(hi, 0.5 * (lo + hi)))
    return gamma


def _bisect_gamma(spectrum: Spectrum, beta: float, sign: int, n_target: float,
                  lo: float, hi: float, log_space: bool) -> float:
    """Bisection on the strictly decreasing N(gamma), then Newton polish."""
    f = math.log if log_space else (lambda v: v)
    g = math.exp if log_space else (lambda v: v)
    a, b = f(lo), f(hi)
    for _ in range(200):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        if _n_of_gamma(spectrum, beta, sign, g(m)) > n_target:
            a = m
        else:
            b = m
        if abs(b - a) < 1e-15 * max(1.0, abs(a), abs(b)):
            break
    gamma = g(0.5 * (a + b))
    return _newton_polish(spectrum, beta, sign, n_target, gamma, lo, hi)


def _solve_gamma(spectrum: Spectrum, beta: float, ensemble: EnsembleSpec,
                 hint: float | None = None) -> float:
    """gamma = beta (E_0 - mu) satisfying the particle-number sum."""
    n_target = float(ensemble.n_particles)
    sign = ensemble.sign

    if sign == BOSE:
        lo = max(1e-18, beta * 1e-14 * max(1.0, abs(spectrum.e0)))
        hi = max(1.0, 4.0 * lo)
        if hint is not None and lo < hint:
            hi = max(hi, 4.0 * hint)
        for _ in range(200):
            if _n_of_gamma(spectrum, beta, sign, hi) < n_target:
                break
            hi *= 4.0
        else:
            raise SolverError("bose gamma bracket expansion failed")
        if _n_of_gamma(spectrum, beta, sign, lo) < n_target:
            raise SolverError(
                f"bose occupation at the gamma floor is below N={n_target}")
        if hint is not None and lo < hint < hi:
            gamma = _newton_polish(spectrum, beta, sign, n_target, hint, lo, hi)
            if abs(_n_of_gamma(spectrum, beta, sign, gamma) - n_target) <= _N_RESIDUAL * n_target:
                return gamma
        return _bisect_gamma(spectrum, beta, sign, n_target, lo, hi, log_space=True)

    # fermions: mu may sit anywhere; bracket around the lowest N+1 levels
    pad = 50.0 + math.log(n_target + 2.0)
    e_hi = spectrum.level(ensemble.n_particles)
    lo = -(beta * (e_hi - spectrum.e0) + pad)  # mu up to E_N + pad/beta
    hi = pad                                   # mu down to E_0 - pad/beta
    if hint is not None and lo < hint < hi:
        gamma = _newton_polish(spectrum, beta, sign, n_target, hint, lo, hi)
        if abs(_n_of_gamma(spectrum, beta, sign, gamma) - n_target) <= _N_RESIDUAL * n_target:
            return gamma
    return _bisect_gamma(spectrum, beta, sign, n_target, lo, hi, log_space=False)


def solve_mu(spectrum: Spectrum, beta: float, ensemble: EnsembleSpec,
             hint_gamma: float | None = None) -> float:
    """Chemical potential with |sum occupations - N| <= 1e-10 N.

    The occupation sum is strictly increasing in mu for both statistics, so
    the bracketed solve cannot miss; for bosons the bracket keeps mu < E_0
    strictly.
    """
    beta = _check_beta(beta)
    gamma = _solve_gamma(spectrum, beta, ensemble, hint_gamma)
    _validate_gamma(spectrum, beta, ensemble, gamma)
    return spectrum.e0 - gamma / beta


def _validate_gamma(spectrum: Spectrum, beta: float, ensemble: EnsembleSpec,
                    gamma: float) -> None:
    n = _n_of_gamma(spectrum, beta, ensemble.sign, gamma)
    if abs(n - ensemble.n_particles) > _N_RESIDUAL * ensemble.n_particles:
        raise SolverError(
            f"particle-number residual {abs(n - ensemble.n_particles):.3e} "
            f"exceeds tolerance at beta={beta}, N={ensemble.n_particles}")
    if ensemble.sign == BOSE and gamma <= 0.0:
        raise SolverError("bose chemical potential must stay below the ground level")


def gc_point(spectrum: Spectrum, beta: float, ensemble: EnsembleSpec,
             hint_gamma: float | None = None) -> GcPoint:
    """Mean energy and specific heat per particle at one temperature.

    The returned state has been validated: the occupation sum reproduces N
    to 1e-10 relative, and mu < E_0 strictly for bosons.
    """
    beta = _check_beta(beta)
    sign = ensemble.sign
    n_target = float(ensemble.n_particles)
    gamma = _solve_gamma(spectrum, beta, ensemble, hint_gamma)
    _validate_gamma(spectrum, beta, ensemble, gamma)
    e0 = spectrum.e0
    mu = e0 - gamma / beta

    n_sum, m1 = ladder_sums(spectrum, beta, OCC, sign, gamma=gamma, powers=(0, 1))
    energy = m1 + e0 * n_sum

    # w-weighted moments about mu; moment offset E_0 - mu = gamma/beta
    b0, b1, b2 = ladder_sums(spectrum, beta, DIST, sign, gamma=gamma,
                             moment_offset=gamma / beta, powers=(0, 1, 2))
    c_total = beta * beta * (b2 - b1 * b1 / b0)

    n0 = None
    if sign == BOSE:
        n0 = 1.0 / math.expm1(gamma) / n_target
        if not 0.0 <= n0 <= 1.0 + 1e-9:
            raise SolverError(f"ground occupation {n0} escaped [0, 1]")
        n0 = min(n0, 1.0)  # clip the last-ulp overshoot of a full condensate
    return GcPoint(beta=beta, mu=mu, mean_energy=energy,
                   heat_capacity_per_particle=c_total / n_target, n0=n0)


def _gamma_hint_of(point: GcPoint, spectrum: Spectrum) -> float:
    return point.beta * (spectrum.e0 - point.mu)


# ---------------------------------------------------------------------------
# closed-form fermion results
# ---------------------------------------------------------------------------

def fd_plateau(n_particles: int) -> float:
    """Low-temperature shelf of the fermionic specific heat per particle,
    3 (N-1) / (2 N): the N-1 particles sitting in the dense positive levels
    are classical while the split-off one is frozen out."""
    if n_particles < 1:
        raise DomainError(f"n_particles must be >= 1, got {n_particles}")
    return 1.5 * (n_particles - 1) / n_particles


def _check_weak_field(field: float) -> float:
    field = float(field)
    if not 0.0 < field <= WEAK_FIELD_MAX:
        raise DomainError(
            f"weak-field asymptotics require 0 < field <= {WEAK_FIELD_MAX}, got {field!r}")
    return field


def fd_single_peak(field: float) -> tuple[float, float]:
    """Lambert-W predictor for the single-fermion heat-capacity peak of the
    attractive wall: beta solves 8 sqrt(pi) F beta^{3/2} e^beta = 1, and
    c_max = beta^2 / (sqrt(2) (sqrt(2)+1)^2)."""
    field = _check_weak_field(field)
    beta = 1.5 * lambert_w(1.0 / (6.0 * math.pi ** (1.0 / 3.0) * field ** (2.0 / 3.0)))
    c_max = beta * beta / (math.sqrt(2.0) * (math.sqrt(2.0) + 1.0) ** 2)
    return beta, c_max


def asymptotic_mu_cn(beta: float, field: float,
                     ensemble: EnsembleSpec) -> tuple[float, float]:
    """Weak-field closed forms for the attractive wall: the chemical
    potential from the two-term (bound level + quasi-continuum) particle
    balance, and the large-N specific heat per particle

        c_N = 3/2 + sqrt(pi) beta^{5/2} F (2 beta + 3) e^{-beta}
                    / (2 sqrt(pi) beta^{3/2} F N +- e^{-beta})^2.

    Valid for field <= 1e-2 and beta * field^(2/3) <= 0.1.  The fugacity is
    the root of  r z^2 +- z (1 + r e^{-beta} -+ N) -+ N e^{-beta} = 0 with
    r = 1/(2 sqrt(pi) beta^{3/2} F), evaluated in subtraction-free form; for
    bosons this is the root with mu < E_0.
    """
    beta = _check_beta(beta)
    field = _check_weak_field(field)
    if beta * field ** (2.0 / 3.0) > 0.1:
        raise DomainError(
            f"asymptotic form needs beta * field^(2/3) <= 0.1, got {beta * field ** (2/3):.3g}")
    n = float(ensemble.n_particles)
    r = 0.5 / (_SQRT_PI * beta ** 1.5 * field)
    emb = math.exp(-beta)
    if ensemble.sign == FERMI:
        b = 1.0 + r * emb - n
        r1 = math.sqrt(b * b + 4.0 * r * n * emb)
        z = 2.0 * n * emb / (r1 + b) if b >= 0.0 else (r1 - b) / (2.0 * r)
        denom = 2.0 * _SQRT_PI * beta ** 1.5 * field * n + emb
    else:
        s = 1.0 + r * emb + n
        r1 = math.sqrt(s * s - 4.0 * r * n * emb)
        z = 2.0 * n * emb / (s + r1)
        denom = 2.0 * _SQRT_PI * beta ** 1.5 * field * n - emb
    mu = math.log(z) / beta
    c_n = 1.5 + (_SQRT_PI * beta ** 2.5 * field * (2.0 * beta + 3.0) * emb
                 / (denom * denom))
    return mu, c_n


# ---------------------------------------------------------------------------
# Bose condensation
# ---------------------------------------------------------------------------

def _excited_occupation(spectrum: Spectrum, beta: float) -> float:
    """sum_{n>=1} 1/(e^{(E_n - E_0) beta} - 1): the excited-state capacity
    at mu = E_0."""
    return ladder_sums(spectrum, beta, OCC, BOSE, gamma=0.0,
                       powers=(0,), start_index=1)[0]


def asymptotic_beta_cr(field: float, n_particles: int) -> float:
    """Weak-field Lambert-W form of the condensation temperature:
    beta_cr = (3/2) W(4^(2/3) / (6 pi^(1/3) (N F)^(2/3)))."""
    arg = 4.0 ** (2.0 / 3.0) / (6.0 * math.pi ** (1.0 / 3.0)
                                * (n_particles * field) ** (2.0 / 3.0))
    return 1.5 * lambert_w(arg)


def be_critical(spectrum: Spectrum, n_particles: int) -> CondensateReport:
    """Largest temperature at which the condensate survives: beta_cr solves
    sum_{n>=1} 1/(e^{(E_n-E_0) beta} - 1) = N (chemical potential pinned at
    the ground level with no particles left in it)."""
    if n_particles < 1:
        raise DomainError(f"n_particles must be >= 1, got {n_particles}")
    n_target = float(n_particles)
    beta_a = asymptotic_beta_cr(spectrum.wall.field, n_particles)
    lo, hi = beta_a / 8.0, beta_a * 8.0
    for _ in range(200):
        if _excited_occupation(spectrum, lo) > n_target:
            break
        lo /= 4.0
    for _ in range(200):
        if _excited_occupation(spectrum, hi) < n_target:
            break
        hi *= 4.0
    a, b = math.log(lo), math.log(hi)
    for _ in range(200):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        if _excited_occupation(spectrum, math.exp(m)) > n_target:
            a = m
        else:
            b = m
        if b - a < 1e-14:
            break
    beta_cr = math.exp(0.5 * (a + b))
    for _ in range(6):  # Newton in beta: d/dbeta sum = -(1/beta) sum x w
        resid = _excited_occupation(spectrum, beta_cr) - n_target
        if abs(resid) <= 0.1 * _N_RESIDUAL * n_target:
            break
        d1 = ladder_sums(spectrum, beta_cr, DIST, BOSE, gamma=0.0,
                         powers=(0, 1), start_index=1)[1]
        slope = -d1  # d/dbeta sum occ(beta*Delta_n) = -sum Delta_n w_n
        if slope == 0.0:
            break
        beta_cr -= resid / slope
    resid = abs(_excited_occupation(spectrum, beta_cr) - n_target)
    if resid > _N_RESIDUAL * n_target:
        raise SolverError(f"condensation solve residual {resid:.3e} too large")
    return CondensateReport(beta_cr=beta_cr, t_cr=1.0 / beta_cr,
                            asymptotic_beta_cr=beta_a)


def ground_occupation(spectrum: Spectrum, beta: float, n_particles: int) -> float:
    """Bose ground-level fraction n_0 = N_0/N with N_0 = 1/(e^{(E_0-mu)beta}-1)."""
    ens = EnsembleSpec(Statistics.BOSE_EINSTEIN, n_particles)
    return gc_point(spectrum, beta, ens).n0
