"""Canonical-ensemble thermodynamics of the walled particle.

Exact truncated sums over a Spectrum (or any explicit level list), the
closed-form zero-field results, the universal Dirichlet/Neumann curves in
the variable y = beta * F^(2/3), the classical high-temperature limit, the
weak-field resonance predictors built on the Lambert W function, and a
grid-scan extremum locator.

Every Boltzmann weight is formed as exp(-beta*(E_n - E_0)) so the attractive
wall's negative ground level can never overflow the sums; means and
variances are reconstructed exactly from the shifted moments.  The heat
capacity is the fluctuation form c = beta^2 * (<E^2> - <E>^2), which equals
-beta^2 d<E>/dbeta for these sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .ladder import BOLTZ, BOLTZ_KIND, array_sums, ladder_sums
from .spectrum import Spectrum, WallKind, WallSpec, build_spectrum
from .specfun import lambert_w

__all__ = [
    "ThermoPoint",
    "ExtremumReport",
    "PartitionResult",
    "partition_function",
    "mean_energy",
    "heat_capacity",
    "thermo_point",
    "zero_field_attractive",
    "zero_field_free",
    "classical_limit",
    "universal_dn_curve",
    "resonance_predictors",
    "weak_field_composite",
    "find_extrema",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
WEAK_FIELD_MAX = 1e-2          # contract bound for the asymptotic predictors
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ThermoPoint:
    """One evaluated canonical state (heat capacity in units of k_B)."""

    beta: float
    mean_energy: float
    heat_capacity: float


@dataclass(frozen=True)
class ExtremumReport:
    """Located heat-capacity extrema on a temperature scan."""

    beta_inv_at_max: float | None = None
    c_max: float | None = None
    beta_inv_at_min: float | None = None
    c_min: float | None = None


class PartitionResult(NamedTuple):
    """Ground-shifted partition sum: Z = z_shifted * exp(-beta * shift)."""

    z_shifted: float
    shift: float

    def log_z(self, beta: float) -> float:
        return math.log(self.z_shifted) - beta * self.shift


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    return beta


def _moments(source, beta: float,
             weights: np.ndarray | None = None) -> tuple[float, float, float, float]:
    """(S0, S1, S2, E0) with S_p = sum (E-E0)^p exp(-beta(E-E0))."""
    if isinstance(source, Spectrum):
        if weights is not None:
            raise DomainError("weights are only supported for explicit level lists")
        s0, s1, s2 = ladder_sums(source, beta, BOLTZ_KIND, BOLTZ, powers=(0, 1, 2))
        return s0, s1, s2, source.e0
    levels = np.asarray(source, dtype=float)
    s0, s1, s2 = array_sums(levels, beta, powers=(0, 1, 2), weights=weights)
    return s0, s1, s2, float(levels.min())


def partition_function(source, beta: float,
                       weights: np.ndarray | None = None) -> PartitionResult:
    """Ground-shifted partition sum over a Spectrum or explicit level list.

    Returns (z_shifted, shift) with Z = z_shifted * e^{-beta*shift}; the
    shift is the ground-state energy, factored out so a bound state at
    E ~ -1 cannot overflow e^{-beta*E} at low temperature.  Optional
    ``weights`` (level degeneracies or quadrature weights for a discretized
    continuum) are honored for explicit level lists.
    """
    beta = _check_beta(beta)
    s0, _, _, e0 = _moments(source, beta, weights)
    return PartitionResult(z_shifted=s0, shift=e0)


def mean_energy(source, beta: float) -> float:
    """Canonical mean energy <E> = sum E_n w_n / sum w_n."""
    beta = _check_beta(beta)
    s0, s1, _, e0 = _moments(source, beta)
    return e0 + s1 / s0


def heat_capacity(source, beta: float) -> float:
    """Canonical heat capacity c = beta^2 (<E^2> - <E>^2), per particle."""
    beta = _check_beta(beta)
    s0, s1, s2, _ = _moments(source, beta)
    m = s1 / s0
    return beta * beta * (s2 / s0 - m * m)


def thermo_point(source, beta: float, n_particles: int = 1) -> ThermoPoint:
    """Mean energy and heat capacity; both scale linearly with the number of
    noninteracting particles."""
    beta = _check_beta(beta)
    s0, s1, s2, e0 = _moments(source, beta)
    m = s1 / s0
    return ThermoPoint(
        beta=beta,
        mean_energy=n_particles * (e0 + m),
        heat_capacity=n_particles * beta * beta * (s2 / s0 - m * m),
    )


# ---------------------------------------------------------------------------
# zero-field closed forms
# ---------------------------------------------------------------------------

def zero_field_attractive(beta: float) -> ThermoPoint:
    """Zero-field attractive wall: bound level at -1 plus the free
    continuum, Z = e^beta + sqrt(2 pi / beta).

    The heat capacity is the analytic second log-derivative of Z, arranged
    so the near-cancellation at low temperature is done symbolically:
    with q = sqrt(2 pi / beta) e^{-beta},

        <E> = -(1 - q/(2 beta)) / (1 + q)
        c   = beta^2 (q + a + a q + 2 b - b^2) / (1+q)^2,
              a = 3q/(4 beta^2),  b = q/(2 beta).
    """
    beta = _check_beta(beta)
    q = _SQRT_2PI / math.sqrt(beta) * math.exp(-beta) if beta < 700 else 0.0
    a = 0.75 * q / (beta * beta)
    b = 0.5 * q / beta
    e = -(1.0 - b) / (1.0 + q)
    c = beta * beta * (q + a + a * q + 2.0 * b - b * b) / (1.0 + q) ** 2
    return ThermoPoint(beta=beta, mean_energy=e, heat_capacity=c)


def zero_field_free(beta: float) -> ThermoPoint:
    """Zero-field hard, reflecting, or repulsive wall: free-particle values
    <E> = 1/(2 beta), c = 1/2."""
    beta = _check_beta(beta)
    return ThermoPoint(beta=beta, mean_energy=0.5 / beta, heat_capacity=0.5)


def classical_limit(beta: float, field: float) -> tuple[float, float, float]:
    """Classical configurational quantities in the linear potential:
    Z_pot = 1/(beta F), <V> = 1/beta, c_pot = 1.

    Together with the kinetic 1/2 this makes the total high-temperature
    specific heat 3/2.
    """
    beta = _check_beta(beta)
    if field <= 0.0:
        raise DomainError(f"field must be > 0, got {field}")
    return 1.0 / (beta * field), 1.0 / beta, 1.0


# ---------------------------------------------------------------------------
# universal Dirichlet/Neumann curves
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _unit_spectrum(kind: WallKind) -> Spectrum:
    return build_spectrum(WallSpec(kind, 1.0), count=64)


def universal_dn_curve(y: float, kind: WallKind) -> tuple[float, float]:
    """(<E>/F^(2/3), c) for the hard or reflecting wall as functions of the
    single collapsed variable y = beta * F^(2/3)."""
    if kind not in (WallKind.DIRICHLET, WallKind.NEUMANN):
        raise DomainError(f"universal curve is defined for Dirichlet/Neumann, got {kind}")
    y = _check_beta(y)
    sp = _unit_spectrum(kind)
    s0, s1, s2, e0 = _moments(sp, y)
    m = s1 / s0
    return e0 + m, y * y * (s2 / s0 - m * m)


# ---------------------------------------------------------------------------
# weak-field resonance analytics
# ---------------------------------------------------------------------------

def _check_weak_field(field: float) -> float:
    field = float(field)
    if not 0.0 < field <= WEAK_FIELD_MAX:
        raise DomainError(
            f"weak-field asymptotics require 0 < field <= {WEAK_FIELD_MAX}, got {field!r}")
    return field


def resonance_predictors(field: float) -> tuple[float, float, float]:
    """Lambert-W predictors for the attractive wall's weak-field resonance.

    Returns (beta at which <E> crosses zero, beta of the heat-capacity
    maximum, predicted peak height beta_max^2/4).  The two temperatures
    solve beta^{5/2} e^beta = 3/(4 sqrt(pi) F) and
    2 sqrt(pi) F beta^{3/2} e^beta = 1 exactly.
    """
    field = _check_weak_field(field)
    a_zero = 3.0 / (4.0 * _SQRT_PI * field)
    beta_zero = 2.5 * lambert_w(0.4 * a_zero ** 0.4)
    beta_max = 1.5 * lambert_w((2.0 / 3.0) * (0.5 / (_SQRT_PI * field)) ** (2.0 / 3.0))
    return beta_zero, beta_max, 0.25 * beta_max * beta_max


def weak_field_composite(beta: float, field: float) -> tuple[float, float]:
    """Closed-form weak-field mean energy and heat capacity of the
    attractive wall (split-off level plus quasi-continuum):

        <E> = (-e^beta + (3/4)/(sqrt(pi) F beta^{5/2}))
              / (e^beta + (1/2)/(sqrt(pi) F beta^{3/2}))
        c   = (1/2) (3 + u (4 beta^2 + 12 beta + 15)) / (1 + 2u)^2,
              u = sqrt(pi) F beta^{3/2} e^beta.

    Valid for field <= 1e-2 and beta * field^(2/3) <= 0.1.
    """
    beta = _check_beta(beta)
    field = _check_weak_field(field)
    if beta * field ** (2.0 / 3.0) > 0.1:
        raise DomainError(
            f"composite form needs beta * field^(2/3) <= 0.1, got {beta * field ** (2/3):.3g}")
    emb = math.exp(-beta) if beta < 700 else 0.0
    e = ((-1.0 + 0.75 * emb / (_SQRT_PI * field * beta ** 2.5))
         / (1.0 + 0.5 * emb / (_SQRT_PI * field * beta ** 1.5)))
    ln_u = math.log(_SQRT_PI * field) + 1.5 * math.log(beta) + beta
    poly = 4.0 * beta * beta + 12.0 * beta + 15.0
    if ln_u < 250.0:
        u = math.exp(ln_u)
        c = 0.5 * (3.0 + u * poly) / (1.0 + 2.0 * u) ** 2
    else:  # u enormous: c -> poly/(8u)
        c = math.exp(math.log(poly / 8.0) - ln_u)
    return e, c


# ---------------------------------------------------------------------------
# extremum location
# ---------------------------------------------------------------------------

def _golden(fn: Callable[[float], float], lo: float, hi: float,
            sign: float, tol: float = 1e-6) -> tuple[float, float]:
    """Golden-section extremum of sign*fn on [lo, hi] (ln-beta coordinates)."""
    a, b = lo, hi
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc = sign * fn(math.exp(c))
    yd = sign * fn(math.exp(d))
    while h > tol:
        if yc > yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INV_PHI2 * h
            yc = sign * fn(math.exp(c))
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INV_PHI * h
            yd = sign * fn(math.exp(d))
    x = 0.5 * (a + b)
    beta = math.exp(x)
    return beta, fn(beta)


def find_extrema(source, beta_grid: Sequence[float]) -> ExtremumReport:
    """Scan c(beta) on a monotone beta grid and refine every interior
    extremum by golden-section search (relative 1e-6 in beta).

    ``source`` is a Spectrum, an explicit level list, or a callable
    c(beta).  The report carries the global maximum and minimum found; a
    grid without interior extrema yields an empty report (not an error).
    """
    betas = np.asarray(list(beta_grid), dtype=float)
    if betas.ndim != 1 or len(betas) < 3:
        raise DomainError("beta_grid must be monotone with at least 3 points")
    d = np.diff(betas)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise DomainError("beta_grid must be strictly monotone")

    if callable(source):
        c_fn = source
    else:
        c_fn = lambda b: heat_capacity(source, b)  # noqa: E731

    cs = np.array([c_fn(b) for b in betas])
    best_max: tuple[float, float] | None = None
    best_min: tuple[float, float] | None = None
    for i in range(1, len(betas) - 1):
        if cs[i] > cs[i - 1] and cs[i] > cs[i + 1]:
            lo, hi = sorted((math.log(betas[i - 1]), math.log(betas[i + 1])))
            beta, c = _golden(c_fn, lo, hi, +1.0)
            if best_max is None or c > best_max[1]:
                best_max = (beta, c)
        elif cs[i] < cs[i - 1] and cs[i] < cs[i + 1]:
            lo, hi = sorted((math.log(betas[i - 1]), math.log(betas[i + 1])))
            beta, c = _golden(c_fn, lo, hi, -1.0)
            if best_min is None or c < best_min[1]:
                best_min = (beta, c)
    return ExtremumReport(
        beta_inv_at_max=1.0 / best_max[0] if best_max else None,
        c_max=best_max[1] if best_max else None,
        beta_inv_at_min=1.0 / best_min[0] if best_min else None,
        c_min=best_min[1] if best_min else None,
    )
