"""
Observables Service - Populations, density of states, distribution fits and counting statistics
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.special import expit

from config import settings
from models.physics import OccupationSpectrum
from models.tables import CountingDistribution, FitResult, PopulationProfile
from services.spectrum import spectrum_for_pairs
from services.symfun import log_elementary, log_excluded_all
from utils.errors import DomainError, InfeasibleFillingError


logger = logging.getLogger(__name__)

# one Nelder-Mead iteration can overrun maxfev by its shrink step
NM_OVERSHOOT = 4
MIN_START_EVALS = 20


# === POPULATIONS ===

def populations(spectrum: OccupationSpectrum, N: int) -> PopulationProfile:
    """
    Per-mode populations n_j = N λ_j χ_{N−1}^{(j)}/χ_N

    Args:
        spectrum: Retained occupations
        N: Pair count

    Returns:
        PopulationProfile aligned with the spectrum modes
    """
    if N < 0:
        raise DomainError("pair count must be >= 0", {"N": N})
    log_lambdas = spectrum.log_lambdas
    if N == 0:
        return PopulationProfile(n=np.zeros(spectrum.J), lambdas=spectrum.lambdas, N=0, sum_residual=0.0)

    log_e = log_elementary(log_lambdas, N)
    if log_e[N] == -np.inf:
        raise InfeasibleFillingError(
            f"χ_{N} vanishes: {N} pairs do not fit in {spectrum.J} modes",
            {"N": N, "J": spectrum.J},
        )

    # N!·e and (N−1)!·e^{(j)} share the factorials up to the factor N
    n = np.exp(log_lambdas + log_excluded_all(log_lambdas, N) - log_e[N])
    residual = abs(math.fsum(n) - N)
    if residual > settings.SUM_RULE_TOL:
        logger.warning("population sum rule off by %.3e for N=%d", residual, N)
    return PopulationProfile(n=n, lambdas=spectrum.lambdas, N=N, sum_residual=residual)


def window_mean(profile: PopulationProfile, t: int) -> float:
    """⟨N_t⟩ = Σ_{j<t} n_j"""
    return math.fsum(profile.n[:t])


# === DENSITY OF STATES ===

def shell_degeneracy(kind: str, count: int) -> np.ndarray:
    """g_j for a 1D chain (all ones) or an isotropic 2D oscillator (j + 1)"""
    if kind == "1d":
        return np.ones(count, dtype=int)
    if kind == "2d":
        return np.arange(1, count + 1, dtype=int)
    raise DomainError(f"unknown degeneracy mode {kind!r}")


def _degeneracy(degeneracy: Optional[Sequence[int]], count: int) -> np.ndarray:
    if degeneracy is None:
        return np.ones(count, dtype=int)
    g = np.asarray(degeneracy)
    if g.shape != (count,) or np.any(g < 1) or np.any(g != np.round(g)):
        raise DomainError("degeneracy must hold one integer >= 1 per index", {"count": count})
    return g.astype(int)


def dos(profile: PopulationProfile, degeneracy: Optional[Sequence[int]] = None) -> np.ndarray:
    """DOS_j = g_j·n_j"""
    g = _degeneracy(degeneracy, profile.n.size)
    return g * profile.n


def energy_axis(count: int) -> np.ndarray:
    """Oscillator levels ε_j = j + offset (offset ½ by default)"""
    return np.arange(count, dtype=float) + settings.ENERGY_OFFSET


def fd_model(energies: np.ndarray, degeneracy: np.ndarray, j_mu: float, T: float) -> np.ndarray:
    return degeneracy * expit(-(energies - j_mu) / T)


def be_model(energies: np.ndarray, degeneracy: np.ndarray, j_mu: float, T: float) -> Tuple[np.ndarray, np.ndarray]:
    """Bose-Einstein occupation and the mask of points where it is defined"""
    x = (energies - j_mu) / T
    feasible = x > 0.0
    values = np.zeros_like(energies)
    with np.errstate(over="ignore"):
        values[feasible] = degeneracy[feasible] / np.expm1(x[feasible])
    return values, feasible


def _objective(model: str, energies: np.ndarray, g: np.ndarray, data: np.ndarray):
    floor = settings.T_FLOOR

    def sum_of_squares(params: np.ndarray) -> float:
        j_mu, T = float(params[0]), max(float(params[1]), floor)
        if model == "FD":
            return float(np.sum((fd_model(energies, g, j_mu, T) - data) ** 2))
        values, feasible = be_model(energies, g, j_mu, T)
        misfit = np.sum((values[feasible] - data[feasible]) ** 2)
        penalty = np.sum(data[~feasible] ** 2 + 1.0)
        return float(misfit + penalty)

    return sum_of_squares


def _spread(simplex: np.ndarray) -> float:
    scale = np.maximum(np.abs(simplex[0]), 1.0)
    return float(np.max(np.abs(simplex - simplex[0]) / scale))


def _fit(model: str, values: Sequence[float], degeneracy: Optional[Sequence[int]], n_pairs: Optional[int]) -> FitResult:
    data = np.asarray(values, dtype=float)
    g_full = _degeneracy(degeneracy, data.size)
    if n_pairs is None:
        n_pairs = int(round(float(np.sum(data / g_full))))
    n_pairs = max(1, int(n_pairs))

    points = min(data.size, 4 * n_pairs + 1)
    data, g = data[:points], g_full[:points]
    if np.count_nonzero(data) < 4:
        raise DomainError("fitting needs at least 4 nonzero DOS points", {"points": int(np.count_nonzero(data))})

    energies = energy_axis(points)
    drop = int(np.argmax(data[:-1] - data[1:])) if points > 1 else 0
    starts = [
        (float(n_pairs), 0.1),
        (n_pairs / 2.0, 1.0),
        (float(energies[drop]) + 0.5, 0.5),
    ]
    objective = _objective(model, energies, g, data)
    bounds = [(None, None), (settings.T_FLOOR, None)]

    best = None
    evaluations = 0
    for start in starts:
        allowance = settings.FIT_MAX_EVALS - evaluations - NM_OVERSHOOT
        if best is not None and allowance < MIN_START_EVALS:
            logger.debug("%s fit budget spent after %d evaluations", model, evaluations)
            break
        result = optimize.minimize(
            objective,
            np.asarray(start),
            method="Nelder-Mead",
            bounds=bounds,
            options={"maxfev": max(allowance, 1), "xatol": 1e-10, "fatol": 1e-15},
        )
        evaluations += int(result.nfev)
        spread = _spread(result.final_simplex[0])
        logger.debug("%s start %s -> %s f=%.3e spread=%.2e", model, start, result.x, result.fun, spread)
        if best is None or result.fun < best[0].fun:
            best = (result, spread)

    result, spread = best
    converged = bool(spread < settings.FIT_SPREAD_TOL)
    if not converged:
        logger.warning("%s fit did not converge (spread %.2e); returning best so far", model, spread)
    return FitResult(
        model=model,
        j_mu=float(result.x[0]),
        T_eff=max(float(result.x[1]), settings.T_FLOOR),
        residual=math.sqrt(float(result.fun) / points),
        converged=converged,
        evaluations=evaluations,
        points=points,
    )


def fit_fd(values: Sequence[float], degeneracy: Optional[Sequence[int]] = None, n_pairs: Optional[int] = None) -> FitResult:
    """
    Least-squares Fermi-Dirac fit g_j/(e^{(ε_j−j_μ)/T̃} + 1) of a DOS

    Args:
        values: DOS_j indexed by mode j
        degeneracy: g_j, ones when omitted
        n_pairs: Pair count; inferred from Σ DOS_j/g_j when omitted

    Returns:
        FitResult over the window j <= min(J − 1, 4N)
    """
    return _fit("FD", values, degeneracy, n_pairs)


def fit_be(values: Sequence[float], degeneracy: Optional[Sequence[int]] = None, n_pairs: Optional[int] = None) -> FitResult:
    """Bose-Einstein counterpart of fit_fd; points below j_μ are penalized"""
    return _fit("BE", values, degeneracy, n_pairs)


def fit_sweep(zs: Sequence[float], N: int, tail_tol: Optional[float] = None) -> List[Tuple[float, FitResult]]:
    """Fermi-Dirac fits of the 1D DOS across a z_x sweep"""
    out = []
    for z in zs:
        profile = populations(spectrum_for_pairs([z], N, tail_tol), N)
        out.append((float(z), fit_fd(dos(profile), n_pairs=N)))
    return out


# === COUNTING STATISTICS ===

def moments(distribution) -> Tuple[float, float]:
    """Mean and variance of P(n); accepts a CountingDistribution or a probability array"""
    probs = np.asarray(getattr(distribution, "probs", distribution), dtype=float)
    n = np.arange(probs.size, dtype=float)
    mean = math.fsum(n * probs)
    variance = math.fsum((n - mean) ** 2 * probs)
    return mean, max(variance, 0.0)


def counting(spectrum: OccupationSpectrum, N: int, t: int) -> CountingDistribution:
    """
    Probability of n pairs inside the t lowest modes

    P(n) = C(N,n) χ_n^{first t} χ_{N−n}^{rest}/χ_N, which reduces to
    e_n(first t)·e_{N−n}(rest)/e_N.
    """
    if not 1 <= t <= spectrum.J:
        raise DomainError("window must satisfy 1 <= t <= J", {"t": t, "J": spectrum.J})
    if N < 0:
        raise DomainError("pair count must be >= 0", {"N": N})
    log_lambdas = spectrum.log_lambdas
    full = log_elementary(log_lambdas, N)
    if full[N] == -np.inf:
        raise InfeasibleFillingError(f"χ_{N} vanishes for J = {spectrum.J}", {"N": N, "J": spectrum.J})

    inside = log_elementary(log_lambdas[:t], N)
    outside = log_elementary(log_lambdas[t:], N)
    n = np.arange(min(t, N) + 1)
    probs = np.exp(inside[n] + outside[N - n] - full[N])
    mean, variance = moments(probs)
    return CountingDistribution(probs=probs, t=t, N=N, mean=mean, variance=variance)
