"""
Spectrum Service - Harmonic approximation, geometric Schmidt spectra, power sums and entropies

All quantities are in oscillator units (ħ = m = ω = 1). The pair sits on the
x axis with reduced mass 1/2 and total mass 2.
"""
import logging
import math
from functools import partial
from typing import Callable, Iterable, List, Optional, Sequence

import mpmath as mp
import numpy as np
from scipy import optimize
from scipy.special import xlogy

from config import settings
from models.physics import (
    AxisEntropy,
    EntropyReport,
    HarmonicApprox,
    InteractionSpec,
    OccupationSpectrum,
    RadialPotential,
    TrapSpec,
)
from utils.errors import CapacityError, ConvergenceError, DomainError


logger = logging.getLogger(__name__)

REDUCED_MASS = 0.5
TOTAL_MASS = 2.0
OMEGA = 1.0
LN2 = math.log(2.0)

BRACKET_START = 1e-6
BRACKET_DOUBLINGS = 200
ROOT_XTOL = 1e-12


# === HARMONIC APPROXIMATION ===

def solve_equilibrium(interaction: InteractionSpec) -> HarmonicApprox:
    """
    Locate the classical equilibrium separation and the curvature ratio μ

    Args:
        interaction: Repulsive interaction g·𝒱(r)

    Returns:
        HarmonicApprox with x0, μ and the strong-interaction flag
    """
    g = interaction.strength
    if interaction.gamma is not None:
        gamma = interaction.gamma
        x0 = (2.0 * gamma * g / (REDUCED_MASS * OMEGA ** 2)) ** (1.0 / (gamma + 2.0))
        mu = math.sqrt(gamma + 2.0)
    else:
        potential = interaction.descriptor
        x0 = _equilibrium_root(potential, g)
        mu = curvature_ratio(potential, x0)

    valid = x0 >= settings.STRONG_X0
    if not valid:
        logger.warning(
            "x0 = %.6g is below the strong-interaction threshold %.3g; "
            "harmonic approximation flagged invalid", x0, settings.STRONG_X0
        )
    return HarmonicApprox(x0=x0, mu=mu, valid=valid)


def _equilibrium_root(potential: RadialPotential, g: float) -> float:
    target = REDUCED_MASS * OMEGA ** 2 / (2.0 * g)

    def force_balance(r: float) -> float:
        slope = potential.first(r)
        if not slope < 0.0:
            raise DomainError(
                "interaction must be repulsive and monotone decreasing",
                {"r": r, "first_derivative": slope},
            )
        return -slope / r - target

    low = BRACKET_START
    if force_balance(low) <= 0.0:
        raise ConvergenceError(f"no root bracket: force balance is negative already at r = {low}")

    high = 1.0
    for _ in range(BRACKET_DOUBLINGS):
        if force_balance(high) < 0.0:
            break
        high *= 2.0
    else:
        raise ConvergenceError("root bracket did not close", {"r_max": high})

    root = optimize.bisect(force_balance, low, high, xtol=ROOT_XTOL, maxiter=500)
    logger.debug("equilibrium bracket [%g, %g] -> x0 = %.15g", low, high, root)
    return float(root)


def curvature_ratio(potential: RadialPotential, x0: float) -> float:
    """μ from μ² = 𝒱″/(−𝒱′/r) + 1 at the equilibrium separation"""
    slope = potential.first(x0)
    if not slope < 0.0:
        raise DomainError("interaction must be repulsive at the equilibrium", {"x0": x0})
    mu_sq = potential.second(x0) / (-slope / x0) + 1.0
    if mu_sq < 1.0:
        raise DomainError("curvature ratio below 1, harmonic approximation invalid", {"mu_squared": mu_sq})
    return math.sqrt(mu_sq)


# === SCHMIDT PARAMETERS ===

def z_from_mu(mu: float) -> float:
    """Longitudinal Schmidt parameter ((1−μ)/(1+μ))²"""
    if not (math.isfinite(mu) and mu >= 1.0):
        raise DomainError("curvature ratio must satisfy 1 <= mu < inf", {"mu": mu})
    return ((1.0 - mu) / (1.0 + mu)) ** 2


def z_from_widths(mu: float) -> float:
    """
    Schmidt parameter of the Gaussian with σ_R² = 1/2 and σ_r² = 2/μ.

    Equals ((1−√μ)/(1+√μ))², i.e. z_from_mu evaluated at √μ.
    """
    if not (math.isfinite(mu) and mu >= 1.0):
        raise DomainError("curvature ratio must satisfy 1 <= mu < inf", {"mu": mu})
    return z_from_mu(math.sqrt(mu))


def z_from_anisotropy(epsilon: float) -> float:
    """Transverse Schmidt parameter; ε = 1 is the isotropic limit z = 1"""
    if not (math.isfinite(epsilon) and epsilon >= 1.0):
        raise DomainError("anisotropy must satisfy 1 <= epsilon < inf", {"epsilon": epsilon})
    if epsilon == 1.0:
        return 1.0
    # (a − b) = −1/((a + b)(a² + b²)) since a⁴ − b⁴ = −1
    a = ((epsilon - 1.0) * (epsilon + 1.0)) ** 0.25
    b = math.sqrt(epsilon)
    return 1.0 / ((a + b) ** 4 * (a * a + b * b) ** 2)


def zs_from_physics(interaction: InteractionSpec, trap: TrapSpec, rule: str = "curvature") -> List[float]:
    """
    Generating parameters (z_x, z_y1, ...) for a trap and interaction

    Args:
        rule: "curvature" uses z_from_mu, "widths" uses z_from_widths
    """
    approx = solve_equilibrium(interaction)
    if rule == "curvature":
        zx = z_from_mu(approx.mu)
    elif rule == "widths":
        zx = z_from_widths(approx.mu)
    else:
        raise DomainError(f"unknown z_x rule {rule!r}")
    return [zx] + [z_from_anisotropy(eps) for eps in trap.anisotropies]


# === SPECTRA ===

def _check_zs(zs: Sequence[float]) -> List[float]:
    values = [float(z) for z in zs]
    if not values:
        raise DomainError("at least one generating parameter is required")
    for z in values:
        if z == 1.0:
            raise DomainError(
                "z = 1 has no normalizable geometric spectrum; use the symmetry-limit analytics",
                {"zs": values},
            )
        if not 0.0 <= z < 1.0:
            raise DomainError("generating parameters must lie in [0, 1)", {"zs": values})
    return values


def axis_cutoff(z: float, tol: float, pad: int = 0) -> int:
    """Modes kept on one axis so that its geometric tail z^J stays below tol"""
    if z == 0.0:
        return 1
    return max(1, math.ceil(math.log(tol) / math.log(z))) + pad


def build_spectrum(zs: Sequence[float], tail_tol: Optional[float] = None, pad: int = 0) -> OccupationSpectrum:
    """
    Product geometric spectrum λ = Π (1−z_i) z_i^{j_i}, truncated per axis and sorted

    Args:
        zs: Generating parameter per axis
        tail_tol: Discarded-mass tolerance, split evenly over the axes
        pad: Extra modes per non-trivial axis beyond the tolerance cutoff

    Returns:
        OccupationSpectrum with labels and the exact discarded mass
    """
    zs = _check_zs(zs)
    tol = settings.TAIL_TOL if tail_tol is None else float(tail_tol)
    if not 0.0 < tol <= 1e-3:
        raise DomainError("tail tolerance must lie in (0, 1e-3]", {"tail_tol": tol})

    dims = len(zs)
    cutoffs = [axis_cutoff(z, tol / dims, pad) for z in zs]
    count = math.prod(cutoffs)
    if count > settings.MODE_CAP:
        raise CapacityError(
            f"spectrum for zs={zs} needs {count} modes, above the cap of {settings.MODE_CAP}",
            {"zs": zs, "modes": count, "cutoffs": cutoffs},
        )

    axes = []
    for z, size in zip(zs, cutoffs):
        j = np.arange(size, dtype=float)
        axes.append(math.log1p(-z) + (j * math.log(z) if z > 0.0 else 0.0 * j))
    log_grid = axes[0]
    for axis in axes[1:]:
        log_grid = np.add.outer(log_grid, axis)
    log_flat = np.ravel(log_grid)
    labels = np.indices(cutoffs).reshape(dims, -1).T

    order = np.argsort(-log_flat, kind="stable")
    kept = sum(math.log1p(-(z ** size)) for z, size in zip(zs, cutoffs))
    tail = -math.expm1(kept)

    logger.debug("spectrum zs=%s cutoffs=%s modes=%d tail=%.3e", zs, cutoffs, count, tail)
    return OccupationSpectrum(
        log_lambdas=log_flat[order],
        labels=labels[order],
        zs=zs,
        tail=tail,
    )


def spectrum_for_pairs(zs: Sequence[float], n_pairs: int, tail_tol: Optional[float] = None) -> OccupationSpectrum:
    """Spectrum padded with N + 1 modes per axis so N pairs sit well above the cut"""
    if n_pairs > settings.PAIR_MAX:
        raise CapacityError(
            f"{n_pairs} pairs exceed the configured limit of {settings.PAIR_MAX}",
            {"N": int(n_pairs), "limit": settings.PAIR_MAX},
        )
    return build_spectrum(zs, tail_tol, pad=max(0, int(n_pairs)) + 1)


def spectrum_from_physics(
    interaction: InteractionSpec,
    trap: TrapSpec,
    tail_tol: Optional[float] = None,
    pad: int = 0,
    rule: str = "curvature",
) -> OccupationSpectrum:
    return build_spectrum(zs_from_physics(interaction, trap, rule), tail_tol, pad)


# === POWER SUMS ===

def _axis_power_sum(z: float, m: int) -> float:
    if z == 0.0:
        return 1.0
    return math.exp(m * math.log1p(-z)) / -math.expm1(m * math.log(z))


def power_sum(zs: Sequence[float], m: int) -> float:
    """Closed-form M(m) = Π (1−z)^m/(1−z^m); M(1) = 1 exactly"""
    if int(m) != m or m < 1:
        raise DomainError("power-sum order must be an integer >= 1", {"m": m})
    zs = _check_zs(zs)
    if m == 1:
        return 1.0
    total = 1.0
    for z in zs:
        total *= _axis_power_sum(z, int(m))
    return total


def power_sum_mp(zs: Sequence[float], m: int):
    """M(m) in the active mpmath precision"""
    total = mp.mpf(1)
    if m == 1:
        return total
    for z in zs:
        z = mp.mpf(z)
        if z == 0:
            continue
        total *= (1 - z) ** m / (1 - z ** m)
    return total


def power_sums(zs: Sequence[float]) -> Callable[[int], "mp.mpf"]:
    """Power-sum source re-evaluated at whatever precision the caller is running"""
    return partial(power_sum_mp, _check_zs(zs))


# === ENTROPIES ===

def _renyi(z: float, alpha: float) -> float:
    if z == 0.0:
        return 0.0
    if alpha == 1.0:
        return _von_neumann(z)
    if math.isinf(alpha):
        return -math.log1p(-z) / LN2
    numerator = alpha * math.log1p(-z) - math.log(-math.expm1(alpha * math.log(z)))
    return numerator / ((1.0 - alpha) * LN2)


def _von_neumann(z: float) -> float:
    if z == 0.0:
        return 0.0
    return -float(xlogy(1.0 - z, 1.0 - z) + xlogy(z, z)) / ((1.0 - z) * LN2)


def axis_entropy(z: float, alphas: Iterable[float] = ()) -> AxisEntropy:
    """Closed-form entropies in bits of one geometric axis"""
    alphas = list(alphas)
    if z == 1.0:
        return AxisEntropy(
            z=1.0, purity=0.0, von_neumann=math.inf,
            renyi={alpha: math.inf for alpha in alphas},
            min_entropy=math.inf, max_entropy=math.inf,
        )
    return AxisEntropy(
        z=z,
        purity=_axis_power_sum(z, 2),
        von_neumann=_von_neumann(z),
        renyi={alpha: _renyi(z, alpha) for alpha in alphas},
        min_entropy=-math.log1p(-z) / LN2,
        max_entropy=0.0 if z == 0.0 else math.inf,
    )


def entropies(
    zs: Sequence[float],
    alphas: Iterable[float] = (2.0,),
    spectrum: Optional[OccupationSpectrum] = None,
) -> EntropyReport:
    """
    Linear, von Neumann, Rényi, min and max entropies of a product geometric spectrum

    Args:
        zs: Generating parameters; z = 1 yields divergence sentinels (inf, S_L = 1)
        alphas: Rényi orders, each > 0; α = 1 is von Neumann, α = inf is the min-entropy
        spectrum: Optional truncated spectrum for the Hartley entropy log₂ J

    Returns:
        EntropyReport whose additive entries are sums of the per-axis terms
    """
    alphas = [float(alpha) for alpha in alphas]
    if any(not alpha > 0.0 for alpha in alphas):
        raise DomainError("Rényi orders must be positive", {"alphas": alphas})
    values = [float(z) for z in zs]
    if not values or any(not 0.0 <= z <= 1.0 for z in values):
        raise DomainError("generating parameters must lie in [0, 1]", {"zs": values})

    per_axis = [axis_entropy(z, alphas) for z in values]
    divergent = any(z == 1.0 for z in values)
    if divergent:
        linear, purity = 1.0, 0.0
    else:
        purity = power_sum(values, 2)
        linear = 1.0 - purity

    return EntropyReport(
        linear=linear,
        von_neumann=sum(axis.von_neumann for axis in per_axis),
        renyi={alpha: sum(axis.renyi[alpha] for axis in per_axis) for alpha in alphas},
        min_entropy=sum(axis.min_entropy for axis in per_axis),
        max_entropy=sum(axis.max_entropy for axis in per_axis),
        schmidt_number=math.inf if purity == 0.0 else 1.0 / purity,
        hartley=math.log2(spectrum.J) if spectrum is not None else None,
        per_axis=per_axis,
        divergent=divergent,
    )


def direct_entropies(spectrum: OccupationSpectrum, alphas: Iterable[float] = (2.0,)) -> dict:
    """Entropies summed mode by mode over a truncated spectrum"""
    lambdas = spectrum.lambdas[::-1]
    result = {
        "von_neumann": -math.fsum(lambdas * spectrum.log_lambdas[::-1]) / LN2,
        "linear": 1.0 - spectrum.power_sum(2),
        "renyi": {},
    }
    for alpha in alphas:
        if alpha == 1.0:
            result["renyi"][alpha] = result["von_neumann"]
        else:
            result["renyi"][alpha] = math.log2(math.fsum(np.exp(alpha * spectrum.log_lambdas[::-1]))) / (1.0 - alpha)
    return result
