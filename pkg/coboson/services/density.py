"""
Density Service - Natural-orbital density profiles and Friedel/Wigner classification

The one-body reduced state of the N-pair state is diagonal in the Schmidt
basis, so each species density is Σ_j n_j |φ_j(x)|² with φ_j shifted
oscillator eigenfunctions of common width w = μ^(-1/4).
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import find_peaks

from config import settings
from models.density import DensityGrid, GaussianSpec, GridSpec, OrbitalBasis, Regime, WignerProfile
from models.physics import HarmonicApprox, InteractionSpec, OccupationSpectrum
from services.observables import populations
from services.oracle import grid_schmidt
from services.spectrum import solve_equilibrium, spectrum_for_pairs, z_from_mu, z_from_widths
from utils.errors import BasisValidationError, CapacityError, CoverageError, DomainError


logger = logging.getLogger(__name__)

VALIDATED_MODES = 8
OVERLAP_TOL = 1e-6


# === OSCILLATOR EIGENFUNCTIONS ===

def hermite_fn(j: int, xi):
    """
    Normalized oscillator eigenfunction ψ_j(ξ)

    Uses ψ_{k+1} = √(2/(k+1)) ξ ψ_k − √(k/(k+1)) ψ_{k−1} from ψ_0 = π^(-1/4) e^(-ξ²/2).
    """
    if j < 0:
        raise DomainError("oscillator index must be >= 0", {"j": j})
    if j > settings.HERMITE_MAX_J:
        raise CapacityError(f"oscillator index above {settings.HERMITE_MAX_J}", {"j": j})
    xi = np.asarray(xi, dtype=float)
    previous = np.zeros_like(xi)
    current = np.pi ** -0.25 * np.exp(-xi * xi / 2.0)
    for k in range(j):
        previous, current = current, math.sqrt(2.0 / (k + 1)) * xi * current - math.sqrt(k / (k + 1)) * previous
    return current if current.ndim else float(current)


def hermite_functions(count: int, xi: np.ndarray) -> np.ndarray:
    """ψ_0..ψ_{count−1} on ξ, shape (count, len(ξ))"""
    if count - 1 > settings.HERMITE_MAX_J:
        raise CapacityError(f"oscillator index above {settings.HERMITE_MAX_J}", {"count": count})
    xi = np.asarray(xi, dtype=float)
    table = np.empty((count,) + xi.shape)
    table[0] = np.pi ** -0.25 * np.exp(-xi * xi / 2.0)
    if count > 1:
        table[1] = math.sqrt(2.0) * xi * table[0]
    for k in range(1, count - 1):
        table[k + 1] = math.sqrt(2.0 / (k + 1)) * xi * table[k] - math.sqrt(k / (k + 1)) * table[k - 1]
    return table


def orbital_table(basis: OrbitalBasis, orbitals: Sequence[int], x: np.ndarray, center: float) -> np.ndarray:
    """φ_j(x) = ψ_j((x − center)/w)/√w for the requested orbital indices"""
    orbitals = np.asarray(orbitals, dtype=int)
    table = hermite_functions(int(orbitals.max()) + 1, (x - center) / basis.width)
    return table[orbitals] / math.sqrt(basis.width)


def density_grid_x(basis: OrbitalBasis, J: int, grid: Optional[GridSpec] = None) -> np.ndarray:
    """Uniform grid of half-width x0/2 + w(√(2J) + 4) unless the grid spec fixes it"""
    grid = grid or GridSpec(points=settings.GRID_POINTS)
    needed = basis.x0 / 2.0 + basis.width * math.sqrt(2.0 * J)
    half_width = grid.half_width
    if half_width is None:
        half_width = needed + 4.0 * basis.width
    if half_width < needed:
        raise CoverageError(
            "density grid does not reach the outermost orbital turning point",
            {"half_width": half_width, "needed": needed},
        )
    return np.linspace(-half_width, half_width, grid.points)


# === ORBITAL BASIS ===

def _validation_points(gaussian: GaussianSpec) -> int:
    half_width = gaussian.x0 / 2.0 + 6.0 * max(gaussian.sigma_R, gaussian.sigma_r)
    spacing = min(gaussian.sigma_R, gaussian.sigma_r) / 4.0
    return max(settings.SCHMIDT_GRID_POINTS, math.ceil(2.0 * half_width / spacing) + 1)


@lru_cache(maxsize=64)
def _schmidt_overlaps(mu: float, x0: float, count: int) -> Tuple[float, ...]:
    gaussian = GaussianSpec.from_mu(mu, x0)
    schmidt = grid_schmidt(gaussian, GridSpec(points=_validation_points(gaussian)), modes=count)
    width = mu ** -0.25
    x = schmidt.x
    dx = schmidt.spacing
    basis_a = hermite_functions(count, (x + x0 / 2.0) / width) / math.sqrt(width)
    basis_b = hermite_functions(count, (x - x0 / 2.0) / width) / math.sqrt(width)
    overlaps = []
    for j in range(count):
        if schmidt.occupations[j] < 1e-12:
            break
        overlap_a = abs(float(np.sum(schmidt.modes_a[:, j] * basis_a[j]) * dx))
        overlap_b = abs(float(np.sum(schmidt.modes_b[:, j] * basis_b[j]) * dx))
        overlaps.append(min(overlap_a, overlap_b))
    return tuple(overlaps)


def orbital_basis_for(mu: float, x0: float, J: int, validate: bool = True) -> OrbitalBasis:
    """Orbital basis for a curvature ratio and separation; see orbital_basis"""
    if not mu >= 1.0:
        raise DomainError("curvature ratio must be >= 1", {"mu": mu})
    if J < 1:
        raise DomainError("orbital count must be >= 1", {"J": J})
    overlaps: Tuple[float, ...] = ()
    if validate:
        overlaps = _schmidt_overlaps(round(float(mu), 12), round(float(x0), 12), min(VALIDATED_MODES, J))
        if any(value < 1.0 - OVERLAP_TOL for value in overlaps):
            raise BasisValidationError(
                "analytic orbitals disagree with the grid Schmidt modes",
                {"mu": mu, "x0": x0, "overlaps": list(overlaps)},
            )
    return OrbitalBasis(
        width=mu ** -0.25,
        x0=x0,
        J=J,
        mu=mu,
        z_implied=z_from_widths(mu),
        z_formula=z_from_mu(mu),
        overlaps=list(overlaps),
    )


def orbital_basis(approx: HarmonicApprox, J: int, validate: bool = True) -> OrbitalBasis:
    """
    Schmidt orbitals of the shifted two-body Gaussian

    Args:
        approx: Equilibrium separation and curvature ratio
        J: Orbital count
        validate: Check the leading modes against oracle.grid_schmidt

    Returns:
        OrbitalBasis with width μ^(-1/4), centres ∓x0/2 and both z_x values
    """
    return orbital_basis_for(approx.mu, approx.x0, J, validate)


# === PROFILES ===

def profile(
    source: Union[OccupationSpectrum, float],
    N: int,
    basis: OrbitalBasis,
    grid: Optional[GridSpec] = None,
) -> DensityGrid:
    """
    ϱ_a, ϱ_b and their sum for N pairs

    Args:
        source: One-axis spectrum, or a z value to build it from
        N: Pair count
        basis: Orbitals; must hold at least as many orbitals as the spectrum
        grid: Sampling; defaults to GRID_POINTS over the turning-point window

    Returns:
        DensityGrid with trapezoid norm (2N when grid-converged)
    """
    spectrum = spectrum_for_pairs([source], N) if isinstance(source, (int, float)) else source
    if spectrum.labels.shape[1] != 1:
        raise DomainError("density profiles need a one-axis spectrum")
    orbitals = spectrum.labels[:, 0]
    count = int(orbitals.max()) + 1
    if count > basis.J:
        raise DomainError("basis holds fewer orbitals than the spectrum", {"basis_J": basis.J, "needed": count})

    occupation = populations(spectrum, N).n
    x = density_grid_x(basis, count, grid)
    phi_a = orbital_table(basis, orbitals, x, basis.center_a)
    phi_b = orbital_table(basis, orbitals, x, basis.center_b)
    rho_a = occupation @ (phi_a * phi_a)
    rho_b = occupation @ (phi_b * phi_b)
    total = rho_a + rho_b
    return DensityGrid(x=x, rho_a=rho_a, rho_b=rho_b, rho_total=total, norm=float(trapezoid(total, x)))


def peaks(grid: DensityGrid, prominence: Optional[float] = None) -> int:
    """Local maxima of ϱ_total whose prominence exceeds a fraction of its maximum"""
    fraction = settings.PROMINENCE if prominence is None else float(prominence)
    if not 0.0 < fraction < 0.5:
        raise DomainError("prominence fraction must lie in (0, 0.5)", {"prominence": fraction})
    found, _ = find_peaks(grid.rho_total, prominence=fraction * float(np.max(grid.rho_total)))
    return int(found.size)


def classify(count: int, N: int) -> Regime:
    if count == N:
        return Regime.FRIEDEL
    if count == 2 * N:
        return Regime.WIGNER
    return Regime.INTERMEDIATE


def wigner_profile(
    interaction: InteractionSpec,
    N: int,
    grid: Optional[GridSpec] = None,
    prominence: Optional[float] = None,
    tail_tol: Optional[float] = None,
    validate: bool = True,
) -> WignerProfile:
    """Equilibrium, orbitals, populations from z_implied, density, peak count and regime"""
    approx = solve_equilibrium(interaction)
    z = z_from_widths(approx.mu)
    spectrum = spectrum_for_pairs([z], N, tail_tol)
    basis = orbital_basis(approx, spectrum.J, validate)
    density = profile(spectrum, N, basis, grid)
    count = peaks(density, prominence)
    regime = classify(count, N)
    logger.info("g=%.4g N=%d x0/w=%.3f -> %d peaks (%s)", interaction.strength, N, approx.x0 / basis.width, count, regime.value)
    return WignerProfile(approx=approx, basis=basis, grid=density, N=N, peaks=count, regime=regime)
