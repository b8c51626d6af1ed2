"""
Oracle Service - Brute-force references for spectra, normalization factors and densities

Everything here is deliberately slow and independent of the production
paths: a one-sided Jacobi SVD of the sampled two-body Gaussian, exhaustive
enumeration of pair configurations, and explicit Fock-space states.
"""
import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from config import settings
from models.density import DensityGrid, GaussianSpec, GridSchmidt, GridSpec, OrbitalBasis, ZxArbitration
from models.physics import OccupationSpectrum
from models.tables import BoseConventionReport, CountingDistribution
from services.spectrum import build_spectrum, z_from_mu, z_from_widths
from services.symfun import chi_bose
from utils.errors import CapacityError, ConvergenceError, CoverageError, DomainError, ResolutionError


logger = logging.getLogger(__name__)

MAX_SWEEPS = 60
COMPARED_MODES = 16
SIGNIFICANT_OCCUPATION = 1e-12


# === JACOBI SVD ===

def round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Circle-method schedule: n − 1 rounds of n/2 disjoint column pairs"""
    players = list(range(n))
    half = n // 2
    rounds = []
    for _ in range(n - 1):
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_svd(matrix: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    One-sided (Hestenes) Jacobi SVD, columns rotated in round-robin order

    Args:
        matrix: Dense m×n array
        max_sweeps: Sweep limit before giving up

    Returns:
        (U, s, V) with s descending and matrix ≈ U·diag(s)·Vᵀ
    """
    a = np.array(matrix, dtype=float, copy=True)
    rows, cols = a.shape
    width = cols + (cols % 2)
    if width != cols:
        a = np.hstack([a, np.zeros((rows, 1))])
    v = np.eye(width)

    eps = np.finfo(float).eps
    tol = eps * max(rows, width)
    schedule = round_robin(width)
    negligible = (eps * np.linalg.norm(a)) ** 2

    for sweep in range(max_sweeps):
        rotated = False
        for p, q in schedule:
            ap, aq = a[:, p], a[:, q]
            alpha = np.einsum("ij,ij->j", ap, ap)
            beta = np.einsum("ij,ij->j", aq, aq)
            gamma = np.einsum("ij,ij->j", ap, aq)
            active = (np.abs(gamma) > tol * np.sqrt(alpha * beta)) & (alpha * beta > negligible)
            if not active.any():
                continue
            rotated = True
            safe = np.where(active, gamma, 1.0)
            zeta = (beta - alpha) / (2.0 * safe)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = np.where(active, 1.0 / np.sqrt(1.0 + t * t), 1.0)
            s = np.where(active, c * t, 0.0)
            a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            logger.debug("jacobi svd %dx%d converged after %d sweeps", rows, cols, sweep + 1)
            break
    else:
        raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps", {"shape": [rows, cols]})

    values = np.linalg.norm(a, axis=0)
    order = np.argsort(-values, kind="stable")[:cols]
    values = values[order]
    u = a[:, order] / np.where(values > 0, values, 1.0)
    return u, values, v[:cols][:, order]


# === GRID SCHMIDT DECOMPOSITION ===

def gaussian_kernel(gaussian: GaussianSpec, x: np.ndarray) -> np.ndarray:
    """Ψ(x_a, x_b) with species a centred at −x0/2 and b at +x0/2, unit-normalized"""
    xa = x[:, None] + gaussian.x0 / 2.0
    xb = x[None, :] - gaussian.x0 / 2.0
    R = (xa + xb) / 2.0
    r = xa - xb
    norm = 1.0 / math.sqrt(math.pi * gaussian.sigma_R * gaussian.sigma_r)
    return norm * np.exp(-R ** 2 / (2.0 * gaussian.sigma_R ** 2) - r ** 2 / (2.0 * gaussian.sigma_r ** 2))


def _required_half_width(gaussian: GaussianSpec) -> float:
    return gaussian.x0 / 2.0 + 6.0 * max(gaussian.sigma_R, gaussian.sigma_r)


def _decompose(gaussian: GaussianSpec, half_width: float, points: int):
    x = np.linspace(-half_width, half_width, points)
    dx = x[1] - x[0]
    u, s, v = jacobi_svd(gaussian_kernel(gaussian, x) * dx)
    return x, s ** 2, u / math.sqrt(dx), v / math.sqrt(dx)


def grid_schmidt(gaussian: GaussianSpec, grid: Optional[GridSpec] = None, modes: int = 32) -> GridSchmidt:
    """
    Schmidt decomposition of the sampled two-body Gaussian at three resolutions

    Args:
        gaussian: Widths and separation
        grid: Base resolution; refinements use 1.5× and 2× the points
        modes: Discretized modes kept per species (sampled as functions, ∫|φ|² = 1)

    Returns:
        GridSchmidt of the finest level with a Richardson-style change estimate
    """
    grid = grid or GridSpec(points=settings.SCHMIDT_GRID_POINTS)
    needed = _required_half_width(gaussian)
    half_width = grid.half_width if grid.half_width is not None else needed
    if half_width < needed:
        raise CoverageError("Schmidt grid does not cover both species", {"half_width": half_width, "needed": needed})
    spacing = 2.0 * half_width / (grid.points - 1)
    finest = min(gaussian.sigma_R, gaussian.sigma_r) / 4.0
    if spacing > finest:
        raise ResolutionError("Schmidt grid is too coarse for the narrower width", {"spacing": spacing, "needed": finest})

    levels = [grid.points, (3 * grid.points + 1) // 2, 2 * grid.points]
    results = [_decompose(gaussian, half_width, points) for points in levels]

    leading = results[0][1][:COMPARED_MODES]
    keep = int(max(1, np.count_nonzero(leading >= SIGNIFICANT_OCCUPATION)))
    coarse, middle, fine = (r[1][:keep] for r in results)
    first = float(np.max(np.abs(middle - coarse)))
    second = float(np.max(np.abs(fine - middle)))
    if second < first:
        estimate = second / (1.0 - second / first)
    else:
        estimate = first + second
    changes = [float(np.max(np.abs(level - fine))) for level in (coarse, middle)]
    if changes[0] < changes[1]:
        logger.warning("grid Schmidt spectrum is not converging monotonically: %s", changes)
    # never report less than what the refinement actually moved
    estimate = max(estimate, *changes)
    if estimate > settings.SCHMIDT_TOL:
        raise ResolutionError(
            f"grid Schmidt spectrum changed by {estimate:.2e} under refinement",
            {"estimate": estimate, "levels": levels},
        )

    x, occupations, modes_a, modes_b = results[-1]
    return GridSchmidt(
        occupations=occupations,
        modes_a=modes_a[:, :modes],
        modes_b=modes_b[:, :modes],
        x=x,
        gaussian=gaussian,
        grid=GridSpec(points=levels[-1], half_width=half_width),
        convergence=estimate,
        levels=levels,
        changes=changes,
    )


def arbitrate_zx(mu: float, x0: float = 0.0, count: int = 5) -> ZxArbitration:
    """
    Compare the grid Schmidt ratio λ̂_{j+1}/λ̂_j (j < count) against both z_x formulas

    The curvature formula is ((1−μ)/(1+μ))²; the width formula is
    ((1−√μ)/(1+√μ))². A candidate is selected when it matches within SCHMIDT_TOL.
    """
    schmidt = grid_schmidt(GaussianSpec.from_mu(mu, x0))
    ratios = schmidt.ratios(count)
    svd_ratio = float(np.mean(ratios))
    candidates = {"curvature": z_from_mu(mu), "widths": z_from_widths(mu)}
    deviations = {name: abs(value - svd_ratio) for name, value in candidates.items()}
    matching = [name for name in sorted(deviations, key=deviations.get) if deviations[name] <= settings.SCHMIDT_TOL]
    selected = matching[0] if matching else None
    logger.info("z_x arbitration at mu=%.6g: svd ratio %.12g selects %s", mu, svd_ratio, selected)
    return ZxArbitration(
        mu=mu,
        svd_ratio=svd_ratio,
        ratio_spread=float(np.max(ratios) - np.min(ratios)),
        candidates=candidates,
        deviations=deviations,
        selected=selected,
        tolerance=settings.SCHMIDT_TOL,
    )


# === ENUMERATION ===

def _check_limits(spectrum: OccupationSpectrum, N: int, max_modes: int, max_pairs: int) -> np.ndarray:
    if spectrum.J > max_modes or N > max_pairs or N < 0:
        raise CapacityError(
            f"brute force is limited to J <= {max_modes} and 0 <= N <= {max_pairs}",
            {"J": spectrum.J, "N": N},
        )
    return spectrum.lambdas


def chi_bruteforce(spectrum: OccupationSpectrum, N: int, kind: str = "fermionic") -> float:
    """Exact χ_N by summing Πλ over all N-subsets (or multisets), compensated"""
    lambdas = _check_limits(spectrum, N, settings.ORACLE_MAX_MODES, settings.ORACLE_MAX_PAIRS)
    if kind == "fermionic":
        combos = itertools.combinations(range(spectrum.J), N)
    elif kind == "bosonic":
        combos = itertools.combinations_with_replacement(range(spectrum.J), N)
    else:
        raise DomainError(f"unknown statistics {kind!r}")
    total = math.fsum(math.prod(lambdas[i] for i in combo) for combo in combos)
    return math.factorial(N) * total


def _subset_weights(spectrum: OccupationSpectrum, N: int):
    lambdas = _check_limits(spectrum, N, settings.ORACLE_MAX_MODES, settings.ORACLE_MAX_PAIRS)
    for combo in itertools.combinations(range(spectrum.J), N):
        yield combo, math.prod(lambdas[i] for i in combo)


def counting_bruteforce(spectrum: OccupationSpectrum, N: int, t: int) -> CountingDistribution:
    """P(n) by binning every N-subset on how many of its modes lie below t"""
    if not 1 <= t <= spectrum.J:
        raise DomainError("window must satisfy 1 <= t <= J", {"t": t})
    bins: Dict[int, List[float]] = {n: [] for n in range(min(t, N) + 1)}
    for combo, weight in _subset_weights(spectrum, N):
        bins[sum(1 for i in combo if i < t)].append(weight)
    total = math.fsum(itertools.chain.from_iterable(bins.values()))
    if total == 0.0:
        raise DomainError("no N-subsets: χ_N vanishes", {"N": N, "J": spectrum.J})
    probs = np.array([math.fsum(bins[n]) / total for n in sorted(bins)])
    mean = math.fsum(n * p for n, p in enumerate(probs))
    variance = math.fsum((n - mean) ** 2 * p for n, p in enumerate(probs))
    return CountingDistribution(probs=probs, t=t, N=N, mean=mean, variance=variance)


def populations_bruteforce(spectrum: OccupationSpectrum, N: int) -> np.ndarray:
    """n_j as the weight fraction of N-subsets containing mode j"""
    per_mode: List[List[float]] = [[] for _ in range(spectrum.J)]
    totals = []
    for combo, weight in _subset_weights(spectrum, N):
        totals.append(weight)
        for i in combo:
            per_mode[i].append(weight)
    total = math.fsum(totals)
    return np.array([math.fsum(w) / total for w in per_mode])


# === FOCK SPACE ===

def _create(state: int, mode: int) -> Tuple[Optional[int], int]:
    """Fermionic creation on a bitmask with the Jordan-Wigner sign"""
    if state >> mode & 1:
        return None, 0
    sign = -1 if bin(state & ((1 << mode) - 1)).count("1") % 2 else 1
    return state | (1 << mode), sign


def _annihilate(state: int, mode: int) -> Tuple[Optional[int], int]:
    if not state >> mode & 1:
        return None, 0
    sign = -1 if bin(state & ((1 << mode) - 1)).count("1") % 2 else 1
    return state & ~(1 << mode), sign


def fermion_pair_state(lambdas: Sequence[float], N: int) -> Dict[int, float]:
    """
    Normalized (Σ_j √λ_j a_j† b_j†)^N |0⟩ over modes a_0..a_{J−1}, b_0..b_{J−1}.

    States are bitmasks; a_j is bit j and b_j is bit J + j.
    """
    J = len(lambdas)
    amplitudes = np.sqrt(np.asarray(lambdas, dtype=float))
    state: Dict[int, float] = {0: 1.0}
    for _ in range(N):
        nxt: Dict[int, float] = {}
        for basis, coeff in state.items():
            for j in range(J):
                after_b, sign_b = _create(basis, J + j)
                if after_b is None:
                    continue
                after_a, sign_a = _create(after_b, j)
                if after_a is None:
                    continue
                nxt[after_a] = nxt.get(after_a, 0.0) + sign_a * sign_b * amplitudes[j] * coeff
        state = nxt
    norm = math.sqrt(math.fsum(c * c for c in state.values()))
    if norm == 0.0:
        raise DomainError("pair state vanishes (Pauli blocking)", {"N": N, "J": J})
    return {basis: c / norm for basis, c in state.items()}


def one_body_matrix(state: Dict[int, float], modes: Sequence[int]) -> np.ndarray:
    """⟨c_i† c_k⟩ over the listed modes"""
    size = len(modes)
    rho = np.zeros((size, size))
    for basis, coeff in state.items():
        for col, k in enumerate(modes):
            removed, sign_k = _annihilate(basis, k)
            if removed is None:
                continue
            for row, i in enumerate(modes):
                target, sign_i = _create(removed, i)
                if target is None or target not in state:
                    continue
                rho[row, col] += state[target] * sign_i * sign_k * coeff
    return rho


def fock_density(spectrum: OccupationSpectrum, N: int, basis: OrbitalBasis, grid: GridSpec) -> DensityGrid:
    """
    ϱ(x) = Σ_ik ρ_ik φ_i(x) φ_k(x) per species from the explicit N-pair Fock state

    Off-diagonal one-body terms are kept, so this checks that the reduced state
    is diagonal in the Schmidt basis rather than assuming it.
    """
    # density builds on this module for basis validation
    from services.density import density_grid_x, orbital_table

    _check_limits(spectrum, N, settings.FOCK_MAX_MODES, settings.FOCK_MAX_PAIRS)
    if spectrum.labels.shape[1] != 1:
        raise DomainError("density references need a one-axis spectrum")
    J = spectrum.J
    state = fermion_pair_state(spectrum.lambdas, N)
    rho_a = one_body_matrix(state, range(J))
    rho_b = one_body_matrix(state, range(J, 2 * J))

    orbitals = spectrum.labels[:, 0]
    x = density_grid_x(basis, int(orbitals.max()) + 1, grid)
    phi_a = orbital_table(basis, orbitals, x, basis.center_a)
    phi_b = orbital_table(basis, orbitals, x, basis.center_b)
    dens_a = np.einsum("ix,ik,kx->x", phi_a, rho_a, phi_a)
    dens_b = np.einsum("ix,ik,kx->x", phi_b, rho_b, phi_b)
    total = dens_a + dens_b
    return DensityGrid(x=x, rho_a=dens_a, rho_b=dens_b, rho_total=total, norm=float(trapezoid(total, x)))


def bose_fock_norm(lambdas: Sequence[float], N: int) -> float:
    """⟨0|B^N B†^N|0⟩/N! for bosonic constituents, built in occupation-number space"""
    J = len(lambdas)
    amplitudes = np.sqrt(np.asarray(lambdas, dtype=float))
    state: Dict[Tuple[int, ...], float] = {tuple([0] * J): 1.0}
    for _ in range(N):
        nxt: Dict[Tuple[int, ...], float] = {}
        for occ, coeff in state.items():
            for j in range(J):
                # a_j† b_j† on equal occupations: √(n+1) twice
                lifted = list(occ)
                lifted[j] += 1
                key = tuple(lifted)
                nxt[key] = nxt.get(key, 0.0) + amplitudes[j] * lifted[j] * coeff
        state = nxt
    return math.fsum(c * c for c in state.values()) / math.factorial(N)


def bose_convention_report(zs: Sequence[float], N: int, tail_tol: float = 1e-12) -> BoseConventionReport:
    """
    Bosonic χ_N of a two-axis spectrum three ways

    multiset: the DP over the product spectrum (multiset sum definition);
    fock_norm: explicit Fock norm over the leading modes, checked against the
    multiset DP on those same modes; axis_product: χ_N^B(z_x)·χ_N^B(z_y).
    """
    if len(zs) != 2:
        raise DomainError("convention report compares two axes", {"zs": list(zs)})
    if N > 4:
        raise CapacityError("bosonic Fock construction is limited to N <= 4", {"N": N})
    full = build_spectrum(zs, tail_tol, pad=N + 1)
    multiset = chi_bose(full, N).value(N)
    axis_product = math.prod(chi_bose(build_spectrum([z], tail_tol, pad=N + 1), N).value(N) for z in zs)

    head = full.head(settings.ORACLE_MAX_MODES)
    fock = bose_fock_norm(head.lambdas, N)
    head_multiset = chi_bose(head, N).value(N)
    deviation = abs(axis_product - multiset) / multiset
    return BoseConventionReport(
        zs=[float(z) for z in zs],
        N=N,
        multiset=multiset,
        fock_norm=fock,
        axis_product=axis_product,
        product_deviation=deviation,
        fock_matches_multiset=abs(fock - head_multiset) <= 1e-10 * head_multiset,
        product_matches_multiset=deviation <= 1e-8,
    )
