"""
Tests for the brute-force references
"""
import itertools
import json
import math

import numpy as np
import pytest

from config import settings
from models.density import GaussianSpec, GridSpec
from services import oracle as oracle_service
from services.density import orbital_basis_for
from services.oracle import (
    COMPARED_MODES,
    SIGNIFICANT_OCCUPATION,
    arbitrate_zx,
    bose_convention_report,
    bose_fock_norm,
    chi_bruteforce,
    counting_bruteforce,
    fermion_pair_state,
    fock_density,
    grid_schmidt,
    jacobi_svd,
    one_body_matrix,
    round_robin,
)
from services.spectrum import build_spectrum, z_from_widths
from utils.errors import CapacityError, CoverageError, DomainError, ResolutionError


# === JACOBI SVD ===

def test_round_robin_covers_every_pair_once():
    rounds = round_robin(6)
    assert len(rounds) == 5
    seen = set()
    for left, right in rounds:
        players = np.concatenate([left, right])
        assert sorted(players.tolist()) == list(range(6))
        seen.update(frozenset(pair) for pair in zip(left.tolist(), right.tolist()))
    assert seen == {frozenset(pair) for pair in itertools.combinations(range(6), 2)}


@pytest.mark.parametrize("shape", [(7, 5), (6, 6), (9, 4)])
def test_jacobi_svd_matches_lapack(shape):
    matrix = np.random.default_rng(3).normal(size=shape)
    u, s, v = jacobi_svd(matrix)
    assert s == pytest.approx(np.linalg.svd(matrix, compute_uv=False), rel=1e-12)
    assert u @ np.diag(s) @ v.T == pytest.approx(matrix, abs=1e-12)
    assert u.T @ u == pytest.approx(np.eye(shape[1]), abs=1e-12)


# === ENUMERATION ===

def test_bruteforce_pair_factor(oracle_spectrum):
    lam = oracle_spectrum.lambdas
    expected = math.fsum(lam) ** 2 - math.fsum(lam ** 2)
    assert chi_bruteforce(oracle_spectrum, 2) == pytest.approx(expected, rel=1e-12)
    assert chi_bruteforce(oracle_spectrum, 0) == 1.0


def test_bruteforce_pauli_limit():
    spectrum = build_spectrum([0.5]).head(5)
    assert chi_bruteforce(spectrum, 6) == 0.0


def test_bruteforce_limits(half_spectrum):
    with pytest.raises(CapacityError):
        chi_bruteforce(half_spectrum, 2)
    with pytest.raises(CapacityError):
        chi_bruteforce(half_spectrum.head(8), 7)
    with pytest.raises(DomainError):
        chi_bruteforce(half_spectrum.head(8), 2, kind="anyonic")


def test_counting_over_all_modes(oracle_spectrum):
    distribution = counting_bruteforce(oracle_spectrum, 3, oracle_spectrum.J)
    assert distribution.probs[-1] == pytest.approx(1.0)
    assert distribution.variance == pytest.approx(0.0, abs=1e-14)


# === GRID SCHMIDT ===

@pytest.mark.slow
def test_separable_gaussian_has_one_mode():
    schmidt = grid_schmidt(GaussianSpec.from_mu(1.0))
    assert schmidt.occupations[0] == pytest.approx(1.0, abs=1e-8)
    assert schmidt.occupations[1] < 1e-10
    assert schmidt.levels == [160, 240, 320]


@pytest.mark.slow
def test_grid_spectrum_is_geometric():
    schmidt = grid_schmidt(GaussianSpec.from_mu(3.0, x0=1.5))
    assert schmidt.ratios(4) == pytest.approx(np.full(4, z_from_widths(3.0)), abs=1e-6)
    assert math.fsum(schmidt.occupations) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.slow
def test_reported_convergence_bounds_refinement_change():
    gaussian = GaussianSpec.from_mu(3.0, x0=1.5)
    schmidt = grid_schmidt(gaussian, GridSpec(points=100))
    assert schmidt.levels == [100, 150, 200]
    half_width = schmidt.grid.half_width
    spectra = [oracle_service._decompose(gaussian, half_width, points)[1] for points in schmidt.levels]
    keep = int(np.count_nonzero(spectra[0][:COMPARED_MODES] >= SIGNIFICANT_OCCUPATION))
    observed = [float(np.max(np.abs(level[:keep] - spectra[-1][:keep]))) for level in spectra[:-1]]
    assert schmidt.changes == pytest.approx(observed, abs=1e-15)
    assert schmidt.convergence >= max(observed)
    assert schmidt.convergence <= settings.SCHMIDT_TOL


def test_grid_guards():
    with pytest.raises(ResolutionError):
        grid_schmidt(GaussianSpec.from_mu(100.0), GridSpec(points=40))
    with pytest.raises(CoverageError):
        grid_schmidt(GaussianSpec.from_mu(1.0), GridSpec(points=200, half_width=1.0))


@pytest.mark.slow
@pytest.mark.parametrize("mu", [math.sqrt(3.0), 3.0])
def test_arbitration_selects_width_formula(mu, artifact_dir):
    report = arbitrate_zx(mu)
    (artifact_dir / f"zx_mu_{mu:.4f}.json").write_text(report.model_dump_json(indent=2))
    assert report.selected == "widths"
    assert report.deviations["widths"] <= report.tolerance
    assert report.deviations["curvature"] > 1e-2
    assert json.loads((artifact_dir / f"zx_mu_{mu:.4f}.json").read_text())["selected"] == "widths"


# === FOCK SPACE ===

def test_one_body_matrix_is_diagonal():
    state = fermion_pair_state([0.5, 0.3, 0.2], 2)
    rho = one_body_matrix(state, range(3))
    assert rho == pytest.approx(np.diag([0.25, 0.21, 0.16]) / 0.31, abs=1e-14)
    assert sum(c * c for c in state.values()) == pytest.approx(1.0)


def test_pauli_blocked_pair_state():
    with pytest.raises(DomainError):
        fermion_pair_state([1.0], 2)


def test_fock_density_norm():
    spectrum = build_spectrum([0.2]).head(6)
    basis = orbital_basis_for(2.0, 1.0, 6, validate=False)
    assert fock_density(spectrum, 2, basis, GridSpec(points=256)).norm == pytest.approx(4.0, rel=1e-8)


def test_bosonic_fock_norm_single_mode():
    assert bose_fock_norm([1.0], 2) == pytest.approx(2.0)
    assert bose_fock_norm([0.5, 0.5], 1) == pytest.approx(1.0)


def test_bose_convention_report(artifact_dir):
    report = bose_convention_report([0.3, 0.5], 2)
    (artifact_dir / "bose_convention.json").write_text(report.model_dump_json(indent=2))
    assert report.multiset == pytest.approx(1.0 + (0.7 / 1.3) * (0.5 / 1.5), rel=1e-10)
    assert report.axis_product == pytest.approx((1.0 + 0.7 / 1.3) * (1.0 + 0.5 / 1.5), rel=1e-10)
    assert report.fock_matches_multiset
    assert not report.product_matches_multiset


def test_bose_convention_limits():
    with pytest.raises(DomainError):
        bose_convention_report([0.3], 2)
    with pytest.raises(CapacityError):
        bose_convention_report([0.3, 0.5], 5)
