"""
Tests for oscillator orbitals, density profiles and peak classification
"""
import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from config import settings
from models.density import DensityGrid, GridSpec, Regime
from models.physics import InteractionSpec
from services import density as density_service
from services.density import (
    classify,
    hermite_fn,
    hermite_functions,
    orbital_basis_for,
    peaks,
    profile,
    wigner_profile,
)
from services.oracle import fock_density
from services.spectrum import build_spectrum, z_from_widths
from utils.errors import BasisValidationError, CapacityError, CoverageError, DomainError


ROOT3 = math.sqrt(3.0)


# === OSCILLATOR EIGENFUNCTIONS ===

def test_hermite_values():
    assert hermite_fn(0, 0.0) == pytest.approx(np.pi ** -0.25)
    assert hermite_fn(1, 1.0) == pytest.approx(math.sqrt(2.0) * np.pi ** -0.25 * math.exp(-0.5))
    assert hermite_fn(2, 0.0) == pytest.approx(-np.pi ** -0.25 / math.sqrt(2.0))


def test_hermite_functions_are_orthonormal():
    xi = np.linspace(-15.0, 15.0, 3001)
    table = hermite_functions(32, xi)
    gram = table @ table.T * (xi[1] - xi[0])
    assert gram == pytest.approx(np.eye(32), abs=1e-10)
    assert table[5] == pytest.approx(hermite_fn(5, xi), abs=1e-14)


def test_hermite_limits():
    with pytest.raises(DomainError):
        hermite_fn(-1, 0.0)
    with pytest.raises(CapacityError):
        hermite_fn(settings.HERMITE_MAX_J + 1, 0.0)
    with pytest.raises(CapacityError):
        hermite_functions(settings.HERMITE_MAX_J + 2, np.zeros(3))


# === ORBITAL BASIS ===

def test_basis_without_validation():
    basis = orbital_basis_for(3.0, 2.0, 10, validate=False)
    assert basis.width == pytest.approx(3.0 ** -0.25)
    assert (basis.center_a, basis.center_b) == (-1.0, 1.0)
    assert basis.z_implied == pytest.approx(z_from_widths(3.0))
    assert basis.z_formula == pytest.approx(0.25)
    assert basis.overlaps == []


@pytest.mark.slow
@pytest.mark.parametrize("mu, x0", [(1.0, 0.0), (3.0, 2.0)])
def test_basis_matches_grid_schmidt_modes(mu, x0):
    basis = orbital_basis_for(mu, x0, 10)
    assert basis.overlaps
    assert min(basis.overlaps) >= 1.0 - 1e-6


def test_basis_rejects_disagreeing_modes(monkeypatch):
    monkeypatch.setattr(density_service, "_schmidt_overlaps", lambda mu, x0, count: (1.0, 0.5))
    with pytest.raises(BasisValidationError) as info:
        orbital_basis_for(2.0, 1.0, 4)
    assert info.value.details["overlaps"] == [1.0, 0.5]


def test_basis_domain():
    with pytest.raises(DomainError):
        orbital_basis_for(0.5, 1.0, 4, validate=False)
    with pytest.raises(DomainError):
        orbital_basis_for(2.0, 1.0, 0, validate=False)


# === PROFILES ===

def test_single_pair_ground_state_density():
    basis = orbital_basis_for(1.0, 2.0, 1, validate=False)
    grid = profile(0.0, 1, basis)
    expected = hermite_fn(0, grid.x + 1.0) ** 2 + hermite_fn(0, grid.x - 1.0) ** 2
    assert grid.rho_total == pytest.approx(expected, abs=1e-14)
    assert grid.norm == pytest.approx(2.0, rel=1e-10)


def test_profile_norm_and_mirror_symmetry():
    spectrum = build_spectrum([0.3], pad=4)
    basis = orbital_basis_for(4.0, 3.0, spectrum.J, validate=False)
    grid = profile(spectrum, 3, basis)
    assert grid.norm == pytest.approx(6.0, rel=1e-8)
    assert grid.rho_a == pytest.approx(grid.rho_b[::-1], abs=1e-12)
    assert grid.rho_total == pytest.approx(grid.rho_total[::-1], abs=1e-12)


def test_profile_matches_fock_state():
    mu, x0 = 3.0, 2.0
    spectrum = build_spectrum([z_from_widths(mu)]).head(8)
    basis = orbital_basis_for(mu, x0, 8, validate=False)
    grid = GridSpec(points=512)
    fast = profile(spectrum, 2, basis, grid)
    reference = fock_density(spectrum, 2, basis, grid)
    assert fast.x == pytest.approx(reference.x)
    assert fast.rho_total == pytest.approx(reference.rho_total, abs=1e-8)
    assert fast.rho_a == pytest.approx(reference.rho_a, abs=1e-8)


def test_profile_coverage_and_basis_size():
    spectrum = build_spectrum([0.3])
    wide = orbital_basis_for(2.0, 1.0, spectrum.J, validate=False)
    with pytest.raises(CoverageError):
        profile(spectrum, 2, wide, GridSpec(points=64, half_width=0.5))
    narrow = orbital_basis_for(2.0, 1.0, 2, validate=False)
    with pytest.raises(DomainError):
        profile(spectrum, 2, narrow)


def test_two_axis_spectrum_is_rejected():
    spectrum = build_spectrum([0.3, 0.3])
    basis = orbital_basis_for(2.0, 1.0, 100, validate=False)
    with pytest.raises(DomainError):
        profile(spectrum, 1, basis)


# === PEAKS AND REGIMES ===

def _bumps(centres):
    x = np.linspace(-8.0, 8.0, 801)
    rho = sum(np.exp(-(x - c) ** 2) for c in centres)
    return DensityGrid(x=x, rho_a=rho / 2.0, rho_b=rho / 2.0, rho_total=rho, norm=float(trapezoid(rho, x)))


def test_peak_count():
    assert peaks(_bumps([-3.0, 3.0])) == 2
    assert peaks(_bumps([-4.5, -1.5, 1.5, 4.5])) == 4
    assert peaks(_bumps([-0.2, 0.2])) == 1


def test_prominence_range():
    with pytest.raises(DomainError):
        peaks(_bumps([0.0]), prominence=0.6)


def test_classify():
    assert classify(3, 3) is Regime.FRIEDEL
    assert classify(6, 3) is Regime.WIGNER
    assert classify(4, 3) is Regime.INTERMEDIATE


def test_separation_only_adds_peaks():
    mu = ROOT3
    counts = []
    for x0 in np.linspace(0.0, 6.0, 24):
        basis = orbital_basis_for(mu, float(x0), 64, validate=False)
        counts.append(peaks(profile(z_from_widths(mu), 1, basis)))
    assert counts[0] == 1
    assert counts[-1] == 2
    assert np.all(np.diff(counts) >= 0)


def test_strong_coupling_crystallizes():
    result = wigner_profile(InteractionSpec(strength=20.0, gamma=1.0), 2, validate=False)
    assert result.separation == pytest.approx(4.94, abs=0.01)
    assert result.peaks == 4
    assert result.regime is Regime.WIGNER
    assert result.grid.norm == pytest.approx(4.0, rel=1e-8)


def test_weak_coupling_stays_friedel():
    result = wigner_profile(InteractionSpec(strength=0.01, gamma=1.0), 2, validate=False)
    assert result.separation == pytest.approx(0.39, abs=0.01)
    assert not result.approx.valid
    assert result.peaks == 2
    assert result.regime is Regime.FRIEDEL
