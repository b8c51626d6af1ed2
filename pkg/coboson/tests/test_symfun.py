"""
Tests for normalization factors, ratios and purity bounds
"""
import math

import numpy as np
import pytest

from config import settings
from models.physics import OccupationSpectrum
from services.oracle import chi_bruteforce
from services.spectrum import build_spectrum, power_sum, power_sums, spectrum_for_pairs
from services.symfun import (
    bounds,
    chi_bose,
    chi_excluding,
    chi_excluding_all,
    chi_fermi_dp,
    chi_fermi_newton,
    chi_fermi_partition,
    chi_subset,
    integer_partitions,
    purity_bounds,
    ratio,
    ratios,
)
from utils.errors import AccuracyError, CapacityError, DomainError, UndefinedRatioError


FIG1_N = [1, 2, 5, 10, 15, 20, 150]


def _without_first(spectrum: OccupationSpectrum) -> OccupationSpectrum:
    return OccupationSpectrum(
        log_lambdas=spectrum.log_lambdas[1:],
        labels=spectrum.labels[1:],
        zs=spectrum.zs,
        tail=spectrum.tail + spectrum.lambdas[0],
    )


# === DYNAMIC PROGRAMS ===

def test_first_factor_is_retained_mass(half_spectrum):
    table = chi_fermi_dp(half_spectrum, 1)
    assert table.logchi[0] == 0.0
    assert table.value(1) == pytest.approx(1.0 - half_spectrum.tail, rel=1e-12)


def test_fermionic_pair_factor(half_spectrum):
    assert chi_fermi_dp(half_spectrum, 2).value(2) == pytest.approx(2.0 / 3.0, rel=1e-10)


def test_bosonic_pair_factor(half_spectrum):
    table = chi_bose(half_spectrum, 2)
    assert table.value(1) == pytest.approx(1.0, rel=1e-10)
    assert table.value(2) == pytest.approx(4.0 / 3.0, rel=1e-10)


@pytest.mark.parametrize("z", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("kind, chi", [("fermionic", chi_fermi_dp), ("bosonic", chi_bose)])
def test_dp_matches_enumeration(z, kind, chi):
    spectrum = build_spectrum([z]).head(12)
    table = chi(spectrum, 6)
    for N in range(1, 7):
        assert table.value(N) == pytest.approx(chi_bruteforce(spectrum, N, kind), rel=1e-10)


def test_bosonic_multisets_on_ten_modes(half_spectrum):
    spectrum = half_spectrum.head(10)
    assert chi_bose(spectrum, 3).value(3) == pytest.approx(chi_bruteforce(spectrum, 3, "bosonic"), rel=1e-10)


def test_pauli_blocking_is_exact_zero():
    table = chi_fermi_dp(build_spectrum([0.0]), 3)
    assert table.logchi[1] == 0.0
    assert table.logchi[2] == -np.inf
    assert table.value(3) == 0.0


def test_tail_bound_is_attached(half_spectrum):
    table = chi_fermi_dp(half_spectrum, 3)
    assert table.tail_bound[0] == 0.0
    assert table.tail_bound[1] == pytest.approx(half_spectrum.tail / half_spectrum.lambdas[0])
    assert table.tail_bound[3] == pytest.approx(3.0 * half_spectrum.tail / half_spectrum.lambdas[2])
    assert table.tail_bound[3] < 3.0 * half_spectrum.tail / half_spectrum.lambdas[-1]


def test_bosonic_enhancement():
    for z in (0.2, 0.5, 0.8):
        values = ratios(chi_bose(spectrum_for_pairs([z], 21), 21))
        assert np.all(values[1:] >= 1.0)


# === EXTENDED PRECISION ===

@pytest.mark.parametrize("z", [0.3, 0.6, 0.9])
def test_newton_matches_dp(z):
    dp = chi_fermi_dp(spectrum_for_pairs([z], 20), 20)
    newton = chi_fermi_newton(power_sums([z]), 20)
    assert newton.source == "newton"
    assert np.exp(newton.logchi - dp.logchi) == pytest.approx(np.ones(21), rel=1e-8)


def test_newton_small_cases():
    table = chi_fermi_newton([1.0, 1.0 / 3.0], 2)
    assert table.value(1) == pytest.approx(1.0)
    assert table.value(2) == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_double_inputs_raise_an_advisory():
    values = [power_sum([0.3], m) for m in range(1, 21)]
    table = chi_fermi_newton(values, 20)
    assert table.advisory is not None
    assert table.digits_lost > 8


def test_precision_budget(monkeypatch):
    monkeypatch.setattr(settings, "DPS_BUDGET", 60)
    with pytest.raises(AccuracyError):
        chi_fermi_newton(power_sums([0.3]), 20)


def test_partition_pair_algebra():
    result = chi_fermi_partition([1.0, 1.0 / 3.0], 2)
    assert result.value == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert result.leading == pytest.approx(1.0)
    assert result.remainder == pytest.approx(-1.0 / 3.0, rel=1e-14)
    assert result.terms == 2


@pytest.mark.parametrize("z, N, rel", [(0.6, 6, 1e-9), (0.3, 20, 1e-8), (0.9, 20, 1e-8)])
def test_partition_matches_dp(z, N, rel):
    dp = chi_fermi_dp(spectrum_for_pairs([z], N), N)
    partition = chi_fermi_partition(power_sums([z]), N)
    assert partition.value == pytest.approx(dp.value(N), rel=rel)


def test_partition_near_isotropic_limit():
    assert abs(chi_fermi_partition(power_sums([0.0718, 0.9999]), 5).value - 1.0) < 1e-3
    source = power_sums([0.0718, 1.0 - 1e-6])
    for N in range(1, 11):
        assert 0.99 <= chi_fermi_partition(source, N).value <= 1.0


def test_partition_guard():
    with pytest.raises(CapacityError):
        chi_fermi_partition(power_sums([0.5]), settings.PARTITION_MAX_N + 1)


def test_integer_partitions():
    assert len(list(integer_partitions(5))) == 7
    assert all(sum(part * mult for part, mult in p.items()) == 5 for p in integer_partitions(5))


# === RATIOS AND BOUNDS ===

def test_ratio_near_isotropic_axis():
    z = 1.0 - 1e-6
    table = chi_fermi_newton(power_sums([z]), 2)
    assert ratio(table, 1) == pytest.approx(1.0 - (1.0 - z) / (1.0 + z), rel=1e-12)


def test_ratio_under_pauli_blocking():
    table = chi_fermi_dp(build_spectrum([0.0]), 3)
    assert ratio(table, 1) == 0.0
    with pytest.raises(UndefinedRatioError):
        ratio(table, 2)


def test_ratio_needs_both_entries(half_spectrum):
    with pytest.raises(DomainError):
        ratio(chi_fermi_dp(half_spectrum, 2), 2)


def test_ratio_within_bounds():
    table = chi_fermi_dp(spectrum_for_pairs([0.9], 11), 11)
    assert purity_bounds([0.9], 10).contains(ratio(table, 10))


def test_bound_values():
    single = bounds(1.0, 1)
    assert (single.lower, single.upper) == (0.0, 0.0)
    pair = purity_bounds([0.95], 5)
    assert pair.purity == pytest.approx(1.0 / 39.0)
    assert pair.lower == pytest.approx(0.8718, abs=1e-4)
    assert pair.upper == pytest.approx(0.9744, abs=1e-4)
    coulomb = purity_bounds([0.0718, 0.9999], 100)
    assert coulomb.lower == pytest.approx(0.9957, abs=1e-4)


def test_bounds_domain():
    with pytest.raises(DomainError):
        bounds(0.0, 1)
    with pytest.raises(DomainError):
        bounds(0.5, 0)


def test_ratio_sweep_stays_within_bounds():
    for z in np.linspace(0.01, 0.99, 200):
        table = chi_fermi_dp(spectrum_for_pairs([z], 151), 151)
        for N in FIG1_N:
            assert purity_bounds([z], N).contains(ratio(table, N), slack=1e-10)


def test_large_ensemble_near_unit_ratio():
    z = 0.9999
    table = chi_fermi_dp(spectrum_for_pairs([z], 151), 151)
    assert ratio(table, 150) >= 1.0 - 150.0 * (1.0 - z) / (1.0 + z)


def test_coulomb_two_dimensional_ratio():
    zs = [0.0718, 0.9999]
    table = chi_fermi_newton(power_sums(zs), 101)
    for N in (1, 10, 50, 100):
        assert purity_bounds(zs, N).contains(ratio(table, N), slack=1e-10)
    assert ratio(table, 100) >= 0.9956


# === EXCLUSIONS AND WINDOWS ===

def test_excluding_the_only_mode():
    table = chi_excluding(build_spectrum([0.0]), 0, 0)
    assert table.value(0) == 1.0


def test_excluding_the_largest_mode(oracle_spectrum):
    table = chi_excluding(oracle_spectrum, 0, 2)
    reference = chi_bruteforce(_without_first(oracle_spectrum), 2)
    assert table.value(2) == pytest.approx(reference, rel=1e-10)


def test_spliced_exclusions_match_recomputation(oracle_spectrum):
    N = 4
    spliced = chi_excluding_all(oracle_spectrum, N)
    for j in range(oracle_spectrum.J):
        recomputed = chi_excluding(oracle_spectrum, oracle_spectrum.label(j), N - 1)
        assert math.exp(spliced[j] - recomputed.logchi[N - 1]) == pytest.approx(1.0, rel=1e-10)


def test_unknown_label(oracle_spectrum):
    with pytest.raises(DomainError):
        chi_excluding(oracle_spectrum, 99, 2)


def test_subset_windows(half_spectrum):
    assert chi_subset(half_spectrum, 3, 0).value(0) == 1.0
    assert chi_subset(half_spectrum, 3, 4).value(4) == 0.0
    lam = half_spectrum.lambdas
    expected = 2.0 * (lam[0] * lam[1] + lam[0] * lam[2] + lam[1] * lam[2])
    assert chi_subset(half_spectrum, 3, 2).value(2) == pytest.approx(expected, rel=1e-12)


def test_window_convolution_identity():
    spectrum = spectrum_for_pairs([0.6], 6)
    N, t = 6, 4
    inside = chi_subset(spectrum, t, N)
    outside = chi_subset(spectrum, t, N, complement=True)
    total = math.fsum(math.comb(N, n) * inside.value(n) * outside.value(N - n) for n in range(N + 1))
    assert total == pytest.approx(chi_fermi_dp(spectrum, N).value(N), rel=1e-10)


def test_subset_window_range(half_spectrum):
    with pytest.raises(DomainError):
        chi_subset(half_spectrum, half_spectrum.J + 1, 1)
