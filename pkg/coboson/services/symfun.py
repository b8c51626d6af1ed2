"""
Symfun Service - Fermionic and bosonic normalization factors χ_n

χ_n^F = n!·e_n(λ) and χ_n^B = n!·h_n(λ) with e_n, h_n the elementary and
complete homogeneous symmetric polynomials of the occupations. The production
path is an all-positive dynamic program in log domain; the Newton-identity
recursion and the partition formula run in extended precision and serve as
cross-checks.
"""
import logging
import math
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath as mp
import numpy as np
from scipy import special

from config import settings
from models.physics import OccupationSpectrum
from models.tables import BoundPair, ChiTable, PartitionSum
from services.spectrum import power_sum
from utils.errors import AccuracyError, CapacityError, DomainError, UndefinedRatioError


logger = logging.getLogger(__name__)

PowerSums = Union[Sequence[float], Callable[[int], "mp.mpf"]]

# digits two consecutive precisions must share before a result is accepted
AGREEMENT_DIGITS = 20
DOUBLE_DIGITS = 15.95
TARGET_DIGITS = 8


# === DYNAMIC PROGRAMS ===

def log_elementary(log_lambdas: np.ndarray, N: int) -> np.ndarray:
    """ln e_k for k = 0..N, accumulated over modes in the given order"""
    e = np.full(N + 1, -np.inf)
    e[0] = 0.0
    for ll in log_lambdas:
        e[1:] = np.logaddexp(e[1:], ll + e[:-1])
    return e


def log_complete(log_lambdas: np.ndarray, N: int) -> np.ndarray:
    """ln h_k for k = 0..N; each mode folds in as h_k ← Σ_i λ^i h_{k−i}"""
    h = np.full(N + 1, -np.inf)
    h[0] = 0.0
    steps = np.arange(N + 1)
    lag = steps[:, None] - steps[None, :]
    allowed = lag >= 0
    source = np.where(allowed, lag, 0)
    for ll in log_lambdas:
        terms = np.where(allowed, h[source] + steps[None, :] * ll, -np.inf)
        h = special.logsumexp(terms, axis=1)
    return h


def _log_factorials(N: int) -> np.ndarray:
    out = special.gammaln(np.arange(N + 1) + 1.0)
    out[0] = 0.0
    return out


def _tail_bound(spectrum: OccupationSpectrum, N: int) -> np.ndarray:
    """n·tail/λ_n with λ_n the n-th largest retained occupation"""
    n = np.arange(N + 1)
    pick = np.clip(n - 1, 0, spectrum.J - 1)
    bound = n * spectrum.tail * np.exp(-spectrum.log_lambdas[pick])
    bound[0] = 0.0
    return bound


def _dp_table(spectrum: OccupationSpectrum, log_lambdas: np.ndarray, N: int, kind: str) -> ChiTable:
    if N < 0:
        raise DomainError("pair count must be >= 0", {"N": N})
    if kind == "fermionic":
        log_sym = log_elementary(log_lambdas, N)
    elif kind == "bosonic":
        log_sym = log_complete(log_lambdas, N)
    else:
        raise DomainError(f"unknown statistics {kind!r}")
    logchi = _log_factorials(N) + log_sym
    logchi[0] = 0.0
    return ChiTable(kind=kind, logchi=logchi, source="dp", tail_bound=_tail_bound(spectrum, N))


def chi_fermi_dp(spectrum: OccupationSpectrum, N: int) -> ChiTable:
    """
    Fermionic χ_0..χ_N by the elementary-symmetric dynamic program

    Args:
        spectrum: Retained occupations, processed in their stored order
        N: Highest pair count

    Returns:
        ChiTable; entries with n > J are -inf (Pauli blocking)
    """
    return _dp_table(spectrum, spectrum.log_lambdas, N, "fermionic")


def chi_bose(spectrum: OccupationSpectrum, N: int) -> ChiTable:
    """Bosonic χ_0..χ_N by the complete-homogeneous dynamic program"""
    return _dp_table(spectrum, spectrum.log_lambdas, N, "bosonic")


def chi_excluding(spectrum: OccupationSpectrum, label, N: int, kind: str = "fermionic") -> ChiTable:
    """χ table of the spectrum with one labelled mode removed, recomputed from scratch"""
    try:
        index = spectrum.index_of(label)
    except KeyError:
        raise DomainError(f"unknown mode label {label!r}", {"label": str(label)}) from None
    remaining = np.delete(spectrum.log_lambdas, index)
    return _dp_table(spectrum, remaining, N, kind)


def chi_subset(
    spectrum: OccupationSpectrum,
    t: int,
    n: int,
    complement: bool = False,
    kind: str = "fermionic",
) -> ChiTable:
    """
    χ table up to n over the first t modes, or over the remaining modes

    Args:
        t: Window size, 0 <= t <= J
        complement: Use modes t..J−1 instead of 0..t−1
    """
    if not 0 <= t <= spectrum.J:
        raise DomainError("window must satisfy 0 <= t <= J", {"t": t, "J": spectrum.J})
    if n < 0:
        raise DomainError("pair count must be >= 0", {"n": n})
    window = spectrum.log_lambdas[t:] if complement else spectrum.log_lambdas[:t]
    return _dp_table(spectrum, window, n, kind)


def log_excluded_all(log_lambdas: np.ndarray, N: int) -> np.ndarray:
    """
    ln e_{N−1} of the spectrum without mode j, for every j at once.

    Splices prefix and suffix tables, ln e^{(j)}_{N−1} = logsumexp_k
    P_j[k] + S_{j+1}[N−1−k], so every step stays all-positive.
    """
    J = log_lambdas.size
    width = N
    base = np.full(width, -np.inf)
    base[0] = 0.0

    prefix = np.empty((J + 1, width))
    prefix[0] = base
    for m in range(J):
        prefix[m + 1] = prefix[m]
        prefix[m + 1, 1:] = np.logaddexp(prefix[m, 1:], log_lambdas[m] + prefix[m, :-1])

    suffix = np.empty((J + 1, width))
    suffix[J] = base
    for m in range(J - 1, -1, -1):
        suffix[m] = suffix[m + 1]
        suffix[m, 1:] = np.logaddexp(suffix[m + 1, 1:], log_lambdas[m] + suffix[m + 1, :-1])

    combined = prefix[:J] + suffix[1:, ::-1]
    with np.errstate(divide="ignore"):
        return special.logsumexp(combined, axis=1)


def chi_excluding_all(spectrum: OccupationSpectrum, N: int) -> np.ndarray:
    """ln χ_{N−1} without mode j, for all retained modes j"""
    if N < 1:
        raise DomainError("mode exclusion needs N >= 1", {"N": N})
    return special.gammaln(N) + log_excluded_all(spectrum.log_lambdas, N)


# === EXTENDED PRECISION ===

def _source_at_precision(power_sums: PowerSums, N: int) -> List:
    if callable(power_sums):
        return [None] + [mp.mpf(power_sums(m)) for m in range(1, N + 1)]
    values = list(power_sums)
    if len(values) < N:
        raise DomainError("power sums M(1..N) are required", {"given": len(values), "N": N})
    return [None] + [mp.mpf(float(v)) for v in values[:N]]


def _cancellation(terms: Sequence, value) -> float:
    scale = max(abs(term) for term in terms) if terms else mp.mpf(0)
    if scale == 0:
        return 0.0
    if value == 0:
        return math.inf
    return max(0.0, float(mp.log10(scale / abs(value))))


def _agree(first: Sequence, second: Sequence) -> bool:
    limit = mp.mpf(10) ** -AGREEMENT_DIGITS
    for a, b in zip(first, second):
        if a == b:
            continue
        if abs(a - b) > limit * abs(b):
            return False
    return True


def _adaptive(evaluate: Callable[[], Tuple[List, float]], label: str) -> Tuple[List, float]:
    """
    Run `evaluate` at rising mpmath precision until two passes agree.

    Each pass reports its own digit-loss estimate; the next precision covers
    that loss with margin. Exceeding the budget raises AccuracyError.
    """
    dps = settings.NEWTON_DPS
    previous = None
    while True:
        if dps > settings.DPS_BUDGET:
            raise AccuracyError(
                f"{label} lost more digits than the precision budget of {settings.DPS_BUDGET}; "
                "use chi_fermi_dp instead",
                {"dps": dps, "budget": settings.DPS_BUDGET},
            )
        with mp.workdps(dps):
            values, lost = evaluate()
        if previous is not None and _agree(previous, values):
            logger.debug("%s settled at %d digits (estimated loss %.1f)", label, dps, lost)
            return values, lost
        previous = values
        needed = lost + AGREEMENT_DIGITS + 20 if math.isfinite(lost) else 2 * dps
        dps = int(max(dps + 20, math.ceil(needed)))
        logger.debug("%s escalating precision to %d digits", label, dps)


def _to_logchi(values: Sequence) -> np.ndarray:
    out = np.empty(len(values))
    for n, value in enumerate(values):
        out[n] = float(mp.log(value)) if value > 0 else -np.inf
    out[0] = 0.0
    return out


def _advisory(power_sums: PowerSums, lost: float, label: str):
    if callable(power_sums) or lost <= DOUBLE_DIGITS - TARGET_DIGITS:
        return None
    message = (
        f"{label}: double-precision power sums with about {lost:.0f} digits of cancellation; "
        "pass a precision-aware source or use chi_fermi_dp"
    )
    logger.warning(message)
    return message


def chi_fermi_newton(power_sums: PowerSums, N: int) -> ChiTable:
    """
    Fermionic χ_0..χ_N from power sums via the Newton-identity recursion

    χ_n = Σ_{m=1}^{n} (n−1)!/(n−m)! (−1)^{m+1} χ_{n−m} M(m), evaluated in
    mpmath at a precision that covers the alternating-sign cancellation.

    Args:
        power_sums: M(1..N) as numbers, or a callable m -> M(m) re-evaluated
            at the working precision (see spectrum.power_sums)
        N: Highest pair count

    Returns:
        ChiTable with source "newton", estimated digits lost and an advisory
        when double-precision inputs cannot carry the cancellation
    """
    if N < 0:
        raise DomainError("pair count must be >= 0", {"N": N})

    def evaluate():
        M = _source_at_precision(power_sums, N)
        chi = [mp.mpf(1)]
        lost = 0.0
        for n in range(1, N + 1):
            terms = []
            coeff = mp.mpf(1)
            for m in range(1, n + 1):
                if m > 1:
                    coeff *= n - m + 1
                term = coeff * chi[n - m] * M[m]
                terms.append(term if m % 2 == 1 else -term)
            value = mp.fsum(terms)
            lost += _cancellation(terms, value)
            chi.append(value)
        return chi, lost

    values, lost = _adaptive(evaluate, "newton recursion")
    return ChiTable(
        kind="fermionic",
        logchi=_to_logchi(values),
        source="newton",
        digits_lost=lost,
        advisory=_advisory(power_sums, lost, "newton recursion"),
    )


def integer_partitions(n: int, largest: Optional[int] = None) -> Iterator[Dict[int, int]]:
    """Partitions of n as {part: multiplicity}, largest parts first"""
    if n == 0:
        yield {}
        return
    largest = n if largest is None else min(largest, n)
    for part in range(largest, 0, -1):
        for rest in integer_partitions(n - part, part):
            counts = dict(rest)
            counts[part] = counts.get(part, 0) + 1
            yield counts


def chi_fermi_partition(power_sums: PowerSums, N: int) -> PartitionSum:
    """
    Fermionic χ_N from the non-recursive partition formula

    χ_N = N!·Σ (−1)^{Σk_i + N} Π (M(i)/i)^{k_i}/k_i! over k_1 + 2k_2 + … + Nk_N = N.
    The k_1 = N term is (M(1))^N and is reported separately as the leading
    term; near the symmetric limit the remainder vanishes.
    """
    if N < 0:
        raise DomainError("pair count must be >= 0", {"N": N})
    if N > settings.PARTITION_MAX_N:
        raise CapacityError(
            f"partition formula is limited to N <= {settings.PARTITION_MAX_N}",
            {"N": N, "limit": settings.PARTITION_MAX_N},
        )
    partitions = list(integer_partitions(N))

    def evaluate():
        M = _source_at_precision(power_sums, N)
        prefactor = mp.factorial(N)
        terms = []
        leading = mp.mpf(1) if N == 0 else None
        for counts in partitions:
            term = prefactor
            for part, mult in counts.items():
                term *= (M[part] / part) ** mult / mp.factorial(mult)
            if (sum(counts.values()) + N) % 2:
                term = -term
            if counts == {1: N}:
                leading = term
            terms.append(term)
        value = mp.fsum(terms) if terms else mp.mpf(1)
        return [value, leading, value - leading], _cancellation(terms, value)

    (value, leading, remainder), lost = _adaptive(evaluate, "partition formula")
    _advisory(power_sums, lost, "partition formula")
    return PartitionSum(
        N=N,
        value=float(value),
        leading=float(leading),
        remainder=float(remainder),
        terms=len(partitions),
        digits_lost=lost,
    )


# === RATIOS AND BOUNDS ===

def ratio(table: ChiTable, N: Optional[int] = None) -> float:
    """χ_{N+1}/χ_N from a table holding entries up to N + 1 (default: its last pair)"""
    N = table.N - 1 if N is None else int(N)
    if not 0 <= N < table.N:
        raise DomainError("table must hold entries N and N + 1", {"N": N, "table_N": table.N})
    numerator, denominator = table.logchi[N + 1], table.logchi[N]
    if denominator == -np.inf:
        raise UndefinedRatioError(f"χ_{N} is zero, ratio undefined", {"N": N})
    if numerator == -np.inf:
        return 0.0
    return math.exp(numerator - denominator)


def ratios(table: ChiTable) -> np.ndarray:
    """χ_{n+1}/χ_n for n = 0..N−1 wherever χ_n > 0"""
    out = np.full(table.N, np.nan)
    for n in range(table.N):
        if table.logchi[n] > -np.inf:
            out[n] = ratio(table, n)
    return out


def bounds(P: float, N: int) -> BoundPair:
    """Purity bounds on the fermionic normalization ratio"""
    if not 0.0 < P <= 1.0:
        raise DomainError("purity must lie in (0, 1]", {"P": P})
    if N < 1:
        raise DomainError("bounds need N >= 1", {"N": N})
    return BoundPair(purity=P, N=N, lower=1.0 - N * P, upper=1.0 - P)


def purity_bounds(zs: Sequence[float], N: int) -> BoundPair:
    return bounds(power_sum(zs, 2), N)
