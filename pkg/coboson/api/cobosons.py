"""
Coboson API Router - Normalization factors, populations, counting statistics and fits
"""
import logging
from typing import Literal, Optional

from fastapi import APIRouter, HTTPException
from pydantic import Field

from api.common import PairRequest, http_error, jsonable
from services.observables import counting, dos, fit_be, fit_fd, populations, shell_degeneracy
from services.spectrum import power_sums
from services.symfun import chi_bose, chi_fermi_dp, chi_fermi_newton, purity_bounds, ratio
from utils.errors import CobosonError, DomainError


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api", tags=["cobosons"])


class ChiRequest(PairRequest):
    kind: Literal["fermionic", "bosonic"] = "fermionic"
    method: Literal["dp", "newton"] = "dp"


class PopulationRequest(PairRequest):
    limit: int = Field(default=50, ge=1, le=10_000)


class CountingRequest(PairRequest):
    t: Optional[int] = Field(default=None, ge=1)


class FitRequest(PairRequest):
    model: Literal["fd", "be"] = "fd"
    degeneracy: Literal["1d", "2d"] = "1d"


@router.post("/chi")
def chi(request: ChiRequest):
    """
    χ_0..χ_N of the spectrum

    Returns:
        ln χ_n, χ_n, the truncation error bound and, for the Newton path,
        the estimated digits lost to cancellation
    """
    try:
        if request.method == "newton":
            if request.kind != "fermionic":
                raise DomainError("the Newton recursion is fermionic only")
            table = chi_fermi_newton(power_sums(request.resolve_zs()), request.N)
        else:
            spectrum = request.spectrum(request.N)
            table = chi_fermi_dp(spectrum, request.N) if request.kind == "fermionic" else chi_bose(spectrum, request.N)
        return jsonable({
            "kind": table.kind,
            "source": table.source,
            "logchi": table.logchi,
            "chi": [table.value(n) for n in range(table.N + 1)],
            "tail_bound": table.tail_bound,
            "digits_lost": table.digits_lost,
            "advisory": table.advisory,
        })
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/ratio")
def normalization_ratio(request: PairRequest):
    """χ_{N+1}/χ_N with its purity bounds"""
    try:
        zs = request.resolve_zs()
        table = chi_fermi_dp(request.spectrum(request.N + 1), request.N + 1)
        value = ratio(table, request.N)
        body = {"N": request.N, "ratio": value, "lower": None, "upper": None}
        if request.N >= 1:
            pair = purity_bounds(zs, request.N)
            body.update(lower=pair.lower, upper=pair.upper, linear_entropy=1.0 - pair.purity)
        return jsonable(body)
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/populations")
def mode_populations(request: PopulationRequest):
    try:
        spectrum = request.spectrum(request.N)
        profile = populations(spectrum, request.N)
        head = min(request.limit, spectrum.J)
        return jsonable({
            "N": request.N,
            "n": profile.n[:head],
            "lambdas": profile.lambdas[:head],
            "labels": spectrum.labels[:head],
            "sum_residual": profile.sum_residual,
        })
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/counting")
def counting_statistics(request: CountingRequest):
    """P(n) pairs within the t lowest modes (t defaults to N)"""
    try:
        t = request.t or max(request.N, 1)
        distribution = counting(request.spectrum(request.N), request.N, t)
        return jsonable(distribution.model_dump())
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/fit")
def distribution_fit(request: FitRequest):
    try:
        if request.N < 1:
            raise DomainError("fits need N >= 1", {"N": request.N})
        profile = populations(request.spectrum(request.N), request.N)
        g = shell_degeneracy(request.degeneracy, profile.n.size)
        fit = fit_fd if request.model == "fd" else fit_be
        result = fit(dos(profile, g), g, n_pairs=request.N)
        return jsonable({**result.model_dump(), "temperature_label": result.temperature_label})
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
