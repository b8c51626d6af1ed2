"""
Spectrum API Router - Harmonic approximation, Schmidt spectra and entropies
"""
import logging
from typing import List

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from api.common import InteractionRequest, SpectrumRequest, http_error, jsonable
from services.spectrum import build_spectrum, entropies, solve_equilibrium, z_from_mu, z_from_widths
from utils.errors import CobosonError


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api", tags=["spectrum"])


class ListingRequest(SpectrumRequest):
    limit: int = Field(default=50, ge=1, le=10_000)


class EntropyRequest(SpectrumRequest):
    alphas: List[float] = Field(default_factory=lambda: [2.0])


@router.post("/approx")
def approx(request: InteractionRequest):
    """
    Equilibrium separation, curvature ratio and both z_x candidates

    Returns:
        x0, μ, the strong-interaction flag and z_x by curvature and by widths
    """
    try:
        result = solve_equilibrium(request.spec())
        return {
            **result.model_dump(),
            "zx_curvature": z_from_mu(result.mu),
            "zx_widths": z_from_widths(result.mu),
        }
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/spectrum")
def spectrum(request: ListingRequest):
    """Leading occupations and labels of the truncated product spectrum"""
    try:
        result = build_spectrum(request.resolve_zs(), request.tail_tol)
        head = min(request.limit, result.J)
        return jsonable({
            "zs": result.zs,
            "J": result.J,
            "tail": result.tail,
            "lambdas": result.lambdas[:head],
            "labels": result.labels[:head],
        })
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/entropy")
def entropy(request: EntropyRequest):
    try:
        report = entropies(request.resolve_zs(), request.alphas)
        return jsonable(report.model_dump())
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
