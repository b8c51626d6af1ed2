"""
Density API Router - Friedel/Wigner density profiles
"""
import logging
from typing import Optional

from fastapi import APIRouter, HTTPException
from pydantic import Field

from api.common import InteractionRequest, http_error, jsonable
from config import settings
from models.density import GridSpec
from services.density import wigner_profile
from utils.errors import CobosonError


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api", tags=["density"])


class DensityRequest(InteractionRequest):
    N: int = Field(ge=1, le=1000)
    points: int = Field(default=settings.GRID_POINTS, ge=16, le=65_536)
    prominence: Optional[float] = Field(default=None, gt=0, lt=0.5)
    validate_basis: bool = True
    include_grid: bool = False


@router.post("/density")
def density(request: DensityRequest):
    """
    Density profile of N pairs with its peak count and regime

    Args:
        request: Interaction, pair count, grid size and whether to return the sampled profile

    Returns:
        Equilibrium, orbital width, z_x values, peaks, regime and optionally x/ϱ arrays
    """
    try:
        result = wigner_profile(
            request.spec(),
            request.N,
            GridSpec(points=request.points),
            request.prominence,
            validate=request.validate_basis,
        )
        body = {
            "N": result.N,
            "x0": result.approx.x0,
            "mu": result.approx.mu,
            "valid": result.approx.valid,
            "width": result.basis.width,
            "separation": result.separation,
            "z_implied": result.basis.z_implied,
            "z_formula": result.basis.z_formula,
            "peaks": result.peaks,
            "regime": result.regime.value,
            "norm": result.grid.norm,
        }
        if request.include_grid:
            body.update(
                x=result.grid.x,
                rho_a=result.grid.rho_a,
                rho_b=result.grid.rho_b,
                rho_total=result.grid.rho_total,
            )
        return jsonable(body)
    except CobosonError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
