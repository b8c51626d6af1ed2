"""
Shared request models and response helpers for the API routers
"""
import logging
import math
from typing import Any, List, Optional

import numpy as np
from fastapi import HTTPException
from pydantic import BaseModel, Field, model_validator

from config import settings
from models.physics import InteractionSpec, SoftCoulombPotential, TrapSpec
from services.spectrum import spectrum_for_pairs, zs_from_physics
from utils.errors import CobosonError


logger = logging.getLogger(__name__)


class InteractionRequest(BaseModel):
    g: float = Field(gt=0)
    gamma: Optional[float] = Field(default=None, gt=0)
    softening: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_potential(self) -> "InteractionRequest":
        if (self.gamma is None) == (self.softening is None):
            raise ValueError("give exactly one of gamma or softening")
        return self

    def spec(self) -> InteractionSpec:
        if self.softening is not None:
            return InteractionSpec(strength=self.g, potential=SoftCoulombPotential(softening=self.softening))
        return InteractionSpec(strength=self.g, gamma=self.gamma)


class SpectrumRequest(BaseModel):
    """Generating parameters given directly (zs) or derived from an interaction"""

    zs: Optional[List[float]] = None
    interaction: Optional[InteractionRequest] = None
    anisotropies: List[float] = Field(default_factory=list)
    tail_tol: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_source(self) -> "SpectrumRequest":
        if (self.zs is None) == (self.interaction is None):
            raise ValueError("give exactly one of zs or interaction")
        if self.zs is not None and self.anisotropies:
            raise ValueError("anisotropies only apply to physical parameters")
        return self

    def resolve_zs(self) -> List[float]:
        if self.zs is not None:
            return list(self.zs)
        trap = TrapSpec(dimension=1 + len(self.anisotropies), anisotropies=self.anisotropies)
        return zs_from_physics(self.interaction.spec(), trap)

    def spectrum(self, n_pairs: int):
        return spectrum_for_pairs(self.resolve_zs(), n_pairs, self.tail_tol)


class PairRequest(SpectrumRequest):
    N: int = Field(ge=0, le=settings.PAIR_MAX)


def jsonable(value: Any) -> Any:
    """Arrays to lists and non-finite floats to strings, recursively"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def http_error(error: CobosonError) -> HTTPException:
    logger.warning("%s: %s", type(error).__name__, error.message)
    return HTTPException(status_code=error.status_code, detail=error.to_dict())
