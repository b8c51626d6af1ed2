"""
Density Models - Orbital basis, sampled densities and grid Schmidt decompositions
"""
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.physics import HarmonicApprox


class Regime(str, Enum):
    FRIEDEL = "Friedel"
    WIGNER = "Wigner"
    INTERMEDIATE = "Intermediate"


class GaussianSpec(BaseModel):
    """Shifted two-body Gaussian: centre-of-mass width σ_R, relative width σ_r, separation x0"""

    model_config = ConfigDict(frozen=True)

    sigma_R: float = Field(gt=0)
    sigma_r: float = Field(gt=0)
    x0: float = Field(default=0.0, ge=0)

    @classmethod
    def from_mu(cls, mu: float, x0: float = 0.0) -> "GaussianSpec":
        """Harmonic ground state with σ_R² = 1/2 and σ_r² = 2/μ"""
        return cls(sigma_R=np.sqrt(0.5), sigma_r=np.sqrt(2.0 / mu), x0=x0)


class GridSpec(BaseModel):
    """Uniform grid; `half_width` None means the caller picks the coverage"""

    model_config = ConfigDict(frozen=True)

    points: int = Field(ge=16)
    half_width: Optional[float] = Field(default=None, gt=0)


class OrbitalBasis(BaseModel):
    """Shifted oscillator eigenfunctions of common width w for both species"""

    model_config = ConfigDict(frozen=True)

    width: float = Field(gt=0)
    x0: float = Field(ge=0)
    J: int = Field(ge=1)
    mu: float = Field(ge=1)
    z_implied: float = Field(ge=0, lt=1)
    z_formula: float = Field(ge=0, lt=1)
    overlaps: List[float] = Field(default_factory=list)

    @property
    def center_a(self) -> float:
        return -self.x0 / 2.0

    @property
    def center_b(self) -> float:
        return self.x0 / 2.0


class DensityGrid(BaseModel):
    """ϱ(x) per species and total on a uniform grid"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    rho_a: np.ndarray
    rho_b: np.ndarray
    rho_total: np.ndarray
    norm: float

    @model_validator(mode="after")
    def _shapes(self) -> "DensityGrid":
        if not (self.x.shape == self.rho_a.shape == self.rho_b.shape == self.rho_total.shape):
            raise ValueError("density arrays must share the grid shape")
        return self

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])


class GridSchmidt(BaseModel):
    """Numerical Schmidt decomposition of a sampled two-body kernel"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    occupations: np.ndarray
    modes_a: np.ndarray
    modes_b: np.ndarray
    x: np.ndarray
    gaussian: GaussianSpec
    grid: GridSpec
    convergence: float = Field(ge=0)
    levels: List[int]
    changes: List[float] = Field(default_factory=list)

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    def ratios(self, count: int) -> np.ndarray:
        """λ̂_{j+1}/λ̂_j for j < count"""
        occ = self.occupations[: count + 1]
        return occ[1:] / occ[:-1]


class ZxArbitration(BaseModel):
    """Which z_x formula the grid Schmidt spectrum supports"""

    model_config = ConfigDict(frozen=True)

    mu: float
    svd_ratio: float
    ratio_spread: float
    candidates: Dict[str, float]
    deviations: Dict[str, float]
    selected: Optional[str]
    tolerance: float


class WignerProfile(BaseModel):
    """Physics-to-profile pipeline result"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    approx: HarmonicApprox
    basis: OrbitalBasis
    grid: DensityGrid
    N: int
    peaks: int
    regime: Regime

    @property
    def separation(self) -> float:
        """x0/w"""
        return self.approx.x0 / self.basis.width
