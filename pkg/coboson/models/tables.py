"""
Table Models - Normalization factors, populations, fits and counting statistics
"""
import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings


ChiKind = Literal["fermionic", "bosonic"]
ChiSource = Literal["dp", "newton", "partition"]


class ChiTable(BaseModel):
    """
    ln χ_n for n = 0..N of one spectrum.

    Zero entries (Pauli blocking) are stored as -inf. `tail_bound[n]` is the
    heuristic relative error n·tail/λ_n propagated from spectrum truncation.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: ChiKind
    logchi: np.ndarray
    source: ChiSource
    tail_bound: Optional[np.ndarray] = None
    digits_lost: float = 0.0
    advisory: Optional[str] = None

    @field_validator("logchi")
    @classmethod
    def _entries(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if value.ndim != 1 or value.size == 0:
            raise ValueError("logchi needs at least the n = 0 entry")
        if value[0] != 0.0:
            raise ValueError("ln χ_0 must be 0")
        if np.any(np.isnan(value)) or np.any(value == np.inf):
            raise ValueError("entries must be finite or -inf")
        return value

    @property
    def N(self) -> int:
        return int(self.logchi.size - 1)

    def value(self, n: int) -> float:
        """χ_n as a float; may underflow to 0 for long tables"""
        return math.exp(self.logchi[n]) if self.logchi[n] > -np.inf else 0.0


class BoundPair(BaseModel):
    """Purity bounds 1 − NP ≤ χ_{N+1}/χ_N ≤ 1 − P"""

    model_config = ConfigDict(frozen=True)

    purity: float = Field(gt=0, le=1)
    N: int = Field(ge=1)
    lower: float
    upper: float

    @model_validator(mode="after")
    def _ordered(self) -> "BoundPair":
        if not self.lower <= self.upper <= 1.0:
            raise ValueError("bounds must satisfy lower <= upper <= 1")
        return self

    def contains(self, ratio: float, slack: float = 1e-12) -> bool:
        return max(0.0, self.lower) - slack <= ratio <= self.upper + slack


class PopulationProfile(BaseModel):
    """Per-mode populations n_j of the N-pair state"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: np.ndarray
    lambdas: np.ndarray
    N: int = Field(ge=0)
    sum_residual: float = Field(ge=0)

    @field_validator("n")
    @classmethod
    def _pauli(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if np.any(value < 0) or np.any(value > 1.0 + 1e-10):
            raise ValueError("populations must lie in [0, 1]")
        return value


class FitResult(BaseModel):
    """Fermi-Dirac or Bose-Einstein fit of a density of states"""

    model_config = ConfigDict(frozen=True)

    model: Literal["FD", "BE"]
    j_mu: float
    T_eff: float = Field(ge=0)
    residual: float = Field(ge=0)
    converged: bool
    evaluations: int = 0
    points: int = 0

    @property
    def temperature_label(self) -> str:
        if self.T_eff < settings.T_ZERO_LABEL:
            return "≈0"
        return format(self.T_eff, ".6g")


class CountingDistribution(BaseModel):
    """P(n) pairs inside the t lowest modes"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    probs: np.ndarray
    t: int = Field(ge=1)
    N: int = Field(ge=0)
    mean: float
    variance: float = Field(ge=0)

    @field_validator("probs")
    @classmethod
    def _nonnegative(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if np.any(value < 0):
            raise ValueError("probabilities must be non-negative")
        return value


class PartitionSum(BaseModel):
    """Partition-formula χ_N split into the (M(1))^N leading term and the remainder"""

    model_config = ConfigDict(frozen=True)

    N: int
    value: float
    leading: float
    remainder: float
    terms: int
    digits_lost: float = 0.0


class BoseConventionReport(BaseModel):
    """Bosonic χ_N of a 2D spectrum under the multiset definition vs the axis product"""

    model_config = ConfigDict(frozen=True)

    zs: List[float]
    N: int
    multiset: float
    fock_norm: float
    axis_product: float
    product_deviation: float
    fock_matches_multiset: bool
    product_matches_multiset: bool
