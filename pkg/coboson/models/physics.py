"""
Physics Models - Interaction, trap, harmonic approximation and Schmidt spectrum types
"""
import math
from typing import Any, Dict, List, Optional, Protocol, runtime_checkable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


@runtime_checkable
class RadialPotential(Protocol):
    """Interaction descriptor evaluated at separations r > 0"""

    def value(self, r: float) -> float: ...

    def first(self, r: float) -> float: ...

    def second(self, r: float) -> float: ...


class InversePowerPotential(BaseModel):
    """𝒱(r) = r^-γ"""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(gt=0)

    def value(self, r: float) -> float:
        return r ** -self.gamma

    def first(self, r: float) -> float:
        return -self.gamma * r ** (-self.gamma - 1.0)

    def second(self, r: float) -> float:
        return self.gamma * (self.gamma + 1.0) * r ** (-self.gamma - 2.0)


class SoftCoulombPotential(BaseModel):
    """𝒱(r) = 1/√(r² + a²), the softened Coulomb interaction of quantum-wire models"""

    model_config = ConfigDict(frozen=True)

    softening: float = Field(gt=0)

    def value(self, r: float) -> float:
        return 1.0 / math.sqrt(r * r + self.softening ** 2)

    def first(self, r: float) -> float:
        return -r / (r * r + self.softening ** 2) ** 1.5

    def second(self, r: float) -> float:
        a2 = self.softening ** 2
        return (2.0 * r * r - a2) / (r * r + a2) ** 2.5


class InteractionSpec(BaseModel):
    """Repulsive pair interaction g·𝒱(r) in oscillator units"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    strength: float = Field(gt=0, description="g, interaction over confinement energy")
    gamma: Optional[float] = Field(default=None, gt=0)
    potential: Optional[Any] = None

    @model_validator(mode="after")
    def _one_kind(self) -> "InteractionSpec":
        if (self.gamma is None) == (self.potential is None):
            raise ValueError("give exactly one of gamma or potential")
        if self.potential is not None and not isinstance(self.potential, RadialPotential):
            raise ValueError("potential must expose value/first/second")
        return self

    @property
    def descriptor(self) -> RadialPotential:
        if self.potential is not None:
            return self.potential
        return InversePowerPotential(gamma=self.gamma)


class TrapSpec(BaseModel):
    """d-dimensional trap; the x axis carries the pair, the others are transverse"""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(default=1, ge=1)
    anisotropies: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _axes_match(self) -> "TrapSpec":
        if len(self.anisotropies) != self.dimension - 1:
            raise ValueError(
                f"dimension {self.dimension} needs {self.dimension - 1} anisotropies, "
                f"got {len(self.anisotropies)}"
            )
        if any(eps < 1.0 for eps in self.anisotropies):
            raise ValueError("anisotropies must be >= 1")
        return self


class HarmonicApprox(BaseModel):
    """Quadratic expansion of the interaction around the equilibrium separation"""

    model_config = ConfigDict(frozen=True)

    x0: float = Field(gt=0)
    mu: float = Field(ge=1.0)
    valid: bool


class OccupationSpectrum(BaseModel):
    """
    Truncated Schmidt spectrum, sorted descending.

    Occupations are stored as logarithms so that deep modes of long spectra
    never underflow; `lambdas` exponentiates on demand.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    log_lambdas: np.ndarray
    labels: np.ndarray
    zs: List[float]
    tail: float = Field(ge=0)

    @field_validator("log_lambdas")
    @classmethod
    def _finite_descending(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if value.ndim != 1 or value.size == 0:
            raise ValueError("spectrum needs at least one mode")
        if not np.all(np.isfinite(value)):
            raise ValueError("occupations must be strictly positive")
        if np.any(np.diff(value) > 0):
            raise ValueError("occupations must be sorted descending")
        return value

    @model_validator(mode="after")
    def _mass(self) -> "OccupationSpectrum":
        if self.labels.shape != (self.log_lambdas.size, len(self.zs)):
            raise ValueError("labels must hold one multi-index per mode")
        total = math.fsum(np.exp(self.log_lambdas)) + self.tail
        if not (1.0 - 1e-12 <= total <= 1.0 + 1e-12):
            raise ValueError(f"retained mass plus tail is {total!r}, expected 1")
        return self

    @property
    def J(self) -> int:
        return int(self.log_lambdas.size)

    @property
    def lambdas(self) -> np.ndarray:
        return np.exp(self.log_lambdas)

    def label(self, index: int) -> tuple:
        return tuple(int(v) for v in self.labels[index])

    def index_of(self, label) -> int:
        """Position of a mode label; ints are accepted for one-axis spectra"""
        key = (label,) if isinstance(label, (int, np.integer)) else tuple(label)
        if len(key) != len(self.zs):
            raise KeyError(label)
        hits = np.flatnonzero(np.all(self.labels == np.asarray(key), axis=1))
        if hits.size == 0:
            raise KeyError(label)
        return int(hits[0])

    def power_sum(self, m: int) -> float:
        """Direct Σλ^m over the retained modes, smallest terms first"""
        return math.fsum(np.exp(m * self.log_lambdas[::-1]))

    def head(self, count: int) -> "OccupationSpectrum":
        """Keep the `count` leading modes, folding the rest into the tail"""
        count = max(1, min(count, self.J))
        dropped = math.fsum(np.exp(self.log_lambdas[count:]))
        return OccupationSpectrum(
            log_lambdas=self.log_lambdas[:count].copy(),
            labels=self.labels[:count].copy(),
            zs=list(self.zs),
            tail=self.tail + dropped,
        )


class AxisEntropy(BaseModel):
    """Closed-form entropies of one geometric axis"""

    model_config = ConfigDict(frozen=True)

    z: float
    purity: float
    von_neumann: float
    renyi: Dict[float, float]
    min_entropy: float
    max_entropy: float


class EntropyReport(BaseModel):
    """Entanglement entropies in bits; additive ones are sums over `per_axis`"""

    model_config = ConfigDict(frozen=True)

    linear: float = Field(ge=0, le=1)
    von_neumann: float = Field(ge=0)
    renyi: Dict[float, float]
    min_entropy: float = Field(ge=0)
    max_entropy: float = Field(ge=0)
    schmidt_number: float = Field(ge=1)
    hartley: Optional[float] = None
    per_axis: List[AxisEntropy]
    divergent: bool = False
