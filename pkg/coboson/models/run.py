"""
Run Models - Resolved command-line configuration
"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.physics import InteractionSpec, SoftCoulombPotential, TrapSpec


class RunConfig(BaseModel):
    """
    One CLI invocation with every parameter resolved.

    Parameters come either from physics (γ or softening, g list, ε list) or
    directly as generating parameters (z_x list, z_y list), never both.
    """

    model_config = ConfigDict(frozen=True)

    subcommand: str
    gamma: Optional[float] = Field(default=None, gt=0)
    softening: Optional[float] = Field(default=None, gt=0)
    g: List[float] = Field(default_factory=list)
    epsilon: List[float] = Field(default_factory=list)
    zx: List[float] = Field(default_factory=list)
    zy: List[float] = Field(default_factory=list)
    N: List[int] = Field(default_factory=list)
    t: Optional[int] = Field(default=None, ge=1)
    alphas: List[float] = Field(default_factory=lambda: [2.0])
    tail_tol: Optional[float] = Field(default=None, gt=0)
    grid_points: Optional[int] = Field(default=None, ge=16)
    half_width: Optional[float] = Field(default=None, gt=0)
    degeneracy: Literal["1d", "2d"] = "1d"
    prominence: Optional[float] = Field(default=None, gt=0, lt=0.5)
    kind: Literal["fermionic", "bosonic"] = "fermionic"
    method: Literal["dp", "newton", "partition"] = "dp"
    fits: List[Literal["fd", "be"]] = Field(default_factory=lambda: ["fd"])
    modes: List[int] = Field(default_factory=list)
    mu: List[float] = Field(default_factory=list)
    validate_basis: bool = True
    preset: Optional[int] = Field(default=None, ge=1, le=5)
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "RunConfig":
        physical = self.gamma is not None or self.softening is not None or bool(self.g) or bool(self.epsilon)
        direct = bool(self.zx) or bool(self.zy)
        if physical and direct:
            raise ValueError("give either physical parameters (gamma/g/epsilon) or direct z values, not both")
        if self.gamma is not None and self.softening is not None:
            raise ValueError("give either gamma or softening")
        if any(n < 0 for n in self.N):
            raise ValueError("pair counts must be >= 0")
        return self

    @property
    def physical(self) -> bool:
        return self.gamma is not None or self.softening is not None or bool(self.g)

    def interaction(self, strength: float) -> InteractionSpec:
        if self.softening is not None:
            return InteractionSpec(strength=strength, potential=SoftCoulombPotential(softening=self.softening))
        return InteractionSpec(strength=strength, gamma=self.gamma)

    def trap(self) -> TrapSpec:
        return TrapSpec(dimension=1 + len(self.epsilon), anisotropies=list(self.epsilon))

    def parameters(self) -> Dict[str, Any]:
        """Everything except output plumbing, for manifests"""
        return self.model_dump(exclude={"output", "format", "workers"})
