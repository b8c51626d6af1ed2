"""
Configuration Module
"""
import os
from typing import Any, Dict, List


class Settings:
    """Application settings"""

    # Server settings
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", "8000"))
    RELOAD: bool = os.getenv("RELOAD", "false").lower() == "true"
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "info")

    # CORS settings
    ALLOWED_ORIGINS: List[str] = os.getenv(
        "ALLOWED_ORIGINS",
        "http://localhost:3000,http://localhost:3001"
    ).split(",")

    # API settings
    API_PREFIX: str = "/api"
    API_VERSION: str = "1.0.0"
    API_TITLE: str = "Coboson Wigner Molecule API"
    API_DESCRIPTION: str = "Schmidt spectra, normalization factors and density profiles of confined fermion pairs"

    # Spectrum truncation
    TAIL_TOL: float = float(os.getenv("COBOSON_TAIL_TOL", "1e-12"))
    MODE_CAP: int = int(os.getenv("COBOSON_MODE_CAP", "1000000"))
    PAIR_MAX: int = int(os.getenv("COBOSON_PAIR_MAX", "1000"))
    STRONG_X0: float = float(os.getenv("COBOSON_STRONG_X0", "2.0"))

    # Extended precision (Newton / partition verification paths)
    NEWTON_DPS: int = int(os.getenv("COBOSON_NEWTON_DPS", "50"))
    DPS_BUDGET: int = int(os.getenv("COBOSON_DPS_BUDGET", "3000"))
    PARTITION_MAX_N: int = int(os.getenv("COBOSON_PARTITION_MAX_N", "30"))

    # Observables
    SUM_RULE_TOL: float = float(os.getenv("COBOSON_SUM_RULE_TOL", "1e-8"))
    FIT_MAX_EVALS: int = int(os.getenv("COBOSON_FIT_MAX_EVALS", "10000"))
    FIT_SPREAD_TOL: float = float(os.getenv("COBOSON_FIT_SPREAD_TOL", "1e-9"))
    T_FLOOR: float = float(os.getenv("COBOSON_T_FLOOR", "1e-6"))
    T_ZERO_LABEL: float = float(os.getenv("COBOSON_T_ZERO_LABEL", "1e-3"))
    ENERGY_OFFSET: float = float(os.getenv("COBOSON_ENERGY_OFFSET", "0.5"))

    # Density profiles
    GRID_POINTS: int = int(os.getenv("COBOSON_GRID_POINTS", "2048"))
    PROMINENCE: float = float(os.getenv("COBOSON_PROMINENCE", "1e-3"))
    HERMITE_MAX_J: int = 10_000

    # Oracle
    SCHMIDT_GRID_POINTS: int = int(os.getenv("COBOSON_SCHMIDT_GRID_POINTS", "160"))
    SCHMIDT_TOL: float = float(os.getenv("COBOSON_SCHMIDT_TOL", "1e-6"))
    ORACLE_MAX_MODES: int = 16
    ORACLE_MAX_PAIRS: int = 6
    FOCK_MAX_MODES: int = 10
    FOCK_MAX_PAIRS: int = 3

    # Sweeps
    WORKERS: int = int(os.getenv("COBOSON_WORKERS", "1"))

    def numerics(self) -> Dict[str, Any]:
        """Resolved numerical settings, as recorded in run manifests"""
        keys = [
            "TAIL_TOL", "MODE_CAP", "PAIR_MAX", "STRONG_X0", "NEWTON_DPS", "DPS_BUDGET",
            "PARTITION_MAX_N", "SUM_RULE_TOL", "FIT_MAX_EVALS", "FIT_SPREAD_TOL",
            "T_FLOOR", "T_ZERO_LABEL", "ENERGY_OFFSET", "GRID_POINTS", "PROMINENCE",
            "SCHMIDT_GRID_POINTS", "SCHMIDT_TOL",
        ]
        return {key.lower(): getattr(self, key) for key in keys}


settings = Settings()
