"""Configuration management for entropic inequality computations."""

from pathlib import Path
from dataclasses import dataclass, field
import os
from dotenv import load_dotenv

# Load .env file
load_dotenv()


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class GeometryConfig:
    """Polyhedral projection settings."""
    # HiGHS screening proposes redundancies; exact arithmetic decides them
    float_screening: bool = True
    screening_margin: float = 1e-7
    max_inequalities: int = 20000
    workers: int = 1

    @classmethod
    def from_env(cls) -> "GeometryConfig":
        return cls(
            float_screening=_env_bool("ENTROPIC_FLOAT_SCREENING", True),
            screening_margin=float(os.getenv("ENTROPIC_SCREENING_MARGIN", "1e-7")),
            max_inequalities=int(os.getenv("ENTROPIC_MAX_INEQUALITIES", "20000")),
            workers=int(os.getenv("ENTROPIC_WORKERS", "1")),
        )


@dataclass
class ToleranceConfig:
    """Numerical tolerances for real-valued boxes and checks."""
    normalization: float = 1e-12
    quantum: float = 1e-10
    entropy_zero: float = 1e-15
    violation: float = 1e-9
    certificate: float = 1e-9


@dataclass
class OptimizerConfig:
    """Nelder-Mead restart settings."""
    restarts: int = 50
    # per inequality class in the two-source quantum search
    bilocal_restarts: int = 100
    xatol: float = 1e-10
    fatol: float = 1e-10
    max_evaluations: int = 10000
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_env(cls) -> "OptimizerConfig":
        return cls(
            restarts=int(os.getenv("ENTROPIC_RESTARTS", "50")),
            bilocal_restarts=int(os.getenv("ENTROPIC_BILOCAL_RESTARTS", "100")),
            max_evaluations=int(os.getenv("ENTROPIC_MAX_EVALUATIONS", "10000")),
            seed=int(os.getenv("ENTROPIC_SEED", "0")),
            workers=int(os.getenv("ENTROPIC_WORKERS", "1")),
        )


@dataclass
class ScanConfig:
    """Parameter grid scans."""
    grid_step: float = 0.01
    workers: int = 1


@dataclass
class PathConfig:
    """Path configuration."""
    base: Path = field(default_factory=lambda: Path(os.getenv("ENTROPIC_BASE_PATH", ".")))

    @property
    def data(self) -> Path:
        return self.base / "data"

    @property
    def scenarios(self) -> Path:
        return self.data / "scenarios"

    @property
    def results(self) -> Path:
        return self.base / "results"

    @property
    def logs(self) -> Path:
        return self.base / "logs"

    @property
    def runs(self) -> Path:
        return self.logs / "runs"


@dataclass
class Config:
    """Main configuration class."""
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    paths: PathConfig = field(default_factory=PathConfig)
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        return cls(
            geometry=GeometryConfig.from_env(),
            tolerances=ToleranceConfig(
                violation=float(os.getenv("ENTROPIC_VIOLATION_TOLERANCE", "1e-9")),
            ),
            optimizer=OptimizerConfig.from_env(),
            scan=ScanConfig(
                grid_step=float(os.getenv("ENTROPIC_GRID_STEP", "0.01")),
                workers=int(os.getenv("ENTROPIC_WORKERS", "1")),
            ),
            log_level=os.getenv("LOG_LEVEL", "INFO"),
        )


# Global config instance
config = Config.from_env()
