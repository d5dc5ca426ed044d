"""
Runtime configuration and named certification profiles.

Settings come from the environment, with `.env.local` loaded first through
python-dotenv. Profiles are YAML cards in `profiles.yaml` next to this module.
"""
from __future__ import annotations

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

log = logging.getLogger(__name__)

PROFILES_PATH = Path(__file__).parent / "profiles.yaml"

ENV_MAPPING = {
    "THETA_GAUSS_THREADS": "threads",
    "THETA_GAUSS_LOG_LEVEL": "log_level",
    "THETA_GAUSS_LEDGER": "ledger_path",
    "THETA_GAUSS_SERIES_FLOOR": "series_floor",
    "THETA_GAUSS_ORACLE_DIGITS": "oracle_digits",
}


class ThetaSettings(BaseModel):
    """Validated runtime settings"""
    threads: int = Field(1, ge=1, le=256, description="Sweep parallelism")
    log_level: str = Field("WARNING", description="Root log level for the CLI")
    ledger_path: Optional[str] = Field(None, description="JSONL ledger of certification runs")
    series_floor: float = Field(0.05, gt=0, description="Smallest t advertised for the direct series")
    oracle_digits: int = Field(30, ge=20, le=100, description="Oracle digits for certification cross-checks")

    @field_validator("log_level")
    def _known_level(cls, v):
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v}")
        return v


def load_settings(env_file: Optional[str] = ".env.local") -> ThetaSettings:
    """Build settings from `env_file` (if present) and the process environment"""
    if env_file and Path(env_file).exists():
        load_dotenv(env_file, override=False)
    values = {field: os.environ[var] for var, field in ENV_MAPPING.items() if os.environ.get(var)}
    try:
        return ThetaSettings(**values)
    except ValidationError as e:
        raise ValueError(f"Invalid theta-gauss configuration: {e}") from e


@lru_cache(maxsize=1)
def get_settings() -> ThetaSettings:
    return load_settings()


class CertificationProfile(BaseModel):
    """A named certification run: Gaussian-approximation and expansion sweeps"""
    description: str = ""
    kinds: List[int] = Field(default_factory=lambda: [1, 2, 3, 4])
    C: float = Field(gt=0)
    eps: float = Field(gt=0)
    t: List[float]
    x_count: int = Field(101, ge=2)
    a: float = Field(1.0, gt=0)


def load_profiles(path: Path = PROFILES_PATH) -> Dict[str, CertificationProfile]:
    """Load certification profiles; a missing or malformed file yields none"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        return {name: CertificationProfile(**card) for name, card in (raw.get("profiles") or {}).items()}
    except (OSError, yaml.YAMLError, ValidationError, AttributeError, TypeError) as e:
        log.warning("could not load certification profiles from %s: %s", path, e)
        return {}
