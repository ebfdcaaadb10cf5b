import os
from fractions import Fraction
from pathlib import Path

from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError, validator

from hurwitz.version import get_version_commit, package_version

ROOT_DIR = Path().parent.resolve()

_CONFIG_FILE = os.getenv("HCF_CONFIG_FILE", ".env")

VERSION_COMMIT = "dev"

try:
    from hurwitz._version import VERSION_COMMIT  # type: ignore
except ImportError:
    VERSION_COMMIT = get_version_commit()

VERSION = f"{package_version()}+{VERSION_COMMIT}"

PROJECT_NAME = "hurwitz-lab"
PROJECT_SUMMARY = """
Exact Hurwitz continued fractions over the Gaussian integers, with certified cylinder
geometry, full-sequence enumeration and the two exact-order Cantor constructions.
"""


class Config(BaseModel):
    precision_start_bits: int = 64
    precision_cap_bits: int = 4096
    # unquantified counting constant; strict schedules require it
    c1: Fraction | None = None
    rho_k: Fraction = Fraction(6)
    default_budget: int = 200_000
    default_seed: int = 0
    gauss_count_radius_cap: int = 1_000_000
    family_cap: int | None = None
    max_bits: int = 4096
    workers: int = 1
    log_level: str = "INFO"

    class Config:
        arbitrary_types_allowed = True

    @validator("c1", "rho_k", pre=True)
    def parse_fraction(cls, value):
        if value is None or value == "":
            return None
        return Fraction(str(value))

    @validator("precision_start_bits", "precision_cap_bits", "default_budget", "workers")
    def positive(cls, value):
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @validator("rho_k")
    def rho_k_above_six(cls, value):
        if value is not None and value < 6:
            raise ValueError("rho_k must be at least 6")
        return value


def load_config() -> Config:
    config_path = ROOT_DIR / "data" / _CONFIG_FILE
    if not config_path.exists():
        return Config()
    try:
        return Config.parse_obj(dotenv_values(config_path))
    except ValidationError as exc:
        raise ValueError(f"Invalid configuration in {_CONFIG_FILE}: {exc}")


CONFIG = load_config()

PRECISION_START_BITS = CONFIG.precision_start_bits
PRECISION_CAP_BITS = CONFIG.precision_cap_bits
C1 = CONFIG.c1
RHO_K = CONFIG.rho_k
DEFAULT_BUDGET = CONFIG.default_budget
DEFAULT_SEED = CONFIG.default_seed
GAUSS_COUNT_RADIUS_CAP = CONFIG.gauss_count_radius_cap
FAMILY_CAP = CONFIG.family_cap
MAX_BITS = CONFIG.max_bits
WORKERS = CONFIG.workers
LOG_LEVEL = CONFIG.log_level

MANIFEST_NAME = "manifest.json"
FAMILIES_NAME = "families.txt"
DIMENSION_CSV_NAME = "dimension.csv"
DIMENSION_JSON_NAME = "dimension.json"
