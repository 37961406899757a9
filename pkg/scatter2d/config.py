"""
Run configuration.

A run is described by one JSON file:

    {
      "potential": {"kind": "gaussian", "U0": -0.5, "a": 1.0},
      "k": 3.0,
      "theta_grid": {"start": 0.05, "stop": 3.14, "num": 200},
      "tolerances": {"slope_floor": 1e-6}
    }

Every model forbids unknown keys, so a misspelt tolerance is an error rather
than a silently ignored default.
"""

import json
import math
import os
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from dotenv import load_dotenv
from numpy.typing import NDArray
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    ValidationError,
    model_validator,
)

from scatter2d.errors import ConfigError
from scatter2d.potential import (
    AppendixBParams,
    RadialPotential,
    load_tabulated_csv,
    make_appendix_b,
    make_gaussian,
)

load_dotenv()


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GaussianSpec(StrictModel):
    kind: Literal["gaussian"]
    U0: float
    a: PositiveFloat


class AppendixBSpec(StrictModel):
    kind: Literal["appendix_b"]
    A: float
    R_c: PositiveFloat


class TabulatedSpec(StrictModel):
    """Two-column CSV (r, U); relative paths resolve against the config file."""

    kind: Literal["tabulated"]
    path: Path


PotentialSpec = Annotated[
    Union[GaussianSpec, AppendixBSpec, TabulatedSpec], Field(discriminator="kind")
]


class Grid(StrictModel):
    """Uniform grid of ``num`` points from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    num: int = Field(ge=2)

    @model_validator(mode="after")
    def _increasing(self) -> "Grid":
        if not self.stop > self.start:
            raise ValueError(f"grid must be increasing, got start={self.start} stop={self.stop}")
        return self

    def values(self) -> NDArray[np.float64]:
        return np.linspace(self.start, self.stop, self.num)


class Tolerances(StrictModel):
    range_epsilon: PositiveFloat = 1e-10
    slope_floor: PositiveFloat = 1e-6
    airy_window: PositiveFloat = 0.5


class RunConfig(StrictModel):
    """Everything a CLI command needs.

    Attributes:
        potential: Tagged potential description.
        k: Wavenumber, E = k**2.
        m_max, r_match, grid_step: Overrides of the quantum defaults.
        b_grid: Impact parameters for deflection sweeps.
        theta_grid: Angles in (0, pi] for cross sections.
        b_max: Impact-parameter cutoff for the classical total cross section.
        kappa_max: Winding numbers searched for stationary points.
        tolerances: Numerical thresholds.
    """

    potential: PotentialSpec
    k: PositiveFloat
    m_max: Optional[NonNegativeInt] = None
    r_match: Optional[PositiveFloat] = None
    grid_step: Optional[PositiveFloat] = None
    b_grid: Optional[Grid] = None
    theta_grid: Optional[Grid] = None
    b_max: Optional[PositiveFloat] = None
    kappa_max: Optional[NonNegativeInt] = None
    tolerances: Tolerances = Tolerances()

    @model_validator(mode="after")
    def _grid_domains(self) -> "RunConfig":
        if self.b_grid is not None and self.b_grid.start < 0.0:
            raise ValueError("b_grid must start at b >= 0")
        if self.theta_grid is not None and (
            self.theta_grid.start <= 0.0 or self.theta_grid.stop > math.pi + 1e-12
        ):
            raise ValueError("theta_grid must lie in (0, pi]")
        return self


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a JSON run configuration.

    Relative tabulated-potential paths are resolved against the config's
    directory.

    Raises:
        ConfigError: Unreadable file, malformed JSON or a schema violation.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
        config = RunConfig.model_validate(raw)
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}") from e
    except ValidationError as e:
        raise ConfigError(f"Invalid config {path}:\n{e}") from e
    spec = config.potential
    if isinstance(spec, TabulatedSpec) and not spec.path.is_absolute():
        resolved = spec.model_copy(update={"path": path.parent / spec.path})
        config = config.model_copy(update={"potential": resolved})
    return config


def build_potential(config: RunConfig) -> RadialPotential:
    """Instantiate the configured potential.

    Raises:
        ConfigError: The potential cannot be built from the given parameters.
    """
    spec = config.potential
    eps = config.tolerances.range_epsilon
    try:
        if isinstance(spec, GaussianSpec):
            return make_gaussian(spec.U0, spec.a, range_epsilon=eps)
        if isinstance(spec, AppendixBSpec):
            return make_appendix_b(AppendixBParams(A=spec.A, R_c=spec.R_c), range_epsilon=eps)
        return load_tabulated_csv(spec.path, range_epsilon=eps)
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot build potential {spec.kind}: {e}") from e


class Settings(BaseModel):
    """Process settings taken from the environment (and a ``.env`` file)."""

    threads: Optional[int] = Field(default=None, ge=1)
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        raw_threads = os.getenv("SCATTER2D_THREADS")
        try:
            return cls(
                threads=int(raw_threads) if raw_threads else None,
                log_level=os.getenv("SCATTER2D_LOG_LEVEL", "WARNING").upper(),
            )
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"Bad SCATTER2D_* environment setting: {e}") from e
