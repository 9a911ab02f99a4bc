"""Run configuration file model.

A run configuration is a JSON document whose sections mirror the pipeline
models (camera, scene, flight, noise, tracker, yield, evaluation). Every
section is optional and falls back to its defaults; unknown keys are
rejected so typos surface as configuration errors.

Example:
    >>> config = RunConfig.model_validate_json('{"seed": 7, "scene": {"fruit_count": 10}}')
    >>> config.scene.fruit_count
    10
"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from fruit_census.exceptions import ConfigError
from fruit_census.models.estimation import YieldConfig
from fruit_census.models.evaluation import EvaluationConfig
from fruit_census.models.geometry import CameraIntrinsics
from fruit_census.models.simulation import SEED_MAX, NoiseSpec, SceneSpec, TrajectorySpec
from fruit_census.models.track import TrackerConfig


class RunConfig(BaseModel):
    """All parameters of a simulate-track-estimate-evaluate run.

    Attributes:
        seed: 64-bit simulator seed.
        camera: Camera intrinsics.
        scene: Fruit placement.
        trajectory: Camera flight.
        noise: Detector and sensor noise.
        tracker: Association parameters.
        yield_: Yield filters and weight model (``yield`` in the file).
        evaluation: Evaluation parameters.
    """

    model_config = {"frozen": True, "extra": "forbid", "populate_by_name": True}

    seed: int = Field(default=0, ge=0, le=SEED_MAX)
    camera: CameraIntrinsics = Field(default_factory=CameraIntrinsics)
    scene: SceneSpec = Field(default_factory=SceneSpec)
    trajectory: TrajectorySpec = Field(default_factory=TrajectorySpec)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    tracker: TrackerConfig = Field(default_factory=TrackerConfig)
    yield_: YieldConfig = Field(default_factory=YieldConfig, alias="yield")
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)


def load_run_config(path: Path | str) -> RunConfig:
    """Read and validate a run configuration file.

    Args:
        path: JSON configuration file.

    Returns:
        Validated RunConfig.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation.
    """
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {config_path}", e) from e
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"invalid config file {config_path}: {e}") from e
