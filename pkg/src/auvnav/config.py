"""Mission configuration files: JSON in, validated dataclasses out."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

from .errors import ConfigError
from .goals import HttpBackend, ScriptedBackend
from .orchestrator import (CheckThresholds, FaultSpec, MissionSettings,
                           PipelineKind)
from .sim import CanyonParams, SimConfig, WorldMap, generate_canyon, load_map
from .motion import MotionConfig

CONFIG_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MissionConfig:
    """One mission, fully specified: map source, pipeline, parameters,
    backend, and where the log goes.

    Exactly one of map_seed / map_file is set.
    """

    pipeline: PipelineKind = PipelineKind.LLM_TASK_MOTION
    command: str = "navigate through the canyon"
    map_seed: int | None = None
    map_file: str | None = None
    map_params: CanyonParams = field(default_factory=CanyonParams)
    settings: MissionSettings = field(default_factory=MissionSettings)
    backend_table: str | None = None  # scripted reply table path; None = built-in
    backend_url: str | None = None    # set => HTTP backend instead
    log_path: str | None = None

    def __post_init__(self):
        if (self.map_seed is None) == (self.map_file is None):
            raise ConfigError("exactly one of map.seed / map.file required")

    def build_world(self) -> WorldMap:
        if self.map_file is not None:
            return load_map(self.map_file)
        return generate_canyon(self.map_seed, self.map_params)

    def build_backend(self):
        if self.backend_url is not None:
            return HttpBackend(self.backend_url)
        if self.backend_table is not None:
            return ScriptedBackend.from_file(self.backend_table)
        return ScriptedBackend.default()


def _fill(cls, data: dict, where: str):
    """Construct a dataclass from a dict, rejecting unknown keys."""
    names = {f.name for f in dataclasses.fields(cls)}
    extra = set(data) - names
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {where}: {exc}") from exc


def config_from_dict(data: dict) -> MissionConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    version = data.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema_version {version}")

    map_src = data.get("map", {})
    if not isinstance(map_src, dict):
        raise ConfigError("map must be an object")
    seed = map_src.get("seed")
    map_file = map_src.get("file")
    params = _fill(CanyonParams, map_src.get("params", {}), "map.params")

    settings_src = data.get("settings", {})
    sim = _fill(SimConfig, settings_src.pop("sim", {}), "settings.sim")
    motion = _fill(MotionConfig, settings_src.pop("motion", {}), "settings.motion")
    thresholds = _fill(CheckThresholds, settings_src.pop("thresholds", {}),
                       "settings.thresholds")
    fault_src = settings_src.pop("fault", None)
    fault = None if fault_src is None else _fill(FaultSpec, fault_src, "settings.fault")
    settings = _fill(MissionSettings,
                     dict(settings_src, sim=sim, motion=motion,
                          thresholds=thresholds, fault=fault), "settings")

    backend_src = data.get("backend", {})
    backend_table = backend_src.get("table")
    backend_url = backend_src.get("url")
    if backend_table is not None and backend_url is not None:
        raise ConfigError("backend.table and backend.url are mutually exclusive")

    try:
        pipeline = PipelineKind(data.get("pipeline", "llm_task_motion"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    cfg = MissionConfig(pipeline=pipeline,
                        command=data.get("command", "navigate through the canyon"),
                        map_seed=seed, map_file=map_file, map_params=params,
                        settings=settings, backend_table=backend_table,
                        backend_url=backend_url, log_path=data.get("log_path"))
    for path in (cfg.map_file, cfg.backend_table):
        if path is not None and not os.path.exists(path):
            raise ConfigError(f"referenced file does not exist: {path}")
    return cfg


def load_config(path) -> MissionConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)
