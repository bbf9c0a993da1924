"""
Run Configuration

One YAML file describes a complete experiment: the problem instance, the
optimizer, the oracle thresholds, the kappa sweep, the second-order check
and the output options. Dotted ``--set`` overrides are applied to the raw
mapping before validation, so every admissibility rule still runs.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, Union

import yaml  # type: ignore[import-untyped]
from pydantic import BaseModel, Field, ValidationError

from ..schemas import OptimizerConfig, OracleConfig, ProblemSpec, SecondOrderConfig, SweepConfig

logger = logging.getLogger("vch_control.config")


class ConfigError(ValueError):
    """Configuration could not be read, parsed or validated."""


class OutputConfig(BaseModel):
    out_dir: Optional[str] = Field(default=None, description="Artifact directory; None uses settings.output_dir")
    snapshot_stride: int = Field(default=1, ge=1, description="Write every k-th time level of trajectories")
    profiles: bool = Field(default=False, description="Emit gnuplot two-column profile files")


class RunConfig(BaseModel):
    """Everything needed to reproduce one run."""

    problem: ProblemSpec = Field(default_factory=ProblemSpec)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    second_order: SecondOrderConfig = Field(default_factory=SecondOrderConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    seed: int = Field(default=0, ge=0)

    def digest(self) -> str:
        return config_digest(self)


def parse_override(item: str) -> tuple[list[str], Any]:
    """Split ``a.b.c=value``; the value follows YAML scalar rules."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not of the form key=value")
    key, raw = item.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if not path:
        raise ConfigError(f"override {item!r} has an empty key")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"override {item!r}: {exc}") from exc
    return path, value


def apply_overrides(raw: dict, overrides: Iterable[str]) -> dict:
    for item in overrides:
        path, value = parse_override(item)
        node = raw
        for part in path[:-1]:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            elif not isinstance(child, dict):
                raise ConfigError(f"override {item!r}: {part!r} is not a mapping")
            node = child
        node[path[-1]] = value
        logger.debug("override %s = %r", ".".join(path), value)
    return raw


def load_run_config(path: Union[str, Path, None] = None, overrides: Iterable[str] = ()) -> RunConfig:
    """
    Read, override and validate a run configuration.

    Args:
        path: YAML file; None starts from the built-in defaults
        overrides: dotted ``key=value`` strings

    Raises:
        ConfigError: unreadable file, invalid YAML or failed validation
    """
    raw: dict = {}
    if path is not None:
        config_path = Path(path)
        try:
            with open(config_path) as f:
                loaded = yaml.safe_load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read {config_path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML in {config_path}: {exc}") from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"{config_path} must contain a mapping at the top level")
        raw = loaded or {}

    raw = apply_overrides(raw, overrides)
    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    logger.info("loaded run configuration %s (digest %s)", path or "<defaults>", config.digest())
    return config


def config_digest(config: BaseModel) -> str:
    """First 16 hex digits of the SHA-256 of the canonical JSON dump."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def dump_resolved_config(config: RunConfig, out_dir: Union[str, Path]) -> Path:
    """Write resolved_config.yaml (with its digest) into out_dir."""
    target = Path(out_dir) / "resolved_config.yaml"
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w") as f:
        f.write(f"# digest: {config.digest()}\n")
        yaml.safe_dump(config.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)
    return target
