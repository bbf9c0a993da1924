# Configuration module
from .run_config import (
    ConfigError,
    OutputConfig,
    RunConfig,
    apply_overrides,
    config_digest,
    dump_resolved_config,
    load_run_config,
    parse_override,
)
from .settings import Settings, get_settings, settings

__all__ = [
    "ConfigError",
    "OutputConfig",
    "RunConfig",
    "Settings",
    "apply_overrides",
    "config_digest",
    "dump_resolved_config",
    "get_settings",
    "load_run_config",
    "parse_override",
    "settings",
]
