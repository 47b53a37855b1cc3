"""Service and CLI configuration: TOML file < environment < flags."""

import os
from dataclasses import dataclass, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    port: int = 7878
    host: str = "127.0.0.1"
    theta: float = 0.9
    beta: float = 10.0
    max_iters: int = 100
    mode: str = "direct"
    max_frames: int = 2000
    optimize_iter_cap: int = 1000
    data_dir: str | None = None
    bvh_axis_map: str = "x,-z,y"
    bvh_scale: float = 1.0

    def __post_init__(self):
        if not (1 <= self.port <= 65535):
            raise ConfigError(f"port must be in [1, 65535], got {self.port}")
        if not (0.0 <= self.theta <= 1.0):
            raise ConfigError(f"theta must be in [0, 1], got {self.theta}")


def load_config(path: str | None = None, **overrides) -> Config:
    """Build a Config from an optional TOML file, SOSKIT_PORT, and overrides."""
    values = {}
    if path is not None:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        unknown = set(doc) - set(Config.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(doc)
    env_port = os.environ.get("SOSKIT_PORT")
    if env_port is not None:
        try:
            values["port"] = int(env_port)
        except ValueError:
            raise ConfigError(f"SOSKIT_PORT must be an integer, got {env_port!r}") from None
    cfg = Config(**values)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **overrides) if overrides else cfg
