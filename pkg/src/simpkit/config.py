"""Shared configuration for the command-line pipelines.

A config file is a JSON object; unknown keys are rejected so typos fail
loudly.  The defaults reproduce the library's documented behavior.
"""

import json
from dataclasses import dataclass, field, fields

from . import codec

__all__ = ["Config", "ConfigError", "load_config"]


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    metric_lowercase: bool = True
    slot_names: dict = field(default_factory=dict)
    stopwords_path: str | None = None
    split_ratios: tuple = (0.75, 0.10, 0.15)
    split_seed: int | None = None
    aggregate_max_iters: int = 100
    aggregate_tol: float = 1e-7
    aggregate_threshold: float = 0.9

    def __post_init__(self):
        for slot in self.slot_names:
            if slot not in codec.SLOT_IDS:
                raise ConfigError(f"unknown slot id in slot_names: {slot!r}")
        self.split_ratios = tuple(self.split_ratios)
        if len(self.split_ratios) != 3:
            raise ConfigError("split_ratios must have three entries")


def load_config(path) -> Config:
    """Read a JSON config file, rejecting unknown keys."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return Config(**data)
