"""Pipeline configuration: one flat dataclass, loadable from nested JSON.

The config fingerprint is stored in every session so results can be traced
back to the exact parameter set that produced them.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import InputError, MissingFile

# JSON section -> (key, attribute) mapping; flat attributes keep call sites terse.
_SECTIONS = {
    "ingest": [("ink_threshold", "ink_threshold")],
    "contact": [
        ("t_low_px", "t_low_px"),
        ("t_high_px", "t_high_px"),
        ("min_down_ms", "min_down_ms"),
        ("min_up_ms", "min_up_ms"),
    ],
    "segment": [("slack_ms", "slack_ms")],
    "skeleton": [
        ("min_increment_px", "min_increment_px"),
        ("max_jump_px", "max_jump_px"),
        ("smooth_window", "smooth_window"),
    ],
    "fusion": [("n_tiers", "n_tiers"), ("ref_window_points", "ref_window_points")],
}


@dataclass(frozen=True)
class PipelineConfig:
    ink_threshold: int = 100
    t_low_px: float = 4.0
    t_high_px: float = 9.0
    min_down_ms: int = 60
    min_up_ms: int = 60
    slack_ms: int = 80
    min_increment_px: int = 4
    max_jump_px: float = 40.0
    smooth_window: int = 3
    n_tiers: int = 5
    ref_window_points: int = 3

    def __post_init__(self):
        if not 0 <= self.ink_threshold <= 256:
            raise InputError("ink_threshold must be in [0, 256]")
        if not 0 <= self.t_low_px < self.t_high_px:
            raise InputError("require 0 <= t_low_px < t_high_px")
        if self.min_down_ms < 0 or self.min_up_ms < 0:
            raise InputError("contact durations must be >= 0")
        if self.slack_ms < 0:
            raise InputError("slack_ms must be >= 0")
        if self.min_increment_px < 1:
            raise InputError("min_increment_px must be >= 1")
        if self.max_jump_px <= 0:
            raise InputError("max_jump_px must be > 0")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise InputError("smooth_window must be an odd integer >= 1")
        if self.n_tiers < 2:
            raise InputError("n_tiers must be >= 2")
        if self.ref_window_points < 2:
            raise InputError("ref_window_points must be >= 2")

    def to_nested(self) -> dict:
        return {
            section: {key: getattr(self, attr) for key, attr in entries}
            for section, entries in _SECTIONS.items()
        }

    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_nested(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def config_from_nested(doc: dict) -> PipelineConfig:
    known = {f.name for f in fields(PipelineConfig)}
    kwargs = {}
    for section, entries in doc.items():
        if section not in _SECTIONS:
            raise InputError(f"unknown config section {section!r}")
        if not isinstance(entries, dict):
            raise InputError(f"config section {section!r} must be an object")
        valid_keys = dict(_SECTIONS[section])
        for key, value in entries.items():
            if key not in valid_keys:
                raise InputError(f"unknown config key {section}.{key}")
            attr = valid_keys[key]
            assert attr in known
            kwargs[attr] = value
    return PipelineConfig(**kwargs)


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON: {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"config root must be an object: {path}")
    return config_from_nested(doc)
