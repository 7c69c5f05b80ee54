"""Every tunable threshold, in one frozen object that is threaded through the
pipeline and echoed into reports."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    # analysis frames
    window: int = 2048
    hop: int = 512
    f0_min: float = 50.0
    f0_max: float = 500.0
    voicing_threshold: float = 0.30
    silence_rms: float = 0.001
    db_floor: float = -160.0
    # syllable detection
    t_hi: float = 0.02
    t_lo: float = 0.01
    min_gap_ms: float = 60.0
    min_syllable_ms: float = 50.0
    envelope_frame: int = 512
    # phone regions
    flux_threshold: float = 0.2
    steady_rms_ratio: float = 0.75
    max_vowel_gap: int = 6  # cells
    highband_dominant: float = 0.5
    tail_rms_ratio: float = 0.5
    tail_highband_max: float = 0.1
    min_tail_ms: float = 25.0
    # tone
    neutral_max_ms: float = 120.0
    dip_threshold: float = 2.5
    slope_threshold: float = 8.0
    level_range_max: float = 3.0
    low_level_drop: float = 1.0
    min_voiced_frames: int = 4
    # onset classification
    fricative_ratio: float = 1.5
    periodicity_threshold: float = 0.30
    low_freq_ratio: float = 0.5
    low_band_hz: float = 500.0

    def __post_init__(self):
        if self.window <= 0 or self.window & (self.window - 1):
            raise ValueError("window must be a power of two")
        if not 0 < self.hop <= self.window:
            raise ValueError("hop must satisfy 0 < hop <= window")
        if not 0 < self.f0_min < self.f0_max:
            raise ValueError("need 0 < f0_min < f0_max")
        if self.t_lo > self.t_hi:
            raise ValueError("t_lo must not exceed t_hi")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_overrides(cls, pairs=(), base: "Config | None" = None) -> "Config":
        """Apply ``key=value`` strings, coercing to each field's type."""
        base = base or cls()
        types = {f.name: type(getattr(base, f.name)) for f in dataclasses.fields(cls)}
        changes = {}
        for pair in pairs:
            key, sep, raw = pair.partition("=")
            key = key.strip()
            if not sep or key not in types:
                raise ValueError(f"unknown config override {pair!r}")
            try:
                changes[key] = types[key](raw.strip())
            except ValueError:
                raise ValueError(f"bad value for {key}: {raw!r}") from None
        return dataclasses.replace(base, **changes)

    @classmethod
    def from_json(cls, path) -> "Config":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT = Config()
