"""Tone, fricative place, onset voicing and nasal-coda decisions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config
from .dsp import (AudioBuffer, PitchTrack, Spectrogram, Spectrum, band_energy,
                  enhanced_autocorrelation, estimate_f0_frame, frames, spectrum)
from .errors import BufferTooShort, SilentRegion, TooFewVoicedFrames
from .segment import PhoneRegions

# contour shapes in semitones over normalised time, used only by the fallback rule
_TEMPLATE_U = np.linspace(0.0, 1.0, 101)
TONE_TEMPLATES = {
    1: np.zeros_like(_TEMPLATE_U),
    2: 7.0 * _TEMPLATE_U,
    3: np.where(_TEMPLATE_U <= 0.6, -5.7 * _TEMPLATE_U / 0.6,
                -5.7 + 7.35 * (_TEMPLATE_U - 0.6) / 0.4),
    4: -12.0 * _TEMPLATE_U,
}


@dataclass(frozen=True)
class ToneResult:
    tone: int
    features: dict
    confidence: float
    rule: str = ""

    def __post_init__(self):
        if self.tone not in (1, 2, 3, 4, 5):
            raise ValueError(f"tone must be 1-5, got {self.tone}")
        if not self.features.get("duration", 0) > 0:
            raise ValueError("duration must be positive")

    def to_dict(self) -> dict:
        return {"tone": self.tone, "confidence": self.confidence, "rule": self.rule,
                "features": dict(self.features)}


@dataclass(frozen=True)
class FricativeClass:
    kind: str  # "s_like" or "sh_like"
    hi_band_ratio: float
    top_band_ratio: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "hi_band_ratio": self.hi_band_ratio,
                "top_band_ratio": self.top_band_ratio}


@dataclass(frozen=True)
class VoicingDecision:
    voiced: bool
    low_freq_ratio: float
    periodicity: float

    def to_dict(self) -> dict:
        return {"voiced": self.voiced, "low_freq_ratio": self.low_freq_ratio,
                "periodicity": self.periodicity}


@dataclass(frozen=True)
class CodaDecision:
    present: bool
    tail_span: tuple | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.present != (self.tail_span is not None):
            raise ValueError("tail_span must be given exactly when present")

    def to_dict(self) -> dict:
        return {"present": self.present,
                "tail_span": None if self.tail_span is None else list(self.tail_span),
                **self.details}


def _margin(value: float, scale: float) -> float:
    return float(np.clip(value / scale, 0.0, 1.0)) if scale > 0 else 1.0


def tone_features(track: PitchTrack) -> dict:
    voiced = track.voiced
    t = track.times[voiced]
    f0 = track.f0[voiced]
    st = 12.0 * np.log2(f0 / np.median(f0))
    step = float(np.median(np.diff(track.times))) if len(track) > 1 else 0.0
    duration = float(t[-1] - t[0]) + step
    slope, intercept = np.polyfit(t - t[0], st, 1)
    fit_ends = intercept + slope * np.array([0.0, t[-1] - t[0]])
    i_min = int(np.argmin(st))
    rel = (t[i_min] - t[0]) / (t[-1] - t[0]) if t[-1] > t[0] else 0.0
    return {
        "level": float(st.mean()),
        "slope": float(slope),
        "dip_depth": float(fit_ends.max() - st[i_min]),
        "duration": duration,
        "range": float(st.max() - st.min()),
        "dip_position": float(rel),
    }


def _template_residuals(track: PitchTrack) -> dict:
    voiced = track.voiced
    t = track.times[voiced]
    st = 12.0 * np.log2(track.f0[voiced] / np.median(track.f0[voiced]))
    u = (t - t[0]) / (t[-1] - t[0]) if t[-1] > t[0] else np.zeros_like(t)
    out = {}
    for tone, shape in TONE_TEMPLATES.items():
        ref = np.interp(u, _TEMPLATE_U, shape)
        diff = (st - st.mean()) - (ref - ref.mean())
        out[tone] = float(np.mean(diff ** 2))
    return out


def classify_tone(track: PitchTrack, config: Config = DEFAULT) -> ToneResult:
    """Rule cascade on the median-relative semitone contour.

    Rules, first match wins: short duration gives the neutral tone; a deep
    dip inside the middle 60% gives tone 3; steep rise or fall give tones
    2 and 4; a flat narrow contour gives tone 1.  Anything left is tone 3 if
    it sits low, else the nearest template.
    """
    if int(track.voiced.sum()) < config.min_voiced_frames:
        raise TooFewVoicedFrames(
            f"{int(track.voiced.sum())} voiced frames, need {config.min_voiced_frames}")
    feats = tone_features(track)
    duration, slope = feats["duration"], feats["slope"]
    neutral_s = config.neutral_max_ms / 1000.0

    if duration < neutral_s:
        return ToneResult(5, feats, _margin(neutral_s - duration, neutral_s), "short")
    if feats["dip_depth"] > config.dip_threshold and 0.2 <= feats["dip_position"] <= 0.8:
        return ToneResult(3, feats, _margin(feats["dip_depth"] - config.dip_threshold,
                                            config.dip_threshold), "dip")
    if slope > config.slope_threshold:
        return ToneResult(2, feats, _margin(slope - config.slope_threshold,
                                            config.slope_threshold), "rise")
    if slope < -config.slope_threshold:
        return ToneResult(4, feats, _margin(-config.slope_threshold - slope,
                                            config.slope_threshold), "fall")
    if feats["range"] < config.level_range_max:
        conf = min(_margin(config.slope_threshold - abs(slope), config.slope_threshold),
                   _margin(config.level_range_max - feats["range"], config.level_range_max))
        return ToneResult(1, feats, conf, "level")
    if feats["level"] < -config.low_level_drop:
        return ToneResult(3, feats, _margin(-config.low_level_drop - feats["level"],
                                            config.low_level_drop), "low")
    res = _template_residuals(track)
    ranked = sorted(res, key=res.get)
    best, second = res[ranked[0]], res[ranked[1]]
    conf = _margin(second - best, second) if second > 0 else 1.0
    return ToneResult(ranked[0], feats, conf, "template")


def classify_fricative(spec: Spectrum, config: Config = DEFAULT) -> FricativeClass:
    """sh-like when 2-8 kHz power beats power above 8 kHz by ``fricative_ratio``."""
    if spec.mean_square() < config.silence_rms ** 2:
        raise SilentRegion("consonant region is below the silence floor")
    hi = band_energy(spec, 2000.0, 8000.0)
    top = band_energy(spec, 8000.0, spec.sample_rate / 2)
    kind = "sh_like" if hi > top * config.fricative_ratio else "s_like"
    return FricativeClass(kind, hi, top)


def _block_frame(n: int, preferred: int) -> int:
    size = preferred
    while size > n and size > 64:
        size //= 2
    if size > n:
        raise BufferTooShort(f"block of {n} samples is shorter than one frame")
    return size


def detect_voicing(frame_block, sample_rate: int, config: Config = DEFAULT) -> VoicingDecision:
    """Voiced if the block is periodic or its power sits mostly below 500 Hz.

    The frame shrinks (by halves) to fit blocks shorter than the configured
    analysis window.
    """
    x = np.asarray(frame_block, dtype=np.float64)
    size = _block_frame(x.size, config.window)
    buf = AudioBuffer(x, sample_rate)
    low = band_energy(spectrum(buf, size), 0.0, config.low_band_hz)
    periodicity = 0.0
    for seg in frames(x, size, max(1, size // 4)):
        curve = enhanced_autocorrelation(seg)
        if curve.frame_rms < config.silence_rms:
            continue
        _, conf = estimate_f0_frame(curve, sample_rate, config.f0_min, config.f0_max, 0.0, 0.0)
        periodicity = max(periodicity, conf)
    voiced = periodicity >= config.periodicity_threshold or low >= config.low_freq_ratio
    return VoicingDecision(bool(voiced), float(low), float(periodicity))


def _frames_in(times: np.ndarray, span) -> np.ndarray:
    return (times >= span[0]) & (times <= span[1])


def _nearest(times: np.ndarray, span) -> np.ndarray:
    mask = np.zeros(times.size, bool)
    mask[int(np.argmin(np.abs(times - 0.5 * (span[0] + span[1]))))] = True
    return mask


def detect_coda(regions: PhoneRegions, track: PitchTrack, spectrogram: Spectrogram,
                config: Config = DEFAULT) -> CodaDecision:
    """A nasal coda is a tail region that is periodic but weaker than the
    vowel, and dark (little 2-8 kHz power).

    Normalised EAC confidence ignores level, so periodicity is weighted by
    each frame's amplitude relative to the vowel's median amplitude before
    tail and vowel are compared.  ``track`` and ``spectrogram`` must share
    their frame grid.
    """
    tail = regions.coda_tail
    if tail is None:
        return CodaDecision(False, None, {"reason": "no tail region"})
    if len(track) != spectrogram.frame_times.size:
        raise ValueError("pitch track and spectrogram frame grids differ")
    times = track.times
    in_tail = _frames_in(times, tail)
    if not in_tail.any():
        in_tail = _nearest(times, tail)
    in_vowel = _frames_in(times, regions.vowel)
    if not in_vowel.any():
        in_vowel = _nearest(times, regions.vowel)

    power = 10.0 ** (spectrogram.magnitudes_db / 10.0)
    amp = np.sqrt(power.sum(axis=1))
    vowel_amp = float(np.median(amp[in_vowel]))
    rel = np.minimum(1.0, amp / vowel_amp) if vowel_amp > 0 else np.zeros_like(amp)
    strength = track.confidence * rel
    tail_strength = float(np.median(strength[in_tail]))
    vowel_strength = float(np.median(strength[in_vowel]))

    freqs = spectrogram.bin_freqs
    band = (freqs >= 2000.0) & (freqs <= 8000.0)
    tail_power = power[in_tail]
    total = tail_power.sum()
    highband = float(tail_power[:, band].sum() / total) if total > 0 else 0.0

    weak_voicing = 0.0 < tail_strength < vowel_strength
    present = bool(weak_voicing and highband < config.tail_highband_max)
    details = {"tail_strength": tail_strength, "vowel_strength": vowel_strength,
               "tail_highband": highband}
    return CodaDecision(present, tuple(tail) if present else None, details)


__all__ = [
    "ToneResult", "FricativeClass", "VoicingDecision", "CodaDecision", "TONE_TEMPLATES",
    "tone_features", "classify_tone", "classify_fricative", "detect_voicing", "detect_coda",
]
