"""Deterministic synthetic syllables with exact ground truth.

Voiced sounds are a band-limited pulse train (phase integrated from the
instantaneous F0) through two cascaded resonators at 700 and 1200 Hz.
Noise comes from the 64-bit LCG in :mod:`hanyin.kernels`, so the same
spec and seed give the same bytes on every platform.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import signal

from . import kernels
from .dsp import AudioBuffer
from .errors import InvalidSpec

SAMPLE_RATE = 44100
CONTOUR_RATE = 200.0
FORMANTS = ((700.0, 130.0), (1200.0, 130.0))
PULSE_BANDWIDTH = 5000.0
NEUTRAL_MAX_S = 0.100
ONSETS = ("none", "s_like", "sh_like", "voiced_stop", "unvoiced_stop", "lateral")
NOISE_FLOOR_DB = -30.0
BURST_S = 0.015
EDGE_S = 0.005
TAIL_GAIN = 0.4
TAIL_CUTOFF = 1000.0


@dataclass(frozen=True)
class SyllableSynthSpec:
    tone: int = 1
    base_f0: float = 180.0
    onset: str = "none"
    vowel_ms: float = 250.0
    onset_ms: float = 80.0
    transition_ms: float = 40.0
    tail_ms: float = 100.0
    nasal_tail: bool = False
    seed: int = 0
    amplitude: float = 0.7
    onset_gain: float = 0.4

    def validate(self):
        if self.tone not in (1, 2, 3, 4, 5):
            raise InvalidSpec(f"tone must be 1-5, got {self.tone!r}")
        if not 80.0 <= self.base_f0 <= 400.0:
            raise InvalidSpec(f"base_f0 must lie in [80, 400] Hz, got {self.base_f0!r}")
        if self.onset not in ONSETS:
            raise InvalidSpec(f"onset must be one of {ONSETS}, got {self.onset!r}")
        for name in ("onset_ms", "transition_ms", "tail_ms"):
            if getattr(self, name) < 0:
                raise InvalidSpec(f"{name} must be >= 0")
        if self.vowel_ms <= 0:
            raise InvalidSpec("vowel_ms must be > 0")
        if not 0.0 <= self.amplitude <= 1.0 or not 0.0 <= self.onset_gain <= 1.0:
            raise InvalidSpec("amplitude and onset_gain must lie in [0, 1]")

    @classmethod
    def from_dict(cls, data: dict) -> "SyllableSynthSpec":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown spec fields: {sorted(unknown)}")
        spec = cls(**data)
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        return asdict(self)


def synth_tone_contour(tone: int, base_f0: float, duration: float):
    """Sampled F0 contour ``(times, f0)`` at 200 Hz for a lexical tone.

    Tone 5 is truncated to 100 ms.
    """
    if tone not in (1, 2, 3, 4, 5):
        raise InvalidSpec(f"tone must be 1-5, got {tone!r}")
    if tone == 5:
        duration = min(duration, NEUTRAL_MAX_S)
    n = int(np.floor(duration * CONTOUR_RATE + 1e-9)) + 1
    times = np.arange(n) / CONTOUR_RATE
    u = times / duration if duration > 0 else np.zeros(n)
    if tone == 1:
        f0 = np.full(n, 1.25 * base_f0)
    elif tone == 2:
        f0 = base_f0 * 1.5 ** u
    elif tone == 3:
        fall = base_f0 * 0.72 ** (u / 0.6)
        rise = 0.72 * base_f0 * (1.1 / 0.72) ** ((u - 0.6) / 0.4)
        f0 = np.where(u <= 0.6, fall, rise)
    elif tone == 4:
        f0 = 1.5 * base_f0 * 0.5 ** u
    else:
        f0 = np.full(n, float(base_f0))
    return times, f0


def _per_sample_f0(f0_curve, n: int, sample_rate: int) -> np.ndarray:
    if np.isscalar(f0_curve):
        return np.full(n, float(f0_curve))
    times, values = f0_curve
    t = np.arange(n) / sample_rate
    return np.interp(t, np.asarray(times, float), np.asarray(values, float))


def pulse_source(f0: np.ndarray, sample_rate: int) -> np.ndarray:
    """Equal-amplitude harmonics of the running F0, tapered off towards 5 kHz."""
    if f0.size == 0:
        return np.zeros(0)
    phase = 2.0 * np.pi * np.cumsum(f0) / sample_rate
    kmax = int(min(PULSE_BANDWIDTH, 0.45 * sample_rate) / max(f0.min(), 1.0))
    out = np.zeros(f0.size)
    for k in range(1, kmax + 1):
        hf = k * f0
        gain = np.clip((PULSE_BANDWIDTH - hf) / (0.2 * PULSE_BANDWIDTH), 0.0, 1.0)
        gain = np.where(hf < 0.45 * sample_rate, gain, 0.0)
        if not gain.any():
            break
        out += gain * np.cos(k * phase)
    return out


def _resonator(x, freq, bandwidth, sample_rate):
    r = np.exp(-np.pi * bandwidth / sample_rate)
    a1 = 2.0 * r * np.cos(2.0 * np.pi * freq / sample_rate)
    a2 = -r * r
    return kernels.resonate(x, 1.0 - a1 - a2, a1, a2)


def _formant_filter(x, sample_rate):
    for freq, bw in FORMANTS:
        x = _resonator(x, freq, bw, sample_rate)
    return x


def _lowpass(x, cutoff, sample_rate):
    sos = signal.butter(4, cutoff, btype="low", fs=sample_rate, output="sos")
    return signal.sosfilt(sos, x)


def _peak_normalize(x, peak):
    m = np.max(np.abs(x)) if x.size else 0.0
    if m == 0.0 or peak == 0.0:
        return np.zeros_like(x)
    return x * (peak / m)


def synth_voiced(f0_curve, duration: float, amplitude: float = 0.7,
                 sample_rate: int = SAMPLE_RATE) -> AudioBuffer:
    """Vowel-like voiced sound; ``f0_curve`` is a constant or ``(times, f0)``."""
    n = int(round(duration * sample_rate))
    f0 = _per_sample_f0(f0_curve, n, sample_rate)
    if np.any(f0 <= 0):
        raise InvalidSpec("f0 must be positive")
    x = _formant_filter(pulse_source(f0, sample_rate), sample_rate)
    return AudioBuffer(_peak_normalize(x, amplitude), sample_rate)


def _shaped_noise(n, sample_rate, seed, band):
    noise = kernels.lcg_uniform(seed, n)
    if n == 0:
        return noise
    spec = np.fft.rfft(noise)
    freqs = np.fft.rfftfreq(n, 1.0 / sample_rate)
    lo, hi = band
    gain = np.where((freqs >= lo) & (freqs <= hi), 1.0, 10.0 ** (NOISE_FLOOR_DB / 20.0))
    return np.fft.irfft(spec * gain, n=n)


def synth_fricative(kind: str, duration: float, seed: int = 0,
                    sample_rate: int = SAMPLE_RATE, amplitude: float = 0.5) -> AudioBuffer:
    """Seeded noise, flat in 2-8 kHz (``sh_like``) or above 8 kHz (``s_like``),
    30 dB down elsewhere."""
    if kind == "sh_like":
        band = (2000.0, 8000.0)
    elif kind == "s_like":
        band = (8000.0, sample_rate / 2.0)
    else:
        raise InvalidSpec(f"fricative kind must be s_like or sh_like, got {kind!r}")
    n = int(round(duration * sample_rate))
    x = _shaped_noise(n, sample_rate, seed, band)
    return AudioBuffer(_peak_normalize(x, amplitude), sample_rate)


def _ramp(n, rising):
    if n <= 0:
        return np.ones(0)
    r = (np.arange(n) + 0.5) / n
    return r if rising else 1.0 - r


def _onset_signal(spec, n, sample_rate, f0_start):
    peak = spec.amplitude * spec.onset_gain
    if spec.onset in ("s_like", "sh_like"):
        return synth_fricative(spec.onset, n / sample_rate, spec.seed, sample_rate, peak).samples.copy()
    if spec.onset in ("voiced_stop", "unvoiced_stop"):
        burst = _shaped_noise(n, sample_rate, spec.seed, (500.0, 8000.0))
        t = np.arange(n) / sample_rate
        burst = burst * np.exp(-np.maximum(t - BURST_S, 0.0) / BURST_S)
        burst = _peak_normalize(burst, peak)
        if spec.onset == "voiced_stop":
            bar = 0.5 * peak * np.sin(2.0 * np.pi * 150.0 * t)
            burst = _peak_normalize(burst + bar, peak)
        return burst
    # lateral: low-passed voicing at the starting pitch
    src = pulse_source(np.full(n, f0_start), sample_rate)
    return _peak_normalize(_lowpass(src, TAIL_CUTOFF, sample_rate), peak)


def synth_syllable(spec: SyllableSynthSpec, sample_rate: int = SAMPLE_RATE):
    """Render one syllable.

    Returns ``(buffer, truth)`` where ``truth`` holds the tone and the exact
    region boundaries in seconds (``None`` for absent regions).
    """
    spec.validate()
    sr = sample_rate
    vowel_s = spec.vowel_ms / 1000.0
    if spec.tone == 5:
        vowel_s = min(vowel_s, NEUTRAL_MAX_S)
    has_onset = spec.onset != "none"
    onset_n = int(round(spec.onset_ms / 1000.0 * sr)) if has_onset else 0
    trans_n = int(round(spec.transition_ms / 1000.0 * sr)) if has_onset else 0
    vowel_n = int(round(vowel_s * sr))
    tail_n = int(round(spec.tail_ms / 1000.0 * sr)) if spec.nasal_tail else 0

    times, contour = synth_tone_contour(spec.tone, spec.base_f0, vowel_s)
    voiced_n = trans_n + vowel_n + tail_n
    t = (np.arange(voiced_n) - trans_n) / sr
    f0 = np.interp(t, times, contour)  # held flat through transition and tail
    src = pulse_source(f0, sr)

    vowel = _peak_normalize(_formant_filter(src, sr), spec.amplitude)
    gain = np.ones(voiced_n)
    gain[:trans_n] = _ramp(trans_n, rising=True)
    edge = int(round(EDGE_S * sr))
    if trans_n == 0:
        k = min(edge, vowel_n)
        gain[:k] = _ramp(k, rising=True)
    voiced = vowel * gain
    if tail_n:
        tail = _peak_normalize(_lowpass(src, TAIL_CUTOFF, sr), TAIL_GAIN * spec.amplitude)
        k = min(edge, tail_n)
        mix = np.zeros(voiced_n)
        mix[trans_n + vowel_n:] = 1.0
        mix[trans_n + vowel_n: trans_n + vowel_n + k] = _ramp(k, rising=True)
        voiced = voiced * (1.0 - mix) + tail * mix
    k = min(edge, voiced_n)
    voiced[voiced_n - k:] *= _ramp(k, rising=False)

    if has_onset:
        onset = _onset_signal(spec, onset_n + trans_n, sr, f0[0] if f0.size else spec.base_f0)
        onset[onset_n:] *= _ramp(trans_n, rising=False)
        samples = np.zeros(onset_n + voiced_n)
        samples[: onset_n + trans_n] += onset
        samples[onset_n:] += voiced
    else:
        samples = voiced
    samples = np.clip(samples, -1.0, 1.0)

    def span(a, b):
        return (a / sr, b / sr) if b > a else None

    v0 = onset_n + trans_n
    truth = {
        "tone": spec.tone,
        "duration": samples.size / sr,
        "consonant": span(0, onset_n),
        "transition": span(onset_n, v0),
        "vowel": span(v0, v0 + vowel_n),
        "coda_tail": span(v0 + vowel_n, v0 + vowel_n + tail_n),
    }
    return AudioBuffer(samples, sr), truth


def synth_utterance(specs, gap_ms: float = 100.0, sample_rate: int = SAMPLE_RATE):
    """Join syllables with silence between them.

    ``gap_ms`` is one duration for every gap or a sequence with one entry
    per gap.  Returns ``(buffer, truths)``; each truth carries the
    syllable's ``span`` and region boundaries on the utterance time axis.
    """
    specs = list(specs)
    gaps = np.broadcast_to(np.asarray(gap_ms, dtype=float), (max(len(specs) - 1, 0),))
    if np.any(gaps < 0):
        raise InvalidSpec("gap_ms must be >= 0")
    pieces = []
    truths = []
    offset = 0
    for i, spec in enumerate(specs):
        if i:
            gap = np.zeros(int(round(gaps[i - 1] / 1000.0 * sample_rate)))
            pieces.append(gap)
            offset += gap.size
        buf, truth = synth_syllable(spec, sample_rate)
        t0 = offset / sample_rate
        shifted = {"tone": truth["tone"], "span": (t0, t0 + buf.duration)}
        for key in ("consonant", "transition", "vowel", "coda_tail"):
            r = truth[key]
            shifted[key] = None if r is None else (t0 + r[0], t0 + r[1])
        truths.append(shifted)
        pieces.append(buf.samples)
        offset += len(buf)
    samples = np.concatenate(pieces) if pieces else np.zeros(0)
    return AudioBuffer(samples, sample_rate), truths
