"""Enhanced autocorrelation (EAC) and frame-wise F0 tracking.

The EAC of a frame is the generalized autocorrelation with cube-root
spectral compression, half-wave rectified, minus its own copy stretched
by two along the lag axis, rectified again.  The subtraction removes the
peak at twice the period that a plain autocorrelation shares with the
true period.

Before rectification the curve is divided by the same compressed
autocorrelation of the analysis window alone, which removes the taper
that otherwise drags peaks toward shorter lags.  Lags where that window
term falls below ``WINDOW_FLOOR`` are zeroed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import kernels
from ..errors import BufferTooShort
from .spectral import _check_geometry, frames, hann
from .wav import AudioBuffer

F0_MIN = 50.0
F0_MAX = 500.0
VOICING_THRESHOLD = 0.30
SILENCE_RMS = 0.001
WINDOW_FLOOR = 0.2
# peaks this close to the best one count as ties; the shortest lag wins
PEAK_TIE_RATIO = 0.9


@dataclass(frozen=True, eq=False)
class EacCurve:
    lags: np.ndarray
    values: np.ndarray
    frame_origin: float = 0.0
    frame_rms: float = 0.0


@dataclass(frozen=True, eq=False)
class PitchTrack:
    """Per-frame F0 in Hz; unvoiced frames hold NaN."""

    times: np.ndarray
    f0: np.ndarray
    confidence: np.ndarray

    def __len__(self):
        return self.times.size

    @property
    def voiced(self) -> np.ndarray:
        return ~np.isnan(self.f0)

    def restrict(self, start: float, end: float) -> "PitchTrack":
        keep = (self.times >= start) & (self.times <= end)
        return PitchTrack(self.times[keep], self.f0[keep], self.confidence[keep])


def _generalized_acf(windowed: np.ndarray) -> np.ndarray:
    n = windowed.shape[-1]
    spec = np.fft.rfft(windowed, n=2 * n, axis=-1)
    compressed = (spec.real ** 2 + spec.imag ** 2) ** (1.0 / 3.0)
    return np.fft.irfft(compressed, n=2 * n, axis=-1)[..., :n]


@lru_cache(maxsize=8)
def _window_correction(n: int) -> np.ndarray:
    ref = _generalized_acf(hann(n))
    ref = ref / ref[0]
    inv = np.zeros(n)
    ok = ref >= WINDOW_FLOOR
    inv[ok] = 1.0 / ref[ok]
    inv.setflags(write=False)
    return inv


def _eac_rows(segments: np.ndarray) -> np.ndarray:
    """EAC for each row of ``segments`` (raw samples), normalised at lag 0."""
    n = segments.shape[-1]
    gac = _generalized_acf(segments * hann(n))
    zero_lag = gac[..., :1].copy()
    with np.errstate(invalid="ignore", divide="ignore"):
        gac = np.where(zero_lag > 0, gac / zero_lag, 0.0)
    values = kernels.eac_enhance(gac * _window_correction(n))
    values[..., 0] = np.where(zero_lag[..., 0] > 0, 1.0, 0.0)
    return values


def enhanced_autocorrelation(frame, frame_origin: float = 0.0) -> EacCurve:
    frame = np.asarray(frame, dtype=np.float64)
    _check_geometry(frame.size)
    values = _eac_rows(frame[None, :])[0]
    rms = float(np.sqrt(np.mean(frame * frame)))
    return EacCurve(np.arange(frame.size), values, frame_origin, rms)


def estimate_f0_frame(curve: EacCurve, sample_rate: int,
                      f0_min: float = F0_MIN, f0_max: float = F0_MAX,
                      threshold: float = VOICING_THRESHOLD,
                      silence_rms: float = SILENCE_RMS):
    """Pick the EAC peak in the allowed lag range.

    The highest peak wins, except that any peak within ``PEAK_TIE_RATIO`` of
    it at a shorter lag is preferred: once the window taper is divided out,
    a clean periodic signal has equal peaks at 1, 3, 5... periods and the
    stretch-subtract step only clears the even multiples.

    Returns ``(f0, confidence)`` with ``f0`` None when unvoiced.
    """
    values = curve.values
    lo = max(1, int(np.floor(sample_rate / f0_max)))
    hi = min(values.size - 2, int(np.ceil(sample_rate / f0_min)))
    if hi <= lo:
        return None, 0.0
    seg = values[lo - 1: hi + 2]
    inner = seg[1:-1]
    is_peak = (inner >= seg[:-2]) & (inner > seg[2:]) & (inner > 0)
    if not is_peak.any():
        return None, 0.0
    cand = np.flatnonzero(is_peak)
    best = inner[cand].max()
    k = cand[np.argmax(inner[cand] >= PEAK_TIE_RATIO * best)] + lo
    confidence = float(min(1.0, values[k]))
    if confidence < threshold or curve.frame_rms < silence_rms:
        return None, confidence
    a, b, c = values[k - 1], values[k], values[k + 1]
    denom = a - 2.0 * b + c
    shift = 0.5 * (a - c) / denom if denom < 0 else 0.0
    lag = k + float(np.clip(shift, -0.5, 0.5))
    f0 = sample_rate / lag
    if not (f0_min <= f0 <= f0_max):
        return None, confidence
    return f0, confidence


def _smooth_voiced_runs(f0: np.ndarray) -> np.ndarray:
    out = f0.copy()
    voiced = ~np.isnan(f0)
    edges = np.flatnonzero(np.diff(np.concatenate(([0], voiced.astype(np.int8), [0]))))
    for start, stop in zip(edges[::2], edges[1::2]):
        out[start:stop] = kernels.median3(f0[start:stop])
    return out


def pitch_track(buffer: AudioBuffer, frame_size: int = 2048, hop: int = 512,
                f0_min: float = F0_MIN, f0_max: float = F0_MAX,
                threshold: float = VOICING_THRESHOLD,
                silence_rms: float = SILENCE_RMS) -> PitchTrack:
    """EAC pitch per frame, then a width-3 median over each voiced run.

    Frame times are frame centres.
    """
    _check_geometry(frame_size, hop)
    if len(buffer) < frame_size:
        raise BufferTooShort(f"{len(buffer)} samples < frame of {frame_size}")
    sr = buffer.sample_rate
    segs = frames(buffer.samples, frame_size, hop)
    curves = _eac_rows(segs)
    rms = np.sqrt(np.mean(segs * segs, axis=1))
    lags = np.arange(frame_size)
    times = (np.arange(segs.shape[0]) * hop + frame_size / 2) / sr
    f0 = np.full(segs.shape[0], np.nan)
    conf = np.zeros(segs.shape[0])
    for i in range(segs.shape[0]):
        curve = EacCurve(lags, curves[i], times[i], float(rms[i]))
        est, conf[i] = estimate_f0_frame(curve, sr, f0_min, f0_max, threshold, silence_rms)
        if est is not None:
            f0[i] = est
    return PitchTrack(times, _smooth_voiced_runs(f0), conf)


def frame_confidence(buffer: AudioBuffer, centers: np.ndarray, frame_size: int = 2048,
                     f0_min: float = F0_MIN, f0_max: float = F0_MAX,
                     silence_rms: float = SILENCE_RMS) -> np.ndarray:
    """EAC peak confidence of frames centred on the given sample indices.

    Frames are zero-padded past either end of the buffer; frames below the
    silence floor score 0.
    """
    half = frame_size // 2
    padded = np.concatenate((np.zeros(half), buffer.samples, np.zeros(half)))
    idx = np.asarray(centers, dtype=np.int64)
    segs = np.stack([padded[c: c + frame_size] for c in idx]) if idx.size else np.zeros((0, frame_size))
    curves = _eac_rows(segs)
    rms = np.sqrt(np.mean(segs * segs, axis=1)) if idx.size else np.zeros(0)
    lags = np.arange(frame_size)
    out = np.zeros(idx.size)
    for i in range(idx.size):
        curve = EacCurve(lags, curves[i], 0.0, float(rms[i]))
        _, c = estimate_f0_frame(curve, buffer.sample_rate, f0_min, f0_max, 0.0, 0.0)
        out[i] = c if rms[i] >= silence_rms else 0.0
    return out
