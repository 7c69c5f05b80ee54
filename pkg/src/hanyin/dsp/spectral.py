"""Spectrum, spectrogram, band energy and RMS envelope."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BufferTooShort, EmptyBand
from .wav import AudioBuffer

DB_FLOOR = -160.0


def hann(n: int) -> np.ndarray:
    """Periodic Hann window (exact for overlap-add at 50%)."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def is_power_of_two(n) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def _check_geometry(window_size, hop=None):
    if not is_power_of_two(window_size):
        raise ValueError(f"window_size must be a power of two, got {window_size!r}")
    if hop is not None and not (0 < hop <= window_size):
        raise ValueError(f"hop must satisfy 0 < hop <= window_size, got {hop!r}")


def frame_count(n: int, window_size: int, hop: int) -> int:
    if n < window_size:
        return 0
    return (n - window_size) // hop + 1


def frames(samples: np.ndarray, window_size: int, hop: int) -> np.ndarray:
    """Strided view of shape (frame_count, window_size); no padding."""
    count = frame_count(samples.size, window_size, hop)
    if count == 0:
        return np.zeros((0, window_size))
    view = np.lib.stride_tricks.sliding_window_view(samples, window_size)
    return view[::hop][:count]


def power_spectrum(frame: np.ndarray) -> np.ndarray:
    """One-sided power spectrum whose sum equals ``sum(frame**2)``.

    ``frame`` is used as given (apply the window first).
    """
    n = frame.shape[-1]
    spec = np.abs(np.fft.rfft(frame, axis=-1)) ** 2 / n
    spec[..., 1:(n + 1) // 2] *= 2.0
    return spec


def _to_db(power: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(power)
    return np.maximum(db, DB_FLOOR)


def _sine_calibration(window: np.ndarray) -> float:
    # |X_k|**2 of a unit sine on bin k is (sum(w)/2)**2
    return (2.0 / window.sum()) ** 2


@dataclass(frozen=True, eq=False)
class Spectrum:
    bin_freqs: np.ndarray
    magnitudes_db: np.ndarray
    window_size: int
    sample_rate: int

    @property
    def power(self) -> np.ndarray:
        """Linear power per bin, in units where a full-scale sine peaks at 1."""
        return 10.0 ** (self.magnitudes_db / 10.0)

    def mean_square(self) -> float:
        """Mean-square amplitude of the analysed signal implied by the spectrum."""
        w = hann(self.window_size)
        total = self.power.sum() / _sine_calibration(w)
        # one-sided bins without doubling hold half the windowed energy per sample
        return 2.0 * total / (self.window_size * np.sum(w * w))


@dataclass(frozen=True, eq=False)
class Spectrogram:
    frame_times: np.ndarray
    bin_freqs: np.ndarray
    magnitudes_db: np.ndarray  # frames x bins
    window_size: int
    hop: int
    sample_rate: int


def spectrum(buffer: AudioBuffer, window_size: int = 2048) -> Spectrum:
    """Welch average of Hann-windowed periodograms at 50% overlap.

    0 dB is the peak of a full-scale sine centred on a bin.
    """
    _check_geometry(window_size)
    if len(buffer) < window_size:
        raise BufferTooShort(f"{len(buffer)} samples < window of {window_size}")
    w = hann(window_size)
    segs = frames(buffer.samples, window_size, window_size // 2)
    raw = np.abs(np.fft.rfft(segs * w, axis=-1)) ** 2
    mean_power = raw.mean(axis=0) * _sine_calibration(w)
    freqs = np.arange(window_size // 2 + 1) * buffer.sample_rate / window_size
    return Spectrum(freqs, _to_db(mean_power), window_size, buffer.sample_rate)


def stft(buffer: AudioBuffer, window_size: int = 2048, hop: int = 512) -> Spectrogram:
    _check_geometry(window_size, hop)
    if len(buffer) < window_size:
        raise BufferTooShort(f"{len(buffer)} samples < window of {window_size}")
    w = hann(window_size)
    segs = frames(buffer.samples, window_size, hop)
    power = np.abs(np.fft.rfft(segs * w, axis=-1)) ** 2 * _sine_calibration(w)
    sr = buffer.sample_rate
    times = (np.arange(segs.shape[0]) * hop + window_size / 2) / sr
    freqs = np.arange(window_size // 2 + 1) * sr / window_size
    return Spectrogram(times, freqs, _to_db(power), window_size, hop, sr)


def band_energy(spec: Spectrum, f_lo: float, f_hi: float) -> float:
    """Fraction of total linear power in bins with ``f_lo <= f <= f_hi``."""
    nyquist = spec.sample_rate / 2
    if not (0 <= f_lo < f_hi <= nyquist):
        raise ValueError(f"band [{f_lo}, {f_hi}] outside [0, {nyquist}]")
    mask = (spec.bin_freqs >= f_lo) & (spec.bin_freqs <= f_hi)
    if not mask.any():
        raise EmptyBand(f"no bins in [{f_lo}, {f_hi}] Hz")
    power = spec.power
    total = power.sum()
    if total <= 0:
        return 0.0
    return float(min(1.0, power[mask].sum() / total))


def rms_envelope(buffer: AudioBuffer, frame_size: int = 2048, hop: int = 512):
    """Per-frame RMS of the raw samples, as ``(times, rms)`` with frame-centre times."""
    if frame_size <= 0 or not (0 < hop <= frame_size):
        raise ValueError("need frame_size > 0 and 0 < hop <= frame_size")
    if len(buffer) < frame_size:
        raise BufferTooShort(f"{len(buffer)} samples < frame of {frame_size}")
    segs = frames(buffer.samples, frame_size, hop)
    rms = np.sqrt(np.mean(segs * segs, axis=1))
    times = (np.arange(segs.shape[0]) * hop + frame_size / 2) / buffer.sample_rate
    return times, rms
