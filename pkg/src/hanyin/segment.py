"""Syllable detection and consonant/transition/vowel/tail segmentation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import DEFAULT, Config
from .dsp import AudioBuffer, frame_confidence, hann, rms_envelope
from .errors import BufferTooShort, NoVoicedFrames

Span = tuple  # (start_s, end_s)
FLUX_BAND_HZ = 500.0


@dataclass(frozen=True)
class SyllableSpan:
    start: float
    end: float

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span [{self.start}, {self.end}]")

    @property
    def duration(self) -> float:
        return self.end - self.start

    def as_tuple(self):
        return (self.start, self.end)


@dataclass(frozen=True)
class PhoneRegions:
    vowel: Span
    consonant: Span | None = None
    transition: Span | None = None
    coda_tail: Span | None = None

    def ordered(self):
        """Present regions as ``(name, span)`` in time order."""
        names = ("consonant", "transition", "vowel", "coda_tail")
        return [(n, getattr(self, n)) for n in names if getattr(self, n) is not None]

    def to_dict(self) -> dict:
        return {n: (None if s is None else list(s)) for n, s in
                (("consonant", self.consonant), ("transition", self.transition),
                 ("vowel", self.vowel), ("coda_tail", self.coda_tail))}


def detect_syllables(buffer: AudioBuffer, config: Config = DEFAULT) -> list[SyllableSpan]:
    """Hysteresis on the short-frame RMS envelope.

    Frames tile the buffer (frame = hop = ``envelope_frame``), so span edges
    fall on frame edges.
    """
    frame = config.envelope_frame
    if len(buffer) < frame:
        raise BufferTooShort(f"{len(buffer)} samples < frame of {frame}")
    _, rms = rms_envelope(buffer, frame, frame)
    sr = buffer.sample_rate
    min_gap = max(1, int(np.ceil(config.min_gap_ms / 1000.0 * sr / frame)))
    runs = kernels.hysteresis(rms, config.t_hi, config.t_lo, min_gap)
    spans = []
    for a, b in runs:
        start = a * frame / sr
        end = min(b * frame, len(buffer)) / sr
        if (end - start) * 1000.0 >= config.min_syllable_ms:
            spans.append(SyllableSpan(start, end))
    return spans


@dataclass(frozen=True, eq=False)
class FrameFeatures:
    """Per-cell features of a span; cell ``i`` covers ``edges[i]:edges[i+1]``."""

    edges: np.ndarray  # sample indices
    rms: np.ndarray
    confidence: np.ndarray
    highband: np.ndarray  # share of power in 2-8 kHz
    lowband: np.ndarray  # share of power below 2 kHz
    flux: np.ndarray
    sample_rate: int

    def time(self, edge_index: int) -> float:
        return float(self.edges[edge_index]) / self.sample_rate


def _cell_edges(a: int, b: int, hop: int) -> np.ndarray:
    n = max(1, int(round((b - a) / hop)))
    edges = a + np.arange(n + 1) * hop
    edges[-1] = b
    return edges


def frame_features(buffer: AudioBuffer, span: SyllableSpan, config: Config = DEFAULT):
    sr = buffer.sample_rate
    a = int(round(span.start * sr))
    b = min(len(buffer), int(round(span.end * sr)))
    if b <= a:
        raise ValueError("span lies outside the buffer")
    edges = _cell_edges(a, b, config.hop)
    x = buffer.samples
    n = edges.size - 1
    rms = np.array([np.sqrt(np.mean(x[edges[i]:edges[i + 1]] ** 2)) for i in range(n)])
    centers = (edges[:-1] + edges[1:]) // 2
    conf = frame_confidence(buffer, centers, config.window, config.f0_min,
                            config.f0_max, config.silence_rms)

    # short spectra on the cell grid for high-band share and flux
    w = hann(config.hop)
    half = config.hop // 2
    padded = np.concatenate((np.zeros(half), x, np.zeros(half)))
    segs = np.stack([padded[c: c + config.hop] for c in centers])
    mag = np.abs(np.fft.rfft(segs * w, axis=1))
    power = mag ** 2
    freqs = np.fft.rfftfreq(config.hop, 1.0 / sr)
    band = (freqs >= 2000.0) & (freqs <= 8000.0)
    low = freqs < 2000.0
    total = power.sum(axis=1)
    # flux on magnitudes pooled into FLUX_BAND_HZ bands, so harmonics gliding
    # with the pitch do not register as spectral change
    pooled = np.zeros((n, int(freqs[-1] // FLUX_BAND_HZ) + 1))
    np.add.at(pooled.T, (freqs // FLUX_BAND_HZ).astype(int), mag.T)
    with np.errstate(invalid="ignore", divide="ignore"):
        highband = np.where(total > 0, power[:, band].sum(axis=1) / total, 0.0)
        lowband = np.where(total > 0, power[:, low].sum(axis=1) / total, 0.0)
        psum = pooled.sum(axis=1, keepdims=True)
        norm = np.where(psum > 0, pooled / psum, 0.0)
    flux = np.zeros(n)
    flux[1:] = np.abs(np.diff(norm, axis=0)).sum(axis=1)
    return FrameFeatures(edges, rms, conf, highband, lowband, flux, sr)


def _runs(mask: np.ndarray):
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def segment_syllable(buffer: AudioBuffer, span: SyllableSpan,
                     config: Config = DEFAULT) -> PhoneRegions:
    """Split a syllable span into consonant, transition, vowel and tail.

    Cells are one hop long.  Leading cells that are unvoiced or dominated
    by 2-8 kHz energy form the consonant; the vowel is the longest voiced
    run after it; cells between the consonant and the point where the
    spectrum settles (flux at or below ``flux_threshold``) form the
    transition; trailing quiet, dark, voiced cells form the tail.
    """
    f = frame_features(buffer, span, config)
    return regions_from_features(f, config)


def regions_from_features(f: FrameFeatures, config: Config = DEFAULT) -> PhoneRegions:
    n = f.rms.size
    voiced = (f.confidence >= config.voicing_threshold) & (f.rms >= config.silence_rms)
    if not voiced.any():
        raise NoVoicedFrames("no voiced frames in span")

    # unvoiced cells whose power sits below 2 kHz already belong to the vowel
    # onset (EAC confidence lags behind in a noise/vowel crossfade)
    dark = f.lowband >= 0.5
    consonant_like = (~voiced & ~dark) | (f.highband > config.highband_dominant)
    c_end = 0
    while c_end < n and consonant_like[c_end]:
        c_end += 1

    vowel_cells = voiced & (f.highband <= config.highband_dominant)
    vowel_cells[:c_end] = False
    # short dips in confidence (fast or very low pitch) do not split the vowel
    # as long as the cells stay dark and audible
    bridgeable = dark & (f.rms >= config.silence_rms)
    runs = _runs(vowel_cells)
    for (_, a), (b, _) in zip(runs, runs[1:]):
        if b - a <= config.max_vowel_gap and bridgeable[a:b].all():
            vowel_cells[a:b] = True
    runs = _runs(vowel_cells)
    if not runs:
        raise NoVoicedFrames("no voiced frames after the consonant")
    v_start, v_end = max(runs, key=lambda r: (r[1] - r[0], -r[0]))

    t_start = c_end if c_end > 0 else v_start
    if c_end > 0:
        # the vowel is steady once the spectrum stops changing and the level
        # has finished ramping up
        level = config.steady_rms_ratio * np.median(f.rms[v_start:v_end])
        while v_start < v_end - 1 and (f.flux[v_start] > config.flux_threshold
                                       or f.rms[v_start] < level):
            v_start += 1

    tail_start = v_end
    for _ in range(2):
        ref = np.median(f.rms[v_start:tail_start])
        k = v_end
        while (k - 1 > v_start and f.rms[k - 1] < config.tail_rms_ratio * ref
               and f.highband[k - 1] < config.tail_highband_max):
            k -= 1
        tail_start = k
    tail_ms = (f.edges[v_end] - f.edges[tail_start]) * 1000.0 / f.sample_rate
    if tail_ms < config.min_tail_ms:
        tail_start = v_end

    def span(i, j):
        return (f.time(i), f.time(j)) if j > i else None

    return PhoneRegions(
        vowel=span(v_start, tail_start),
        consonant=span(0, c_end),
        transition=span(t_start, v_start) if c_end > 0 else None,
        coda_tail=span(tail_start, v_end),
    )
