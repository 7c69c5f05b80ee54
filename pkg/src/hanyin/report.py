"""Whole-file analysis, expectation checks and the text/binary output formats.

Report JSON layout (``"schema": 1``)::

    {"schema": 1,
     "file": {"path", "sample_rate", "duration"},
     "config": {every Config field},
     "syllables": [{"index", "span", "regions", "tone", "onset", "coda"}],
     "expectation": null | {"expected", "matched_count", "count_match",
                            "passed", "per_syllable": [...]}}
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from .classify import (CodaDecision, FricativeClass, ToneResult, VoicingDecision,
                       classify_fricative, classify_tone, detect_coda, detect_voicing)
from .config import DEFAULT, Config
from .dsp import AudioBuffer, PitchTrack, Spectrogram, load_wav, pitch_track, spectrum, stft
from .errors import (HanyinError, InvalidExpectedPinyin, PinyinError, SilentRegion,
                     SyllableAnalysisError)
from .pinyin import Coda, Syllable, parse_phrase
from .segment import PhoneRegions, SyllableSpan, detect_syllables, segment_syllable

SCHEMA = 1
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2


@dataclass(frozen=True)
class SyllableEntry:
    index: int
    span: SyllableSpan
    regions: PhoneRegions
    tone: ToneResult
    coda: CodaDecision
    voicing: VoicingDecision | None = None
    fricative: FricativeClass | None = None

    def to_dict(self) -> dict:
        onset = None
        if self.voicing is not None:
            onset = {"voicing": self.voicing.to_dict(),
                     "fricative": None if self.fricative is None else self.fricative.to_dict()}
        return {
            "index": self.index,
            "span": list(self.span.as_tuple()),
            "regions": self.regions.to_dict(),
            "tone": self.tone.to_dict(),
            "onset": onset,
            "coda": self.coda.to_dict(),
        }


@dataclass(frozen=True)
class ExpectationCheck:
    expected: list
    matched_count: int
    count_match: bool
    per_syllable: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.count_match and all(p["tone_match"] and p["coda_match"]
                                        for p in self.per_syllable)

    def to_dict(self) -> dict:
        return {
            "expected": [s.to_dict() for s in self.expected],
            "matched_count": self.matched_count,
            "count_match": self.count_match,
            "passed": self.passed,
            "per_syllable": [dict(p) for p in self.per_syllable],
        }


@dataclass(frozen=True)
class AnalysisReport:
    path: str
    sample_rate: int
    duration: float
    config: Config
    syllables: list
    expectation: ExpectationCheck | None = None

    @property
    def exit_code(self) -> int:
        if self.expectation is not None and not self.expectation.passed:
            return EXIT_MISMATCH
        return EXIT_OK

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "file": {"path": self.path, "sample_rate": self.sample_rate,
                     "duration": self.duration},
            "config": self.config.to_dict(),
            "syllables": [s.to_dict() for s in self.syllables],
            "expectation": None if self.expectation is None else self.expectation.to_dict(),
        }


def _largest_frame(n: int, cap: int) -> int | None:
    size = cap
    while size > n:
        size //= 2
    return size if size >= 64 else None


def _onset(buffer: AudioBuffer, span, config: Config):
    region = buffer.slice_seconds(*span)
    size = _largest_frame(len(region), config.window)
    if size is None:
        return None, None
    voicing = detect_voicing(region.samples, region.sample_rate, config)
    try:
        fricative = classify_fricative(spectrum(region, size), config)
    except SilentRegion:
        fricative = None
    return voicing, fricative


def _analyze_span(buffer: AudioBuffer, span: SyllableSpan, track: PitchTrack,
                  spec: Spectrogram, index: int, config: Config) -> SyllableEntry:
    regions = segment_syllable(buffer, span, config)
    end = (regions.coda_tail or regions.vowel)[1]
    tone = classify_tone(track.restrict(regions.vowel[0], end), config)
    voicing = fricative = None
    if regions.consonant is not None:
        voicing, fricative = _onset(buffer, regions.consonant, config)
    coda = detect_coda(regions, track, spec, config)
    return SyllableEntry(index, span, regions, tone, coda, voicing, fricative)


def check_expectation(expected: list, entries: list) -> ExpectationCheck:
    count_match = len(expected) == len(entries)
    per = []
    for syl, entry in zip(expected, entries):
        per.append({
            "tone_match": entry.tone.tone == syl.tone,
            "coda_match": entry.coda.present == (syl.coda != Coda.NONE),
            "count_match": count_match,
        })
    matched = sum(1 for p in per if p["tone_match"] and p["coda_match"])
    return ExpectationCheck(list(expected), matched, count_match, per)


def parse_expected(text: str) -> list:
    try:
        return parse_phrase(text)
    except PinyinError as exc:
        raise InvalidExpectedPinyin(str(exc)) from exc


def analyze_buffer(buffer: AudioBuffer, expected_pinyin: str | None = None,
                   config: Config = DEFAULT, path: str = "") -> AnalysisReport:
    expected = parse_expected(expected_pinyin) if expected_pinyin is not None else None
    spans = detect_syllables(buffer, config) if len(buffer) >= config.envelope_frame else []
    entries = []
    if spans:
        track = pitch_track(buffer, config.window, config.hop, config.f0_min, config.f0_max,
                            config.voicing_threshold, config.silence_rms)
        spec = stft(buffer, config.window, config.hop)
        for i, span in enumerate(spans):
            try:
                entries.append(_analyze_span(buffer, span, track, spec, i, config))
            except HanyinError as exc:
                raise SyllableAnalysisError(i, exc) from exc
    check = check_expectation(expected, entries) if expected is not None else None
    return AnalysisReport(str(path), buffer.sample_rate, buffer.duration, config,
                          entries, check)


def analyze(audio_path, expected_pinyin: str | None = None,
            config: Config = DEFAULT) -> AnalysisReport:
    """Load a WAV file and run the full pipeline on it."""
    return analyze_buffer(load_wav(audio_path), expected_pinyin, config, str(audio_path))


# ---- serialisation -------------------------------------------------------

def report_json(report: AnalysisReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


CSV_COLUMNS = ("index", "start", "end", "tone", "tone_confidence", "onset_voiced",
               "fricative", "coda_present", "tone_match", "coda_match")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def report_csv(report: AnalysisReport) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    per = report.expectation.per_syllable if report.expectation else []
    for e in report.syllables:
        match = per[e.index] if e.index < len(per) else {}
        row = (e.index, e.span.start, e.span.end, e.tone.tone, e.tone.confidence,
               None if e.voicing is None else e.voicing.voiced,
               None if e.fricative is None else e.fricative.kind,
               e.coda.present, match.get("tone_match"), match.get("coda_match"))
        out.write(",".join(_cell(v) for v in row) + "\n")
    return out.getvalue()


def export(report: AnalysisReport, fmt: str = "json") -> str:
    if fmt == "json":
        return report_json(report)
    if fmt == "csv":
        return report_csv(report)
    raise ValueError(f"unknown report format {fmt!r}")


def spectrogram_pgm(spec: Spectrogram, db_floor: float = -160.0) -> bytes:
    """Binary PGM: one row per frame, one column per bin, dB floor..0 -> 0..255."""
    scaled = (spec.magnitudes_db - db_floor) / (0.0 - db_floor) * 255.0
    pixels = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)
    rows, cols = pixels.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + pixels.tobytes()


def spectrogram_csv(spec: Spectrogram) -> str:
    out = io.StringIO()
    out.write("time,freq,db\n")
    for t, row in zip(spec.frame_times, spec.magnitudes_db):
        for f, db in zip(spec.bin_freqs, row):
            out.write(f"{t:.6f},{f:.3f},{db:.3f}\n")
    return out.getvalue()


def render_spectrogram(spec: Spectrogram, fmt: str = "pgm", db_floor: float = -160.0):
    if fmt == "pgm":
        return spectrogram_pgm(spec, db_floor)
    if fmt == "csv":
        return spectrogram_csv(spec)
    raise ValueError(f"unknown spectrogram format {fmt!r}")


def pitch_csv(track: PitchTrack) -> str:
    """``time,f0,confidence`` rows; the f0 field is empty for unvoiced frames."""
    out = io.StringIO()
    out.write("time,f0,confidence\n")
    for t, f0, c in zip(track.times, track.f0, track.confidence):
        f0_text = "" if np.isnan(f0) else f"{f0:.3f}"
        out.write(f"{t:.6f},{f0_text},{c:.4f}\n")
    return out.getvalue()


__all__ = [
    "SCHEMA", "EXIT_OK", "EXIT_ERROR", "EXIT_MISMATCH", "SyllableEntry", "ExpectationCheck",
    "AnalysisReport", "check_expectation", "parse_expected", "analyze_buffer", "analyze",
    "report_json", "report_csv", "export", "spectrogram_pgm", "spectrogram_csv",
    "render_spectrogram", "pitch_csv",
]
