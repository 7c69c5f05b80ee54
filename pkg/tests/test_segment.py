import numpy as np
import pytest
from _signals import SR, sine_hz, white_noise
from hypothesis import given, settings
from hypothesis import strategies as st

from hanyin.config import Config
from hanyin.dsp import AudioBuffer
from hanyin.errors import BufferTooShort, NoVoicedFrames
from hanyin.segment import (PhoneRegions, SyllableSpan, detect_syllables, frame_features,
                            segment_syllable)
from hanyin.synth import SyllableSynthSpec, synth_syllable, synth_utterance

HOP_S = 512 / SR
REGIONS = ("consonant", "transition", "vowel", "coda_tail")
SHENG = SyllableSynthSpec(tone=1, base_f0=180, onset="sh_like", onset_ms=80, transition_ms=40,
                          vowel_ms=200, tail_ms=100, nasal_tail=True, seed=3)


def boundary_error(found, truth):
    return max(abs(found[0] - truth[0]), abs(found[1] - truth[1]))


def assert_ordered(regions: PhoneRegions):
    spans = [s for _, s in regions.ordered()]
    assert regions.vowel is not None and regions.vowel[1] > regions.vowel[0]
    for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
        assert a0 < a1 == b0 < b1


def test_five_syllables_with_gaps():
    specs = [SyllableSynthSpec(tone=t, seed=i) for i, t in enumerate([2, 3, 2, 4, 2])]
    buf, truth = synth_utterance(specs, 100.0)
    spans = detect_syllables(buf)
    assert len(spans) == 5
    for span, t in zip(spans, truth):
        assert boundary_error(span.as_tuple(), t["span"]) <= 0.025


def test_silence_and_short_buffers():
    assert detect_syllables(AudioBuffer(np.zeros(SR), SR)) == []
    with pytest.raises(BufferTooShort):
        detect_syllables(AudioBuffer(np.zeros(100), SR))


def test_continuous_tone_is_one_span():
    spans = detect_syllables(AudioBuffer(sine_hz(200, SR), SR))
    assert len(spans) == 1
    # the ragged final envelope frame is dropped
    assert spans[0].start == 0.0 and 1.0 - spans[0].end < 512 / SR


def test_short_blips_are_dropped():
    x = np.zeros(SR)
    x[10000:10000 + 1024] = sine_hz(300, 1024)
    assert detect_syllables(AudioBuffer(x, SR)) == []


def test_span_validation():
    with pytest.raises(ValueError):
        SyllableSpan(0.5, 0.5)
    with pytest.raises(ValueError):
        SyllableSpan(-0.1, 0.2)


def test_sheng_analog_regions():
    buf, truth = synth_syllable(SHENG)
    (span,) = detect_syllables(buf)
    regions = segment_syllable(buf, span)
    assert_ordered(regions)
    assert [name for name, _ in regions.ordered()] == list(REGIONS)
    for name in REGIONS:
        assert boundary_error(getattr(regions, name), truth[name]) <= 0.025, name


def test_pure_vowel():
    buf, truth = synth_syllable(SyllableSynthSpec(tone=1, vowel_ms=300))
    (span,) = detect_syllables(buf)
    regions = segment_syllable(buf, span)
    assert regions.consonant is None and regions.transition is None
    assert regions.coda_tail is None
    assert boundary_error(regions.vowel, truth["vowel"]) <= 0.025


def test_noise_has_no_vowel():
    buf = AudioBuffer(white_noise(SR // 4, seed=2), SR)
    with pytest.raises(NoVoicedFrames):
        segment_syllable(buf, SyllableSpan(0.0, 0.25))


def test_region_dict():
    buf, _ = synth_syllable(SHENG)
    d = segment_syllable(buf, detect_syllables(buf)[0]).to_dict()
    assert list(d) == list(REGIONS)
    assert all(isinstance(v, list) and len(v) == 2 for v in d.values())


def test_features_cover_the_span():
    buf, _ = synth_syllable(SHENG)
    span = detect_syllables(buf)[0]
    f = frame_features(buf, span)
    assert f.edges[0] == round(span.start * SR) and f.edges[-1] == round(span.end * SR)
    assert np.all(np.diff(f.edges) > 0)
    for arr in (f.rms, f.confidence, f.highband, f.lowband, f.flux):
        assert arr.shape == (f.edges.size - 1,)
    assert np.all(f.highband + f.lowband <= 1 + 1e-12)


@pytest.mark.parametrize("spec", [
    SHENG,
    SyllableSynthSpec(tone=4, onset="s_like", seed=5),
    SyllableSynthSpec(tone=2, onset="unvoiced_stop", nasal_tail=True, seed=8),
])
def test_idempotent_on_sub_buffer(spec):
    buf, _ = synth_syllable(spec)
    pad = np.zeros(SR // 10)
    full = AudioBuffer(np.concatenate([pad, buf.samples, pad]), SR)
    (span,) = detect_syllables(full)
    first = segment_syllable(full, span)
    a, b = round(span.start * SR), round(span.end * SR)
    sub = AudioBuffer(full.samples[a:b], SR)
    second = segment_syllable(sub, detect_syllables(sub)[0])
    assert [n for n, _ in first.ordered()] == [n for n, _ in second.ordered()]
    for (_, r1), (_, r2) in zip(first.ordered(), second.ordered()):
        assert abs(r1[0] - span.start - r2[0]) <= HOP_S + 1e-9
        assert abs(r1[1] - span.start - r2[1]) <= HOP_S + 1e-9


def test_half_amplitude_moves_spans_by_at_most_one_hop():
    specs = [SyllableSynthSpec(tone=t, onset=o, seed=i)
             for i, (t, o) in enumerate([(1, "sh_like"), (4, "none"), (2, "s_like")])]
    buf, _ = synth_utterance(specs, 120.0)
    half = AudioBuffer(buf.samples * 0.5, SR)
    a, b = detect_syllables(buf), detect_syllables(half)
    assert len(a) == len(b) == 3
    for s, t in zip(a, b):
        assert abs(s.start - t.start) <= HOP_S and abs(s.end - t.end) <= HOP_S


def test_thresholds_come_from_config():
    buf, _ = synth_utterance([SyllableSynthSpec(seed=1), SyllableSynthSpec(seed=2)], 100.0)
    assert len(detect_syllables(buf)) == 2
    # a minimum gap longer than the real pause merges the two syllables
    assert len(detect_syllables(buf, Config(min_gap_ms=200.0))) == 1


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 5), st.sampled_from(["none", "s_like", "sh_like"])),
                min_size=1, max_size=4),
       st.floats(80, 150), st.integers(0, 1000))
def test_span_and_region_invariants(sylls, gap, seed):
    specs = [SyllableSynthSpec(tone=t, onset=o, seed=seed + i) for i, (t, o) in enumerate(sylls)]
    buf, _ = synth_utterance(specs, gap)
    spans = detect_syllables(buf)
    assert len(spans) == len(specs)
    for s, t in zip(spans, spans[1:]):
        assert s.end < t.start
    assert all(0 <= s.start < s.end <= buf.duration for s in spans)
    for s in spans:
        assert_ordered(segment_syllable(buf, s))
