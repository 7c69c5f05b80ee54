import numpy as np
import pytest
from _signals import SR

from hanyin.dsp import AudioBuffer, band_energy, pitch_track, spectrum
from hanyin.errors import InvalidSpec
from hanyin.synth import (ONSETS, SyllableSynthSpec, synth_fricative, synth_syllable,
                          synth_tone_contour, synth_utterance, synth_voiced)


def test_contour_tone_1():
    t, f0 = synth_tone_contour(1, 200, 0.3)
    assert np.all(f0 == 250.0)
    assert t[1] - t[0] == pytest.approx(0.005)
    assert t[-1] == pytest.approx(0.3)


def test_contour_tone_4():
    _, f0 = synth_tone_contour(4, 200, 0.25)
    assert f0[0] == pytest.approx(300.0) and f0[-1] == pytest.approx(150.0)
    assert np.all(np.diff(f0) < 0)


def test_contour_tone_3_minimum():
    t, f0 = synth_tone_contour(3, 180, 0.35)
    i = int(np.argmin(f0))
    assert f0[i] == pytest.approx(129.6, abs=0.1)
    assert t[i] == pytest.approx(0.21, abs=0.005)
    assert f0[-1] == pytest.approx(198.0)


def test_contour_tone_2_and_5():
    _, f0 = synth_tone_contour(2, 200, 0.3)
    assert f0[0] == pytest.approx(200.0) and f0[-1] == pytest.approx(300.0)
    t, f0 = synth_tone_contour(5, 200, 0.4)
    assert t[-1] == pytest.approx(0.1) and np.all(f0 == 200.0)
    with pytest.raises(InvalidSpec):
        synth_tone_contour(6, 200, 0.3)


def test_voiced_round_trip_220():
    buf = synth_voiced(220.0, 0.5)
    track = pitch_track(buf)
    assert np.all(np.abs(track.f0[1:-1] - 220.0) < 2.0)
    assert np.max(np.abs(buf.samples)) == pytest.approx(0.7)


def test_voiced_tone_2_rises():
    buf = synth_voiced(synth_tone_contour(2, 150, 0.4), 0.4)
    f0 = pitch_track(buf).f0
    assert not np.isnan(f0).any()
    assert np.all(np.diff(f0) > 0)


def test_voiced_has_formant_peaks():
    s = spectrum(synth_voiced(100.0, 0.5), 4096)
    db = s.magnitudes_db
    near = lambda f: db[int(round(f * 4096 / SR))]  # noqa: E731
    assert near(700) > near(2500) + 10 and near(1200) > near(3500) + 10


def test_voiced_amplitude_zero_is_silence():
    assert not synth_voiced(200.0, 0.1, amplitude=0.0).samples.any()
    with pytest.raises(InvalidSpec):
        synth_voiced(0.0, 0.1)


@pytest.mark.parametrize("kind, lo, hi", [("sh_like", 2000, 8000), ("s_like", 8000, SR / 2)])
def test_fricative_band(kind, lo, hi):
    buf = synth_fricative(kind, 0.2, seed=4)
    assert band_energy(spectrum(buf, 2048), lo, hi) > 0.9
    # direct summation over the whole token
    p = np.abs(np.fft.rfft(buf.samples)) ** 2
    f = np.fft.rfftfreq(len(buf), 1 / SR)
    assert p[(f >= lo) & (f <= hi)].sum() / p.sum() > 0.9


def test_fricative_determinism_and_empty():
    a = synth_fricative("sh_like", 0.05, seed=9).samples
    assert np.array_equal(a, synth_fricative("sh_like", 0.05, seed=9).samples)
    assert not np.array_equal(a, synth_fricative("sh_like", 0.05, seed=10).samples)
    assert len(synth_fricative("s_like", 0.0)) == 0
    with pytest.raises(InvalidSpec):
        synth_fricative("f_like", 0.1)


@pytest.mark.parametrize("onset", ONSETS)
def test_syllable_truth_layout(onset):
    spec = SyllableSynthSpec(tone=2, onset=onset, nasal_tail=True, seed=1)
    buf, truth = synth_syllable(spec)
    regions = [truth[k] for k in ("consonant", "transition", "vowel", "coda_tail")]
    present = [r for r in regions if r is not None]
    assert present[0][0] == 0.0
    assert present[-1][1] == pytest.approx(truth["duration"]) == pytest.approx(buf.duration)
    for a, b in zip(present, present[1:]):
        assert a[1] == b[0]
    assert (truth["consonant"] is None) == (onset == "none")
    assert truth["vowel"][1] - truth["vowel"][0] == pytest.approx(0.25, abs=1 / SR)
    assert np.max(np.abs(buf.samples)) <= 1.0


def test_pure_vowel_token():
    _, truth = synth_syllable(SyllableSynthSpec(onset="none", nasal_tail=False))
    assert truth["consonant"] is None and truth["transition"] is None
    assert truth["coda_tail"] is None and truth["vowel"][0] == 0.0


def test_neutral_tone_is_short():
    _, truth = synth_syllable(SyllableSynthSpec(tone=5, vowel_ms=300))
    assert truth["vowel"][1] - truth["vowel"][0] == pytest.approx(0.1, abs=1 / SR)


def test_syllable_determinism():
    spec = SyllableSynthSpec(tone=3, onset="sh_like", nasal_tail=True, seed=12)
    assert np.array_equal(synth_syllable(spec)[0].samples, synth_syllable(spec)[0].samples)


def test_tail_is_quieter_and_dark():
    buf, truth = synth_syllable(SyllableSynthSpec(tone=1, nasal_tail=True))
    x = buf.samples
    v0, v1 = (int(round(t * SR)) for t in truth["vowel"])
    c0, c1 = (int(round(t * SR)) for t in truth["coda_tail"])
    rms = lambda y: np.sqrt(np.mean(y * y))  # noqa: E731
    assert rms(x[c0 + 500:c1 - 500]) < 0.5 * rms(x[v0 + 500:v1 - 500])
    tail = AudioBuffer(x[c0:c0 + 4096], SR)
    assert band_energy(spectrum(tail, 2048), 2000, 8000) < 0.01


@pytest.mark.parametrize("bad", [
    dict(tone=0), dict(base_f0=50), dict(onset="x"), dict(vowel_ms=0), dict(tail_ms=-1),
    dict(amplitude=1.5), dict(onset_gain=-0.1),
])
def test_invalid_specs(bad):
    with pytest.raises(InvalidSpec):
        synth_syllable(SyllableSynthSpec(**bad))


def test_spec_dict_round_trip():
    spec = SyllableSynthSpec(tone=4, onset="lateral", seed=3)
    assert SyllableSynthSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(InvalidSpec):
        SyllableSynthSpec.from_dict({"tone": 1, "pitch": 3})


def test_utterance_layout():
    specs = [SyllableSynthSpec(tone=t, seed=t) for t in (1, 2, 3)]
    buf, truths = synth_utterance(specs, 100.0)
    for a, b in zip(truths, truths[1:]):
        assert b["span"][0] - a["span"][1] == pytest.approx(0.1, abs=1 / SR)
    assert truths[-1]["span"][1] == pytest.approx(buf.duration)
    assert [t["tone"] for t in truths] == [1, 2, 3]
    for t in truths:
        assert t["span"][0] <= t["vowel"][0] < t["vowel"][1] <= t["span"][1]


def test_utterance_per_gap_durations():
    specs = [SyllableSynthSpec(seed=i) for i in range(3)]
    _, truths = synth_utterance(specs, [80.0, 150.0])
    gaps = [b["span"][0] - a["span"][1] for a, b in zip(truths, truths[1:])]
    assert gaps == pytest.approx([0.08, 0.15], abs=1 / SR)
    with pytest.raises(InvalidSpec):
        synth_utterance(specs, -5.0)


def test_empty_utterance():
    buf, truths = synth_utterance([], 100.0)
    assert len(buf) == 0 and truths == []
