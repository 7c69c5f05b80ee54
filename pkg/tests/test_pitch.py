import numpy as np
import pytest
from _signals import SR, brute_acf, pulse_train, sawtooth, sine, sine_hz, white_noise
from hypothesis import given, settings
from hypothesis import strategies as st

from hanyin.dsp import (AudioBuffer, EacCurve, enhanced_autocorrelation, estimate_f0_frame, hann,
                        pitch_track)
from hanyin.dsp.pitch import WINDOW_FLOOR
from hanyin.errors import BufferTooShort


def slow_eac(x: np.ndarray) -> np.ndarray:
    """Explicit-sum EAC: DFT of the 2N zero-padded Hann frame, cube-root
    power, cosine-sum inverse, lag-0 normalisation, division by the window's
    own curve, clip, subtract the 2x stretch, clip."""
    n = x.size
    m = 2 * n
    k = np.arange(m)

    def gacf(frame):
        padded = np.concatenate([frame, np.zeros(n)])
        basis = np.exp(-2j * np.pi * np.outer(k, k) / m)
        p = np.abs(basis @ padded) ** (2.0 / 3.0)
        r = np.cos(2 * np.pi * np.outer(k[:n], k) / m) @ p / m
        return r / r[0]

    w = hann(n)
    ref = gacf(w)
    r = gacf(x * w)
    r = np.where(ref >= WINDOW_FLOOR, r / np.where(ref >= WINDOW_FLOOR, ref, 1.0), 0.0)
    r = np.maximum(r, 0.0)
    stretched = np.interp(np.arange(n) / 2.0, np.arange(n), r)
    out = np.maximum(r - stretched, 0.0)
    out[0] = 1.0
    return out


def test_matches_explicit_sum_oracle():
    x = sawtooth(37, 256) + 0.3 * white_noise(256, seed=2)
    np.testing.assert_allclose(enhanced_autocorrelation(x).values, slow_eac(x), atol=1e-9)


def test_sine_peak_at_period():
    curve = enhanced_autocorrelation(sine(200, 2048))
    assert curve.values[0] == 1.0
    assert int(np.argmax(curve.values[1:])) + 1 == 200


def test_sawtooth_peak_agrees_with_time_domain_acf():
    x = sawtooth(300, 2048)
    lag = int(np.argmax(enhanced_autocorrelation(x).values[1:])) + 1
    oracle = int(np.argmax(brute_acf(x * hann(2048), 900)[90:])) + 90
    assert lag == oracle == 300


def test_white_noise_is_unvoiced():
    curve = enhanced_autocorrelation(white_noise(2048, seed=11))
    f0, conf = estimate_f0_frame(curve, SR)
    assert f0 is None and conf < 0.3


def test_zero_curve_and_zero_frame():
    assert estimate_f0_frame(EacCurve(np.arange(2048), np.zeros(2048)), SR) == (None, 0.0)
    assert not enhanced_autocorrelation(np.zeros(1024)).values.any()


def test_estimate_sine_200():
    f0, conf = estimate_f0_frame(enhanced_autocorrelation(sine(200, 2048)), SR)
    assert f0 == pytest.approx(220.5, rel=0.01)
    assert conf > 0.8


def test_quiet_frame_is_unvoiced():
    curve = enhanced_autocorrelation(sine(200, 2048, amp=0.0005))
    assert estimate_f0_frame(curve, SR)[0] is None


def test_frame_size_must_be_power_of_two():
    with pytest.raises(ValueError):
        enhanced_autocorrelation(np.zeros(1000))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([256, 512, 2048]))
def test_curve_invariants(seed, n):
    values = enhanced_autocorrelation(white_noise(n, seed=seed)).values
    assert values.shape == (n,)
    assert values[0] == 1.0
    assert np.all(values >= 0) and np.all(np.isfinite(values))


@settings(max_examples=40, deadline=None)
@given(st.integers(90, 559), st.sampled_from(["saw", "pulse"]))
def test_no_octave_errors(period, kind):
    gen = sawtooth if kind == "saw" else pulse_train
    f0, _ = estimate_f0_frame(enhanced_autocorrelation(gen(period, 2048)), SR)
    assert f0 is not None
    assert abs(SR / f0 - period) <= 1


@pytest.mark.parametrize("period, k", [(300, 0.5), (150, 2.0), (200, 2.0), (400, 0.5)])
def test_pitch_scaling(period, k):
    def lag(p):
        return SR / estimate_f0_frame(enhanced_autocorrelation(sawtooth(p, 4096)), SR)[0]
    assert lag(int(period * k)) / lag(period) == pytest.approx(k, rel=0.01)


def test_track_constant_tone():
    track = pitch_track(AudioBuffer(sine_hz(220, SR), SR))
    assert track.voiced.all()
    assert np.all(np.abs(track.f0 - 220) < 2)
    np.testing.assert_allclose(np.diff(track.times), 512 / SR)
    assert track.times[0] == pytest.approx(1024 / SR)


def test_track_glide():
    t = np.arange(SR) / SR
    freq = 150 + 100 * t
    x = 0.5 * np.sin(2 * np.pi * np.cumsum(freq) / SR)
    track = pitch_track(AudioBuffer(x, SR))
    assert track.voiced.all()
    assert np.all(np.diff(track.f0) > 0)
    truth = 150 + 100 * track.times
    assert abs(track.f0[0] / truth[0] - 1) < 0.05
    assert abs(track.f0[-1] / truth[-1] - 1) < 0.05


def test_track_silence():
    track = pitch_track(AudioBuffer(np.zeros(SR // 2), SR))
    assert not track.voiced.any()


def test_track_errors_and_restrict():
    with pytest.raises(BufferTooShort):
        pitch_track(AudioBuffer(np.zeros(1000), SR))
    track = pitch_track(AudioBuffer(sine_hz(200, SR), SR))
    part = track.restrict(0.2, 0.4)
    assert part.times.min() >= 0.2 and part.times.max() <= 0.4
    assert len(part) == part.f0.size == part.confidence.size


@settings(max_examples=15, deadline=None)
@given(st.floats(60, 450), st.floats(0.05, 0.9))
def test_track_respects_range(freq, amp):
    track = pitch_track(AudioBuffer(sine_hz(freq, 8192, amp=amp), SR), f0_min=80, f0_max=400)
    f0 = track.f0[track.voiced]
    assert np.all((f0 >= 80) & (f0 <= 400))
