"""Audio ingestion, spectral analysis and EAC pitch estimation."""
from .pitch import (
    F0_MAX, F0_MIN, SILENCE_RMS, VOICING_THRESHOLD, EacCurve, PitchTrack,
    enhanced_autocorrelation, estimate_f0_frame, frame_confidence, pitch_track,
)
from .spectral import (
    DB_FLOOR, Spectrogram, Spectrum, band_energy, frame_count, frames, hann,
    power_spectrum, rms_envelope, spectrum, stft,
)
from .wav import AudioBuffer, decode_wav, encode_wav, load_wav, write_wav

__all__ = [
    "AudioBuffer", "DB_FLOOR", "EacCurve", "F0_MAX", "F0_MIN", "PitchTrack",
    "SILENCE_RMS", "Spectrogram", "Spectrum", "VOICING_THRESHOLD", "band_energy",
    "decode_wav", "encode_wav", "enhanced_autocorrelation", "estimate_f0_frame",
    "frame_confidence", "frame_count", "frames", "hann", "load_wav", "pitch_track",
    "power_spectrum", "rms_envelope", "spectrum", "stft", "write_wav",
]
