"""RIFF/WAVE reading and writing (PCM16 and IEEE float32, mono or stereo)."""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..errors import MalformedHeader, UnsupportedFormat

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE
MIN_SAMPLE_RATE = 8000


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono samples in [-1, 1] at ``sample_rate`` Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("AudioBuffer holds mono samples only")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if samples.size and np.max(np.abs(samples)) > 1.0:
            raise ValueError("samples must lie within [-1, 1]")
        if int(self.sample_rate) != self.sample_rate or self.sample_rate < MIN_SAMPLE_RATE:
            raise ValueError(f"sample_rate must be an integer >= {MIN_SAMPLE_RATE}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def slice_seconds(self, start: float, end: float) -> "AudioBuffer":
        a = max(0, int(round(start * self.sample_rate)))
        b = min(self.samples.size, int(round(end * self.sample_rate)))
        return AudioBuffer(self.samples[a:b], self.sample_rate)


def _chunks(data: bytes):
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8: pos + 8 + size]
        yield cid, body, len(body) == size
        pos += 8 + size + (size & 1)
    if pos < len(data):
        raise MalformedHeader("truncated chunk header")


def decode_wav(data: bytes) -> AudioBuffer:
    if len(data) < 12:
        raise MalformedHeader("file shorter than the RIFF header")
    riff, _, wave = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF" or wave != b"WAVE":
        raise MalformedHeader("not a RIFF/WAVE file")

    fmt = None
    pcm = None
    for cid, body, complete in _chunks(data):
        if cid == b"fmt ":
            if not complete or len(body) < 16:
                raise MalformedHeader("truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
            tag = fmt[0]
            if tag == WAVE_FORMAT_EXTENSIBLE:
                if len(body) < 40:
                    raise MalformedHeader("truncated WAVE_FORMAT_EXTENSIBLE fmt chunk")
                tag = struct.unpack_from("<H", body, 24)[0]
            fmt = (tag,) + fmt[1:]
        elif cid == b"data":
            if fmt is None:
                raise MalformedHeader("data chunk precedes fmt chunk")
            # a short data chunk is tolerated (common from interrupted writers)
            pcm = body
            break
    if fmt is None:
        raise MalformedHeader("missing fmt chunk")
    if pcm is None:
        raise MalformedHeader("missing data chunk")

    tag, channels, rate, _, block_align, bits = fmt
    if channels not in (1, 2):
        raise UnsupportedFormat(f"{channels} channels")
    if tag == WAVE_FORMAT_PCM and bits == 16:
        dtype = np.dtype("<i2")
        scale = 1.0 / 32768.0
    elif tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        dtype = np.dtype("<f4")
        scale = 1.0
    else:
        raise UnsupportedFormat(f"format tag {tag:#06x} with {bits} bits per sample")
    if block_align != channels * dtype.itemsize:
        raise MalformedHeader("block_align disagrees with channels and sample width")
    if rate < MIN_SAMPLE_RATE:
        raise UnsupportedFormat(f"sample rate {rate} Hz is below {MIN_SAMPLE_RATE}")

    nframes = len(pcm) // block_align
    raw = np.frombuffer(pcm, dtype=dtype, count=nframes * channels)
    samples = raw.astype(np.float64).reshape(nframes, channels) * scale
    samples = samples.mean(axis=1)
    if dtype.kind == "f":
        if not np.all(np.isfinite(samples)):
            raise UnsupportedFormat("float samples contain NaN or infinity")
        samples = np.clip(samples, -1.0, 1.0)
    return AudioBuffer(samples, rate)


def load_wav(path) -> AudioBuffer:
    """Read a RIFF/WAVE file. ``OSError`` propagates for unreadable paths."""
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_wav(data)


def encode_wav(buffer: AudioBuffer, float32: bool = False) -> bytes:
    if float32:
        pcm = buffer.samples.astype("<f4").tobytes()
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32
    else:
        ints = np.clip(np.round(buffer.samples * 32768.0), -32768, 32767)
        pcm = ints.astype("<i2").tobytes()
        tag, bits = WAVE_FORMAT_PCM, 16
    block_align = bits // 8
    fmt = struct.pack("<HHIIHH", tag, 1, buffer.sample_rate,
                      buffer.sample_rate * block_align, block_align, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(pcm)) + pcm
    if len(pcm) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


def write_wav(path, buffer: AudioBuffer, float32: bool = False) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_wav(buffer, float32=float32))
