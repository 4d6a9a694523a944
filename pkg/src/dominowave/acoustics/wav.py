"""16-bit PCM WAV reading and writing on top of the stdlib ``wave`` module."""

from __future__ import annotations

import io
import wave
from typing import BinaryIO

import numpy as np

from ..errors import MalformedContainer, RateTooLow, UnsupportedEncoding
from .signal import MIN_SAMPLE_RATE, SampledSignal

FULL_SCALE = 32768.0


def _open(source) -> BinaryIO:
    if isinstance(source, (bytes, bytearray, memoryview)):
        return io.BytesIO(bytes(source))
    return source


def read_wav(source) -> SampledSignal:
    """Read a mono or stereo PCM16 WAV from bytes, a path or a binary stream.

    Stereo channels are averaged.
    """
    try:
        with wave.open(_open(source), "rb") as wf:
            channels = wf.getnchannels()
            width = wf.getsampwidth()
            rate = wf.getframerate()
            frames = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        if str(exc).startswith("unknown format"):
            raise UnsupportedEncoding(f"only PCM is supported ({exc})") from exc
        raise MalformedContainer(str(exc)) from exc
    except EOFError as exc:
        raise MalformedContainer("truncated WAV container") from exc

    if width != 2:
        raise UnsupportedEncoding(f"only 16-bit PCM is supported, got {8 * width}-bit")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"only mono or stereo is supported, got {channels} channels")
    if rate < MIN_SAMPLE_RATE:
        raise RateTooLow(f"sample rate {rate} Hz is below {MIN_SAMPLE_RATE} Hz")
    data = np.frombuffer(frames, dtype="<i2")
    if data.size == 0 or data.size % channels:
        raise MalformedContainer("data chunk holds no complete frames")
    samples = data.reshape(-1, channels).astype(np.float64).mean(axis=1) / FULL_SCALE
    return SampledSignal(rate, samples)


def to_pcm16(samples) -> np.ndarray:
    """Clamp to [-1, 1], scale by 32768 and round half away from zero."""
    x = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0) * FULL_SCALE
    q = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(q, -32768, 32767).astype("<i2")


def write_wav(signal: SampledSignal, sink: BinaryIO | None = None) -> bytes:
    """Encode ``signal`` as a canonical 44-byte-header mono PCM16 WAV."""
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(signal.sample_rate)
        wf.writeframes(to_pcm16(signal.samples).tobytes())
    data = buf.getvalue()
    if sink is not None:
        sink.write(data)
    return data
