from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_SAMPLE_RATE = 8000


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Mono audio samples scaled to ``[-1, 1]``."""

    sample_rate: int
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("a signal needs a non-empty 1-D sample array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if np.max(np.abs(samples)) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        if int(self.sample_rate) != self.sample_rate or self.sample_rate < MIN_SAMPLE_RATE:
            raise ValueError(f"sample rate must be an integer >= {MIN_SAMPLE_RATE} Hz")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def __len__(self):
        return self.samples.size

    def slice_seconds(self, start: float, stop: float | None = None) -> "SampledSignal":
        i = int(round(start * self.sample_rate))
        j = None if stop is None else int(round(stop * self.sample_rate))
        return SampledSignal(self.sample_rate, self.samples[i:j])
