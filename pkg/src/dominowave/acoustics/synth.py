"""Synthetic domino-collapse recordings for closed-loop testing of the analyzer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import EmptyImpactList
from .signal import SampledSignal

PEAK_LEVEL = 0.9


@dataclass(frozen=True)
class SynthesisParams:
    click_duration: float = 0.005  # s
    click_decay: float = 600.0  # 1/s
    snr_db: float = math.inf
    noise_seed: int = 0
    tail: float = 0.05  # s of background after the last click

    def __post_init__(self):
        if not self.click_duration > 0:
            raise ValueError("click_duration must be positive")
        if self.click_decay < 0:
            raise ValueError("click_decay must be non-negative")


def synthesize_collapse(
    impact_times: Sequence[float],
    params: SynthesisParams = SynthesisParams(),
    sample_rate: int = 44100,
) -> SampledSignal:
    """Render each impact as a decaying burst of seeded white noise.

    Background noise is added at ``params.snr_db`` relative to the mean power
    over the burst supports, then the result is peak-normalized to 0.9.
    """
    times = np.asarray(impact_times, dtype=np.float64)
    if times.size == 0:
        raise EmptyImpactList("at least one impact time is required")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("impact times must be non-negative and strictly increasing")

    rng = np.random.default_rng(params.noise_seed)
    n_click = max(1, int(round(params.click_duration * sample_rate)))
    shape = np.exp(-params.click_decay * np.arange(n_click) / sample_rate)
    total = int(math.ceil((times[-1] + params.click_duration + params.tail) * sample_rate)) + 1

    x = np.zeros(total)
    support = np.zeros(total, dtype=bool)
    starts = np.round(times * sample_rate).astype(np.int64)
    bursts = rng.standard_normal((starts.size, n_click)) * shape
    for start, burst in zip(starts, bursts):
        stop = min(total, start + n_click)
        x[start:stop] += burst[: stop - start]
        support[start:stop] = True

    if math.isfinite(params.snr_db):
        signal_power = float(np.mean(x[support] ** 2))
        noise_std = math.sqrt(signal_power / 10.0 ** (params.snr_db / 10.0))
        x += noise_std * rng.standard_normal(total)

    peak = float(np.max(np.abs(x)))
    if peak > 0:
        x *= PEAK_LEVEL / peak
    return SampledSignal(sample_rate, x)
