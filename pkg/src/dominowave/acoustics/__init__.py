"""Audio side: WAV I/O, synthetic recordings and impact-rate analysis."""

from .demon import (
    DEFAULT_BAND,
    Envelope,
    EnvelopeConfig,
    EnvelopeSpectrum,
    Measurement,
    RateEstimate,
    TrimResult,
    analyze_rate,
    envelope,
    estimate_rate,
    modulation_spectrum,
    trim_transient,
    wave_speed_from_recording,
)
from .signal import SampledSignal
from .synth import SynthesisParams, synthesize_collapse
from .wav import read_wav, to_pcm16, write_wav

__all__ = [
    "DEFAULT_BAND",
    "Envelope",
    "EnvelopeConfig",
    "EnvelopeSpectrum",
    "Measurement",
    "RateEstimate",
    "SampledSignal",
    "SynthesisParams",
    "TrimResult",
    "analyze_rate",
    "envelope",
    "estimate_rate",
    "modulation_spectrum",
    "read_wav",
    "synthesize_collapse",
    "to_pcm16",
    "trim_transient",
    "wave_speed_from_recording",
    "write_wav",
]
