"""Impact-rate measurement by envelope demodulation (DEMON).

Each domino collision is a short broadband click, so a collapse recording is
noise whose envelope is modulated at the impact rate. The analysis chain is
the crystal-set one: band-pass, full-wave rectify, low-pass, then look for
the strongest line in the spectrum of the envelope.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy import signal as sps

from ..errors import BandOutOfRange, TooShort
from ..geometry import normalize_speed
from .signal import SampledSignal

DEFAULT_BAND = (4.0, 100.0)


@dataclass(frozen=True)
class EnvelopeConfig:
    band: tuple[float, float] = (800.0, 3800.0)
    order: int = 4
    lowpass: float = 250.0
    rate: int = 2000
    min_duration: float = 0.5  # s


@dataclass(frozen=True, eq=False)
class Envelope:
    sample_rate: int
    values: np.ndarray

    @property
    def duration(self) -> float:
        return self.values.size / self.sample_rate

    def window(self, start: float, stop: float) -> "Envelope":
        i = int(round(start * self.sample_rate))
        j = int(round(stop * self.sample_rate))
        return Envelope(self.sample_rate, self.values[i:j])


@dataclass(frozen=True, eq=False)
class EnvelopeSpectrum:
    frequencies: np.ndarray
    magnitudes: np.ndarray
    resolution: float


@dataclass(frozen=True)
class RateEstimate:
    rate_hz: float
    snr_db: float
    reliable: bool
    trimmed_seconds: float = 0.0


def envelope(signal: SampledSignal, cfg: EnvelopeConfig = EnvelopeConfig()) -> Envelope:
    if signal.duration < cfg.min_duration:
        raise TooShort(f"need at least {cfg.min_duration} s of audio, got {signal.duration:.3f} s")
    fs = signal.sample_rate
    lo, hi = cfg.band
    if not 0 < lo < hi < fs / 2:
        raise ValueError(f"band-pass {cfg.band} Hz does not fit below Nyquist ({fs / 2} Hz)")
    band_sos = sps.butter(cfg.order, [lo, hi], btype="bandpass", fs=fs, output="sos")
    low_sos = sps.butter(cfg.order, cfg.lowpass, btype="lowpass", fs=fs, output="sos")

    x = sps.sosfiltfilt(band_sos, signal.samples)
    x = np.abs(x)
    x = sps.sosfiltfilt(low_sos, x)
    g = math.gcd(int(cfg.rate), fs)
    x = sps.resample_poly(x, cfg.rate // g, fs // g)
    return Envelope(cfg.rate, x - x.mean())


MIN_ENVELOPE_SAMPLES = 64


def modulation_spectrum(env: Envelope) -> EnvelopeSpectrum:
    """Hann-windowed magnitude spectrum, zero-padded to a power of two >= 4x the length."""
    n = env.values.size
    if n < MIN_ENVELOPE_SAMPLES:
        raise TooShort(f"envelope has {n} samples, need {MIN_ENVELOPE_SAMPLES}")
    nfft = 1 << int(math.ceil(math.log2(4 * n)))
    mags = np.abs(np.fft.rfft(env.values * np.hanning(n), nfft))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / env.sample_rate)
    return EnvelopeSpectrum(freqs, mags, env.sample_rate / nfft)


def _refine(mags: np.ndarray, k: int) -> float:
    """Fractional bin offset of the vertex of a parabola through log magnitudes."""
    if k <= 0 or k >= mags.size - 1:
        return 0.0
    a, b, c = mags[k - 1 : k + 2]
    if min(a, b, c) <= 0:
        a, b, c = float(a), float(b), float(c)
    else:
        a, b, c = np.log([a, b, c])
    denom = a - 2 * b + c
    if denom >= 0:
        return 0.0
    return float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))


def estimate_rate(
    spectrum: EnvelopeSpectrum,
    band: tuple[float, float] = DEFAULT_BAND,
    tie_db: float = 1.0,
    subharmonic_db: float = 6.0,
    min_snr_db: float = 6.0,
) -> RateEstimate:
    """Pick the impact rate as the strongest envelope line inside ``band``.

    Peaks within ``tie_db`` of the strongest count as ties and the lowest
    frequency wins, since an impact train puts near-equal energy into its
    harmonics. For the same reason a clear line at an integer fraction of the
    winning frequency (within ``subharmonic_db``) replaces it.
    """
    f, m = spectrum.frequencies, spectrum.magnitudes
    f_lo, f_hi = band
    if not (0 <= f_lo < f_hi <= f[-1]):
        raise BandOutOfRange(f"band {band} Hz outside the spectrum's 0..{f[-1]:.1f} Hz")
    idx = np.flatnonzero((f >= f_lo) & (f <= f_hi))
    if idx.size < 3:
        raise BandOutOfRange(f"band {band} Hz covers fewer than 3 bins")

    in_band = m[idx]
    peak = float(in_band.max())
    power = in_band**2
    median = float(np.median(power))
    snr_db = 10.0 * math.log10((peak**2 + np.finfo(float).tiny) / (median + np.finfo(float).tiny))

    left = np.concatenate(([-np.inf], m[idx[:-1]])) if idx[0] == 0 else m[idx - 1]
    right = m[idx + 1] if idx[-1] + 1 < m.size else np.concatenate((m[idx[1:]], [-np.inf]))
    is_local_max = (in_band >= left) & (in_band >= right)
    threshold = peak * 10.0 ** (-tie_db / 20.0)
    candidates = np.flatnonzero(is_local_max & (in_band >= threshold))
    k = int(idx[candidates[0]]) if candidates.size else int(idx[np.argmax(in_band)])

    # A line at f/n within subharmonic_db of the top is taken as the fundamental.
    sub_threshold = peak * 10.0 ** (-subharmonic_db / 20.0)
    n = 2
    while f[k] / n >= f_lo:
        target = f[k] / n
        near = np.abs(f[idx] - target) <= max(2 * spectrum.resolution, 0.01 * target)
        hits = np.flatnonzero(near & is_local_max & (in_band >= sub_threshold))
        if hits.size:
            k = int(idx[hits[np.argmax(in_band[hits])]])
            n = 2
            continue
        n += 1

    rate = float(f[k] + _refine(m, k) * spectrum.resolution)
    return RateEstimate(rate_hz=rate, snr_db=snr_db, reliable=bool(snr_db >= min_snr_db))


@dataclass(frozen=True, eq=False)
class TrimResult:
    signal: SampledSignal
    trimmed_seconds: float
    stable: bool
    fractions: tuple[float, ...]
    estimates: tuple[RateEstimate, ...]


TRIM_FRACTIONS = tuple(round(0.05 * i, 2) for i in range(11))


def trim_transient(
    signal: SampledSignal,
    band: tuple[float, float] = DEFAULT_BAND,
    cfg: EnvelopeConfig = EnvelopeConfig(),
    window_fraction: float = 0.1,
    min_window: float = 1.0,
    agreement: float = 0.02,
    settled_share: float = 0.75,
) -> TrimResult:
    """Discard the start of a recording until the impact rate settles.

    At each trim point 0%, 5%, ..., 50% the rate is estimated over a short
    window starting there. The chosen trim is the first one whose estimate
    agrees with the next two (each step within ``agreement``) and with at
    least ``settled_share`` of all later estimates; if none does, half the
    recording is dropped and the result is marked unstable.
    """
    duration = signal.duration
    if duration < 2.0:
        raise TooShort(f"transient trimming needs at least 2 s, got {duration:.3f} s")
    env = envelope(signal, cfg)
    width = max(window_fraction * duration, min_window)

    estimates = []
    for frac in TRIM_FRACTIONS:
        start = frac * duration
        piece = env.window(start, min(duration, start + width))
        estimates.append(estimate_rate(modulation_spectrum(piece), band))

    def agree(a: RateEstimate, b: RateEstimate) -> bool:
        return a.reliable and b.reliable and abs(a.rate_hz - b.rate_hz) <= agreement * b.rate_hz

    chosen, stable = TRIM_FRACTIONS[-1], False
    for i in range(len(estimates) - 2):
        if not (agree(estimates[i], estimates[i + 1]) and agree(estimates[i + 1], estimates[i + 2])):
            continue
        # a steady stretch that is itself the transient must not match what follows
        later = estimates[i:]
        matching = sum(agree(e, estimates[i]) for e in later)
        if matching >= settled_share * len(later):
            chosen, stable = TRIM_FRACTIONS[i], True
            break
    trimmed = chosen * duration
    return TrimResult(
        signal=signal.slice_seconds(trimmed),
        trimmed_seconds=trimmed,
        stable=stable,
        fractions=TRIM_FRACTIONS,
        estimates=tuple(estimates),
    )


def analyze_rate(
    signal: SampledSignal,
    band: tuple[float, float] = DEFAULT_BAND,
    cfg: EnvelopeConfig = EnvelopeConfig(),
) -> RateEstimate:
    """Trim the start-up transient, then estimate the impact rate on the remainder."""
    trim = trim_transient(signal, band, cfg)
    est = estimate_rate(modulation_spectrum(envelope(trim.signal, cfg)), band)
    return replace(est, reliable=est.reliable and trim.stable, trimmed_seconds=trim.trimmed_seconds)


@dataclass(frozen=True)
class Measurement:
    wave_speed: float
    normalized_speed: float
    estimate: RateEstimate

    def as_dict(self) -> dict:
        return {
            "rate_hz": self.estimate.rate_hz,
            "snr_db": self.estimate.snr_db,
            "reliable": self.estimate.reliable,
            "trimmed_seconds": self.estimate.trimmed_seconds,
            "wave_speed_mps": self.wave_speed,
            "normalized_speed": self.normalized_speed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        return "".join(
            f"{k}={str(v).lower() if isinstance(v, bool) else format(v, '.6g')}\n"
            for k, v in self.as_dict().items()
        )


def wave_speed_from_recording(
    signal: SampledSignal,
    pitch: float,
    height: float,
    band: tuple[float, float] = DEFAULT_BAND,
    cfg: EnvelopeConfig = EnvelopeConfig(),
) -> Measurement:
    """Wave speed = impact rate x pitch, plus its normalized value."""
    if not pitch > 0:
        raise ValueError(f"pitch must be positive, got {pitch!r}")
    est = analyze_rate(signal, band, cfg)
    speed = est.rate_hz * pitch
    return Measurement(speed, normalize_speed(speed, height), est)
