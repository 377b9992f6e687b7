"""Looping sound sources: synthetic environmental loops and manifest loading.

The shipped bank is synthetic so tests carry no audio assets: one second of
band-limited noise per class (birds ~2 kHz, trees ~500 Hz, waves ~125 Hz),
built in the frequency domain so each loop is exactly periodic.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..wavio import read_wav

CENTER_HZ = {"birds": 2000.0, "trees": 500.0, "waves": 125.0}
_CLASS_SEED = {"birds": 11, "trees": 22, "waves": 33}


class SoundBankError(ValueError):
    pass


@dataclass(frozen=True)
class SoundLoop:
    samples: np.ndarray  # mono float in [-1, 1]
    sound_class: str
    loop_length: int

    def __post_init__(self):
        if self.loop_length < 1 or self.loop_length > len(self.samples):
            raise ValueError("loop_length must lie in [1, len(samples)]")


def synthetic_loop(sound_class: str, sample_rate: int = 44100,
                   seconds: float = 1.0, peak: float = 0.5) -> SoundLoop:
    """Seamless band-limited noise loop centred on the class frequency."""
    if sound_class not in CENTER_HZ:
        raise SoundBankError(f"unknown sound class: {sound_class!r}")
    n = int(round(sample_rate * seconds))
    fc = CENTER_HZ[sound_class]
    freqs = np.fft.rfftfreq(n, d=1.0 / sample_rate)
    sigma = max(fc / 4.0, 20.0)
    mag = np.exp(-0.5 * ((freqs - fc) / sigma) ** 2)
    mag[0] = 0.0
    rng = np.random.default_rng(_CLASS_SEED[sound_class])
    phases = rng.uniform(0.0, 2.0 * np.pi, len(freqs))
    spectrum = mag * np.exp(1j * phases)
    wave = np.fft.irfft(spectrum, n)
    wave *= peak / np.abs(wave).max()
    return SoundLoop(samples=wave, sound_class=sound_class, loop_length=n)


def default_sound_bank(sample_rate: int = 44100) -> dict:
    return {cls: synthetic_loop(cls, sample_rate) for cls in CENTER_HZ}


def load_sound_bank(manifest_path) -> dict:
    """Load loops from a manifest: `sound_class wav_path loop_length_samples`."""
    manifest = Path(manifest_path)
    if not manifest.is_file():
        raise SoundBankError(f"manifest not found: {manifest}")
    base = manifest.parent
    bank = {}
    for lineno, raw in enumerate(manifest.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise SoundBankError(f"{manifest}:{lineno}: expected 3 fields, got {len(parts)}")
        cls, path, loop_len = parts[0], parts[1], int(parts[2])
        if cls not in CENTER_HZ:
            raise SoundBankError(f"{manifest}:{lineno}: unknown sound class {cls!r}")
        data, _rate = read_wav(base / path)
        if data.ndim != 1:
            data = data.mean(axis=1)
        bank[cls] = SoundLoop(samples=data, sound_class=cls, loop_length=loop_len)
    missing = set(CENTER_HZ) - set(bank)
    if missing:
        raise SoundBankError(f"sound bank missing classes: {sorted(missing)}")
    return bank
