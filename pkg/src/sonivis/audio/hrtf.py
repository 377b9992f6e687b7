"""Stereo impulse responses: manifest loading, parametric fallback, convolution."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..grid import AZIMUTHS_DEG, ELEVATIONS_DEG
from ..wavio import read_wav

HEAD_RADIUS_M = 0.0875
SPEED_OF_SOUND = 343.0
MAX_ILD_DB = 6.0

DIRECTION_KEYS = tuple((az, el) for el in ELEVATIONS_DEG for az in AZIMUTHS_DEG)


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Hrir:
    left: np.ndarray
    right: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if len(self.left) != len(self.right) or len(self.left) < 1:
            raise ValueError("left/right impulse responses must have equal nonzero length")


@dataclass(frozen=True)
class HrirSet:
    """The 12 stereo filters, keyed by (azimuth, elevation) degrees."""

    filters: dict

    def __post_init__(self):
        missing = [k for k in DIRECTION_KEYS if k not in self.filters]
        if missing:
            raise ManifestError(f"missing impulse responses for directions: {missing}")
        rates = {h.sample_rate for h in self.filters.values()}
        if len(rates) != 1:
            raise ManifestError(f"mismatched sample rates in impulse-response set: {sorted(rates)}")

    @property
    def sample_rate(self) -> int:
        return next(iter(self.filters.values())).sample_rate

    def get(self, azimuth: float, elevation: float) -> Hrir:
        return self.filters[(azimuth, elevation)]


def fallback_hrir(azimuth: float, elevation: float, sample_rate: int) -> Hrir:
    """Parametric ITD/ILD pair encoding azimuth only.

    Contralateral ear: delayed by round(rate * 0.0875/343 * |sin az|)
    samples and attenuated to 10^(-(|az|/90) * 6/20) (6 dB at +-90).
    Ipsilateral ear: unit impulse. Elevation is carried by the sound type
    instead (poor elevation rendering with non-individual filters).
    """
    if not -90.0 <= azimuth <= 90.0:
        raise ValueError("azimuth must lie in [-90, 90]")
    az = np.radians(azimuth)
    delay = int(round(sample_rate * HEAD_RADIUS_M / SPEED_OF_SOUND * abs(np.sin(az))))
    gain = 10.0 ** (-(abs(azimuth) / 90.0) * MAX_ILD_DB / 20.0)
    near = np.zeros(delay + 1)
    near[0] = 1.0
    far = np.zeros(delay + 1)
    far[delay] = gain
    if azimuth < 0:  # source on the listener's left
        return Hrir(left=near, right=far, sample_rate=sample_rate)
    if azimuth > 0:
        return Hrir(left=far, right=near, sample_rate=sample_rate)
    return Hrir(left=near.copy(), right=near.copy(), sample_rate=sample_rate)


def fallback_hrir_set(sample_rate: int = 44100) -> HrirSet:
    return HrirSet(filters={
        (az, el): fallback_hrir(az, el, sample_rate) for az, el in DIRECTION_KEYS
    })


def load_hrir_set(manifest_path) -> HrirSet:
    """Load the 12 filters from a manifest.

    One line per direction: `azimuth elevation left.wav right.wav` or
    `azimuth elevation stereo.wav`; paths are relative to the manifest.
    Blank lines and lines starting with '#' are skipped.
    """
    manifest = Path(manifest_path)
    if not manifest.is_file():
        raise ManifestError(f"manifest not found: {manifest}")
    base = manifest.parent
    filters = {}
    for lineno, raw in enumerate(manifest.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise ManifestError(f"{manifest}:{lineno}: expected 3 or 4 fields, got {len(parts)}")
        az, el = float(parts[0]), float(parts[1])
        if len(parts) == 4:
            left, lrate = read_wav(base / parts[2])
            right, rrate = read_wav(base / parts[3])
            if left.ndim != 1 or right.ndim != 1:
                raise ManifestError(f"{manifest}:{lineno}: per-ear impulse files must be mono")
            if lrate != rrate:
                raise ManifestError(f"{manifest}:{lineno}: left/right sample rates differ")
            rate = lrate
        else:
            data, rate = read_wav(base / parts[2])
            if data.ndim != 2 or data.shape[1] != 2:
                raise ManifestError(f"{manifest}:{lineno}: expected a stereo impulse file")
            left, right = data[:, 0], data[:, 1]
        if len(left) != len(right):
            raise ManifestError(f"{manifest}:{lineno}: left/right lengths differ")
        filters[(az, el)] = Hrir(left=left, right=right, sample_rate=int(rate))
    return HrirSet(filters=filters)


def convolve_stereo(mono: np.ndarray, hrir: Hrir) -> np.ndarray:
    """Full linear convolution with each ear; returns (N + M - 1, 2)."""
    mono = np.asarray(mono, np.float64)
    return np.stack([np.convolve(mono, hrir.left), np.convolve(mono, hrir.right)], axis=1)
