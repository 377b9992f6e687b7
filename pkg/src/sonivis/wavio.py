"""WAV helpers: 16-bit PCM output, float/int input via scipy."""

import wave

import numpy as np
from scipy.io import wavfile


def write_wav16(path, samples: np.ndarray, rate: int) -> None:
    """Write 16-bit little-endian integer PCM (RIFF format tag 1).

    samples: float array in [-1, 1], shape (N,) mono or (N, channels).
    """
    data = np.asarray(samples, np.float64)
    if data.ndim == 1:
        data = data[:, None]
    pcm = np.clip(np.round(data * 32767.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(pcm.shape[1])
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(pcm.tobytes())


def write_wav_float32(path, samples: np.ndarray, rate: int) -> None:
    """Write 32-bit float WAV (used for impulse-response files)."""
    data = np.asarray(samples, np.float32)
    wavfile.write(str(path), rate, data)


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file as float64 in [-1, 1]; returns (samples, rate).

    Shape is (N,) for mono, (N, channels) otherwise. Integer PCM is
    normalized by its full scale.
    """
    rate, data = wavfile.read(str(path))
    if data.dtype == np.int16:
        out = data / 32768.0
    elif data.dtype == np.int32:
        out = data / 2147483648.0
    elif data.dtype == np.uint8:
        out = (data.astype(np.float64) - 128.0) / 128.0
    else:
        out = data.astype(np.float64)
    return out, rate
