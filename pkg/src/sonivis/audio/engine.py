"""The 12-voice looping playback engine.

One voice per grid cell; an activation update starts (loop phase 0) or
stops each voice, taking effect at the next rendered block. Each voice is
spatialized by streaming its loop through the per-ear FIR taps of its
cell's impulse response; the FIR keeps a mono input history so rendering
k blocks of size B is sample-exact against one block of size k*B. A
stopped voice flushes its FIR tail (at most taps-1 samples) and then goes
fully silent.

Real-time contract: render_block takes no locks; activation snapshots are
handed over by a single atomic reference swap in update_voices.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..grid import cell_direction
from .hrtf import HrirSet, fallback_hrir_set
from .loops import default_sound_bank

DEFAULT_RATE = 44100
DEFAULT_BLOCK = 1024
# Headroom preset: 12 simultaneous voices sum to unity.
HEADROOM_GAIN = 1.0 / 12.0


@dataclass
class _Voice:
    loop: np.ndarray
    taps_left: np.ndarray
    taps_right: np.ndarray
    playing: bool = False
    pos: int = 0
    hist: np.ndarray = field(default_factory=lambda: np.zeros(0))
    flush: int = 0

    @property
    def hist_len(self) -> int:
        return max(len(self.taps_left), len(self.taps_right)) - 1


class VoiceEngine:
    def __init__(self, hrir_set: HrirSet | None = None, sound_bank: dict | None = None,
                 sample_rate: int = DEFAULT_RATE, block_size: int = DEFAULT_BLOCK,
                 master_gain: float = 1.0, rows: int = 3, cols: int = 4):
        if not 0.0 <= master_gain <= 1.0:
            raise ValueError("master_gain must lie in [0, 1]")
        self.sample_rate = sample_rate
        self.block_size = block_size
        self.master_gain = master_gain
        self.rows, self.cols = rows, cols
        hrir_set = hrir_set or fallback_hrir_set(sample_rate)
        if hrir_set.sample_rate != sample_rate:
            raise ValueError("impulse-response sample rate does not match the engine rate")
        bank = sound_bank or default_sound_bank(sample_rate)
        self.voices: list[_Voice] = []
        for r in range(rows):
            for c in range(cols):
                d = cell_direction(r, c)
                h = hrir_set.get(d.azimuth, d.elevation)
                loop = np.asarray(bank[d.sound_class].samples, np.float64)
                loop = loop[: bank[d.sound_class].loop_length]
                v = _Voice(loop=loop,
                           taps_left=np.asarray(h.left, np.float64),
                           taps_right=np.asarray(h.right, np.float64))
                v.hist = np.zeros(v.hist_len)
                self.voices.append(v)

    @property
    def playing_flags(self) -> list[bool]:
        return [v.playing for v in self.voices]

    def update_voices(self, activations) -> "VoiceEngine":
        """Apply a cell-activation snapshot (row-major flags, shape (rows, cols) or flat)."""
        flags = np.asarray(activations, bool).reshape(-1)
        if len(flags) != len(self.voices):
            raise ValueError("activation count does not match voice count")
        for v, active in zip(self.voices, flags):
            if active and not v.playing:
                v.playing = True
                v.pos = 0
                v.flush = 0
            elif not active and v.playing:
                v.playing = False
                v.pos = 0
                v.flush = v.hist_len
        return self

    def render_block(self, frames: int | None = None, clip: bool = True) -> np.ndarray:
        """Render (frames, 2) float64; sum of voices, master gain, hard clip."""
        n = self.block_size if frames is None else frames
        if n < 1:
            raise ValueError("frames must be >= 1")
        out = np.zeros((n, 2))
        for v in self.voices:
            if not v.playing and v.flush == 0:
                continue
            if v.playing:
                idx = (v.pos + np.arange(n)) % len(v.loop)
                x = v.loop[idx]
                v.pos = int((v.pos + n) % len(v.loop))
            else:
                x = np.zeros(n)
                v.flush = max(0, v.flush - n)
            h = v.hist_len
            xext = np.concatenate([v.hist, x]) if h else x
            ml, mr = len(v.taps_left), len(v.taps_right)
            out[:, 0] += kernels.fir_block(xext[h - (ml - 1):], v.taps_left)
            out[:, 1] += kernels.fir_block(xext[h - (mr - 1):], v.taps_right)
            if h:
                v.hist = xext[-h:].copy()
        out *= self.master_gain
        if clip:
            np.clip(out, -1.0, 1.0, out=out)
        return out
