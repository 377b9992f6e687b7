"""Contrast/texture saliency filter.

A network of neurons, one per pixel, connected to its 8 neighbours with
weights derived from absolute pixel differences. Neurons whose state
collapses to 0 sit in high-contrast or textured areas and are flagged as
salient.

Weights are quantized to 8 bits: entry[d] = 255 - d for a pixel difference
d. States are fixed point at scale 2**16 so results are platform
deterministic; for a single iteration an equivalent pure-integer rule is
used: pixel i is salient iff 255 + sum_j entry[|p_i - p_j|] <= floor(thresh * 9 * 255).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

MAX_LEVEL = 255
FP_SCALE = 1 << 16

# Marks almost nothing on natural images (requires near-maximal contrast
# against all 8 neighbours).
STRICT_THRESH = 0.112
# Default for the simulator and CLI: straight high-contrast edges fire.
OPERATIONAL_THRESH = 0.7


@dataclass(frozen=True)
class GrayImage:
    """8-bit single-channel frame; pixels is uint8 with shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 2 or p.size == 0:
            raise ValueError("image must be non-empty and 2-D")
        if p.dtype != np.uint8:
            if p.min() < 0 or p.max() > MAX_LEVEL:
                raise ValueError("pixel values must lie in [0, 255]")
            p = p.astype(np.uint8)
        object.__setattr__(self, "pixels", p)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class FilterConfig:
    thresh: float = STRICT_THRESH
    iterations: int = 1

    def __post_init__(self):
        if not 0.0 < self.thresh < 1.0:
            raise ValueError("thresh must lie in (0, 1)")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")

    @property
    def thresh_num(self) -> int:
        """Fixed-point threshold on the integer estimate T = 255*S + sum entry*S_j."""
        return math.floor(self.thresh * 9 * MAX_LEVEL * FP_SCALE)

    @property
    def thresh_sum(self) -> int:
        """Integer threshold of the single-iteration rule 255 + sum entry <= thresh_sum."""
        return math.floor(self.thresh * 9 * MAX_LEVEL)


STRICT_PRESET = FilterConfig(thresh=STRICT_THRESH, iterations=1)
OPERATIONAL_PRESET = FilterConfig(thresh=OPERATIONAL_THRESH, iterations=1)


@dataclass(frozen=True)
class NeuronStates:
    """Per-neuron states in [0, 1], stored fixed point at scale 2**16."""

    states_fp: np.ndarray
    scale: int = FP_SCALE

    def as_float(self) -> np.ndarray:
        return self.states_fp / self.scale

    @property
    def height(self) -> int:
        return self.states_fp.shape[0]

    @property
    def width(self) -> int:
        return self.states_fp.shape[1]


@dataclass(frozen=True)
class SalientMask:
    """Boolean per-pixel mask, True = salient."""

    flags: np.ndarray

    @property
    def height(self) -> int:
        return self.flags.shape[0]

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def count(self) -> int:
        return int(self.flags.sum())


def build_weight_table() -> np.ndarray:
    """8-bit quantization of f(x) = 1 - x/255: entry[d] = 255 - d."""
    return (MAX_LEVEL - np.arange(256)).astype(np.int64)


def filter_states(img: GrayImage, cfg: FilterConfig = STRICT_PRESET) -> NeuronStates:
    """Run the synchronous filter; all states start at 1.

    Each iteration estimates (own state + 8 weighted neighbour states) / 9
    from the previous iteration's states (edge neighbours replicated) and
    forces the state to 0 when the estimate is <= cfg.thresh.
    """
    states = kernels.filter_iterations(img.pixels, cfg.iterations, cfg.thresh_num)
    return NeuronStates(states_fp=states)


def salient_mask(img: GrayImage, cfg: FilterConfig = STRICT_PRESET) -> SalientMask:
    """Mask of pixels whose final state is exactly 0.

    iterations == 1 takes the pure-integer fast path, which agrees exactly
    with filter_states for any threshold.
    """
    if cfg.iterations == 1:
        sums = kernels.weight_sums(img.pixels)
        flags = (MAX_LEVEL + sums) <= cfg.thresh_sum
        return SalientMask(flags=flags)
    states = filter_states(img, cfg)
    return SalientMask(flags=states.states_fp == 0)
