"""3x4 grid over the saliency mask: per-cell counts, activations, directions."""

import math
from dataclasses import dataclass

import numpy as np

from .saliency import SalientMask

AZIMUTHS_DEG = (-90.0, -30.0, 30.0, 90.0)   # columns left -> right
ELEVATIONS_DEG = (45.0, 0.0, -40.0)          # rows top -> bottom
SOUND_CLASSES = ("birds", "trees", "waves")  # rows top -> bottom


@dataclass(frozen=True)
class GridSpec:
    image_width: int
    image_height: int
    rows: int = 3
    cols: int = 4
    activation_ratio: float = 0.01

    def __post_init__(self):
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one row and column")
        if not 0.0 < self.activation_ratio <= 1.0:
            raise ValueError("activation_ratio must lie in (0, 1]")

    def cell_rect(self, row: int, col: int) -> tuple[int, int, int, int]:
        """Pixel rectangle (x0, y0, x1, y1), half open; last row/col absorb remainders."""
        cw = self.image_width // self.cols
        ch = self.image_height // self.rows
        x0, y0 = col * cw, row * ch
        x1 = self.image_width if col == self.cols - 1 else x0 + cw
        y1 = self.image_height if row == self.rows - 1 else y0 + ch
        return x0, y0, x1, y1

    def cell_area(self, row: int, col: int) -> int:
        x0, y0, x1, y1 = self.cell_rect(row, col)
        return (x1 - x0) * (y1 - y0)

    def activation_threshold(self, row: int, col: int) -> int:
        return math.ceil(self.activation_ratio * self.cell_area(row, col))


@dataclass(frozen=True)
class CellDirection:
    azimuth: float
    elevation: float
    sound_class: str


def cell_counts(mask: SalientMask, grid: GridSpec) -> np.ndarray:
    """Salient-pixel count per cell, (rows, cols) int64."""
    if mask.width != grid.image_width or mask.height != grid.image_height:
        raise ValueError("mask dimensions do not match grid")
    counts = np.zeros((grid.rows, grid.cols), np.int64)
    for r in range(grid.rows):
        for c in range(grid.cols):
            x0, y0, x1, y1 = grid.cell_rect(r, c)
            counts[r, c] = mask.flags[y0:y1, x0:x1].sum()
    return counts


def active_cells(counts: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Boolean (rows, cols): count >= ceil(activation_ratio * cell area)."""
    flags = np.zeros((grid.rows, grid.cols), bool)
    for r in range(grid.rows):
        for c in range(grid.cols):
            flags[r, c] = counts[r, c] >= grid.activation_threshold(r, c)
    return flags


def cell_direction(row: int, col: int) -> CellDirection:
    """Fixed cell -> (azimuth, elevation, sound) mapping of the 3x4 grid.

    Image left (col 0) maps to the listener's left (-90 deg); image top
    (row 0) maps to elevation +45 and the birds sound.
    """
    if not (0 <= row < 3 and 0 <= col < 4):
        raise IndexError(f"cell ({row}, {col}) outside the 3x4 grid")
    return CellDirection(
        azimuth=AZIMUTHS_DEG[col],
        elevation=ELEVATIONS_DEG[row],
        sound_class=SOUND_CLASSES[row],
    )
