"""Vision-to-audition sensory substitution toolkit.

Grayscale frames pass through a contrast-saliency filter, a 3x4 grid of
areas of interest, and a 12-voice binaural loop engine; a corridor
navigation simulator and trial analytics round out the package.
"""

from .saliency import (
    FilterConfig, GrayImage, NeuronStates, SalientMask,
    OPERATIONAL_PRESET, STRICT_PRESET, build_weight_table, filter_states, salient_mask,
)
from .grid import CellDirection, GridSpec, active_cells, cell_counts, cell_direction
from .pipeline import FrameTiming, PipelineConfig, process_frame, render_offline, run_stream
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "FilterConfig", "GrayImage", "NeuronStates", "SalientMask",
    "OPERATIONAL_PRESET", "STRICT_PRESET", "build_weight_table", "filter_states",
    "salient_mask", "CellDirection", "GridSpec", "active_cells", "cell_counts",
    "cell_direction", "FrameTiming", "PipelineConfig", "process_frame",
    "render_offline", "run_stream", "BACKEND", "__version__",
]
