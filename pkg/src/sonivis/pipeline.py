"""Frame -> mask -> activations -> audio orchestration.

Offline rendering consumes exactly one frame per audio block, holding the
last frame, so output is reproducible byte for byte. The live stream runs
frame processing on its own thread and publishes activation snapshots that
the audio loop picks up without blocking; when frames lag, audio keeps
rendering from the last snapshot.
"""

import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .audio import VoiceEngine
from .grid import GridSpec, active_cells, cell_counts
from .saliency import OPERATIONAL_PRESET, FilterConfig, GrayImage, salient_mask

DEFAULT_BUDGET_MS = 45.0


@dataclass(frozen=True)
class PipelineConfig:
    filter: FilterConfig = OPERATIONAL_PRESET
    grid: GridSpec = field(default_factory=lambda: GridSpec(192, 144))
    sample_rate: int = 44100
    block_size: int = 1024
    budget_ms: float = DEFAULT_BUDGET_MS

    def __post_init__(self):
        if self.budget_ms <= 0:
            raise ValueError("frame budget must be positive")


@dataclass
class FrameTiming:
    filter_ms: float
    grid_ms: float
    total_ms: float


@dataclass
class TimingStats:
    count: int = 0
    total_ms_sum: float = 0.0
    total_ms_max: float = 0.0
    budget_violations: int = 0

    def add(self, timing: FrameTiming, budget_ms: float):
        self.count += 1
        self.total_ms_sum += timing.total_ms
        self.total_ms_max = max(self.total_ms_max, timing.total_ms)
        if timing.total_ms > budget_ms:
            self.budget_violations += 1

    @property
    def mean_ms(self) -> float:
        return self.total_ms_sum / self.count if self.count else 0.0


def process_frame(img: GrayImage, cfg: PipelineConfig) -> tuple[np.ndarray, FrameTiming]:
    """Run one frame through mask -> counts -> activations, with timings."""
    if img.width != cfg.grid.image_width or img.height != cfg.grid.image_height:
        raise ValueError("frame dimensions do not match the grid")
    t0 = time.perf_counter()
    mask = salient_mask(img, cfg.filter)
    t1 = time.perf_counter()
    counts = cell_counts(mask, cfg.grid)
    activations = active_cells(counts, cfg.grid)
    t2 = time.perf_counter()
    timing = FrameTiming(
        filter_ms=(t1 - t0) * 1e3,
        grid_ms=(t2 - t1) * 1e3,
        total_ms=(t2 - t0) * 1e3,
    )
    return activations, timing


def render_offline(frames, cfg: PipelineConfig, blocks: int,
                   engine: VoiceEngine | None = None) -> np.ndarray:
    """Deterministic offline render: one frame per block, last frame held.

    frames: sequence of GrayImage (at least one). Returns interleaved
    stereo float64 of shape (blocks * block_size, 2).
    """
    frames = list(frames)
    if not frames:
        raise ValueError("at least one frame required")
    engine = engine or VoiceEngine(sample_rate=cfg.sample_rate, block_size=cfg.block_size)
    out = np.zeros((blocks * cfg.block_size, 2))
    for i in range(blocks):
        img = frames[min(i, len(frames) - 1)]
        activations, _ = process_frame(img, cfg)
        engine.update_voices(activations)
        out[i * cfg.block_size : (i + 1) * cfg.block_size] = engine.render_block()
    return out


@dataclass
class StreamSummary:
    frames: int = 0
    blocks: int = 0
    timing: TimingStats = field(default_factory=TimingStats)
    error: str | None = None


def run_stream(frame_source, audio_sink, cfg: PipelineConfig,
               engine: VoiceEngine | None = None, realtime: bool = False) -> StreamSummary:
    """Run frame processing and audio rendering concurrently.

    frame_source: iterable of GrayImage; audio_sink: callable receiving
    (block_size, 2) float blocks. Frames are processed on a worker thread
    publishing activation snapshots; the audio loop renders one block at a
    time from the latest snapshot (silence before the first frame) and
    never waits on the frame thread. With realtime=True block production
    is paced to the sample clock.
    """
    summary = StreamSummary()
    engine = engine or VoiceEngine(sample_rate=cfg.sample_rate, block_size=cfg.block_size)
    latest: list = [None]  # single-slot snapshot, swapped atomically
    done = threading.Event()
    failure: list = [None]

    def producer():
        try:
            for img in frame_source:
                activations, timing = process_frame(img, cfg)
                summary.timing.add(timing, cfg.budget_ms)
                latest[0] = activations
                summary.frames += 1
        except Exception as exc:  # noqa: BLE001 - reported in the summary
            failure[0] = f"frame source failed: {exc}"
        finally:
            done.set()

    worker = threading.Thread(target=producer, daemon=True)
    worker.start()
    block_dt = cfg.block_size / cfg.sample_rate
    start = time.perf_counter()
    applied = None
    try:
        while True:
            finished = done.is_set()
            snapshot = latest[0]
            if snapshot is not None and snapshot is not applied:
                engine.update_voices(snapshot)
                applied = snapshot
            audio_sink(engine.render_block())
            summary.blocks += 1
            if realtime:
                target = start + summary.blocks * block_dt
                delay = target - time.perf_counter()
                if delay > 0:
                    time.sleep(delay)
            if finished:
                break
    except Exception as exc:  # noqa: BLE001 - reported in the summary
        failure[0] = f"audio sink failed: {exc}"
    worker.join()
    summary.error = failure[0]
    return summary
