"""Ray-cast grayscale camera over the corridor scene."""

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..saliency import GrayImage
from .world import FLOOR_INTENSITY, WALL_INTENSITY, Pose, Scene


@dataclass(frozen=True)
class CameraConfig:
    width: int = 192
    height: int = 144
    hfov_deg: float = 60.0
    far_clip: float = 20.0

    @property
    def tan_half_h(self) -> float:
        return math.tan(math.radians(self.hfov_deg) / 2)

    @property
    def tan_half_v(self) -> float:
        return self.tan_half_h * self.height / self.width


def scene_boxes(scene: Scene) -> np.ndarray:
    """Obstacles as (n, 6) [x0, y0, x1, y1, height, intensity] for the kernel."""
    rows = []
    for obs in scene.obstacles:
        x0, y0, x1, y1 = obs.aabb
        rows.append([x0, y0, x1, y1, obs.height, float(obs.intensity)])
    return np.asarray(rows, np.float64).reshape(-1, 6)


def render_camera(scene: Scene, pose: Pose, cfg: CameraConfig = CameraConfig()) -> GrayImage:
    """Per-pixel nearest hit among floor (250), walls (235), obstacles (5).

    Hits beyond the far clip render as 250. No lighting model.
    """
    pixels = kernels.raycast(
        pose.x, pose.y, pose.cam_height,
        math.radians(pose.camera_heading_deg), math.radians(pose.cam_pitch_deg),
        cfg.tan_half_h, cfg.tan_half_v, cfg.width, cfg.height,
        scene.length, scene.width, cfg.far_clip, scene_boxes(scene),
        FLOOR_INTENSITY, WALL_INTENSITY, FLOOR_INTENSITY,
    )
    return GrayImage(pixels=pixels)
