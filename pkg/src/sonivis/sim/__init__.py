from .world import (
    CORRIDOR_LENGTH, CORRIDOR_WIDTH, AgentInput, Obstacle, Pose, Scene,
    generate_layout, mark_detected, step_agent,
)
from .camera import CameraConfig, render_camera
from .trial import IncompleteTrialError, TrialEvent, TrialLog, TrialMetrics, load_log, save_log, trial_metrics
from .policy import follow_silence

__all__ = [
    "CORRIDOR_LENGTH", "CORRIDOR_WIDTH", "AgentInput", "Obstacle", "Pose", "Scene",
    "generate_layout", "mark_detected", "step_agent", "CameraConfig", "render_camera",
    "IncompleteTrialError", "TrialEvent", "TrialLog", "TrialMetrics", "load_log",
    "save_log", "trial_metrics", "follow_silence",
]
