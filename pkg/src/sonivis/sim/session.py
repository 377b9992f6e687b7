"""Deterministic interactive session logic, transport-agnostic.

One session = one seeded scene + one trial. The session advances in fixed
50 ms ticks; the latest control vector is applied each tick, so replaying
a recorded message sequence at the same tick times reproduces the trial
log exactly.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..pipeline import PipelineConfig, process_frame
from .camera import CameraConfig, render_camera
from .trial import TrialLog, trial_metrics
from .world import (
    AgentInput, Scene, ZONE_DEPTH, generate_layout, mark_detected, start_pose, step_agent,
)

TICK_MS = 50
TICK_DT = TICK_MS / 1000.0


class ProtocolError(Exception):
    pass


@dataclass
class Control:
    forward: int = 0
    turn: int = 0
    cam_yaw_deg: float = 0.0    # absolute camera yaw target
    cam_pitch_deg: float = 0.0  # absolute camera pitch target


@dataclass
class TickResult:
    activations: np.ndarray
    events: list
    finished: bool


class SessionCore:
    def __init__(self, seed: int, pipeline_cfg: PipelineConfig | None = None,
                 cam_cfg: CameraConfig | None = None):
        self.cfg = pipeline_cfg or PipelineConfig()
        self.cam = cam_cfg or CameraConfig(
            width=self.cfg.grid.image_width, height=self.cfg.grid.image_height)
        self.scene: Scene = generate_layout(seed)
        self.pose = start_pose(self.scene)
        self.log = TrialLog(seed=seed)
        self.control = Control(cam_pitch_deg=self.pose.cam_pitch_deg)
        self.phase = "ready"
        self.tick_count = 0
        self.last_seq = -1

    @property
    def t_ms(self) -> int:
        return self.tick_count * TICK_MS

    def start(self):
        if self.phase != "ready":
            raise ProtocolError(f"cannot start in phase {self.phase}")
        self.phase = "running"
        self.log.add(self.t_ms, "start", {"seed": self.scene.seed})

    def handle_input(self, seq: int, forward: int, turn: int,
                     cam_yaw_deg: float, cam_pitch_deg: float):
        if self.phase != "running":
            raise ProtocolError(f"input not allowed in phase {self.phase}")
        if seq <= self.last_seq:
            raise ProtocolError(f"seq {seq} not increasing (last {self.last_seq})")
        if forward not in (-1, 0, 1) or turn not in (-1, 0, 1):
            raise ProtocolError("forward/turn must be -1, 0 or 1")
        self.last_seq = seq
        self.control = Control(forward=forward, turn=turn,
                               cam_yaw_deg=float(cam_yaw_deg),
                               cam_pitch_deg=float(cam_pitch_deg))
        self.log.add(self.t_ms, "input", {
            "seq": seq, "forward": forward, "turn": turn,
            "cam_yaw_deg": float(cam_yaw_deg), "cam_pitch_deg": float(cam_pitch_deg),
        })

    def handle_mark(self, seq: int) -> dict:
        if self.phase != "running":
            raise ProtocolError(f"mark not allowed in phase {self.phase}")
        if seq <= self.last_seq:
            raise ProtocolError(f"seq {seq} not increasing (last {self.last_seq})")
        self.last_seq = seq
        ev = mark_detected(self.scene, self.pose)
        self.log.add(self.t_ms, "detection_mark", {
            "result": ev["kind"] if ev["kind"] == "false_mark" else "seen",
            "obstacle": ev.get("obstacle"),
        })
        return ev

    def abort(self, reason: str):
        if self.phase == "running":
            self.log.add(self.t_ms, "abort", {"reason": reason})
        self.phase = "finished"

    def tick(self) -> TickResult:
        """Advance one 50 ms step: motion, frame processing, finish check."""
        if self.phase != "running":
            raise ProtocolError(f"cannot tick in phase {self.phase}")
        ctl = self.control
        inp = AgentInput(
            forward=ctl.forward, turn=ctl.turn,
            cam_yaw_delta_deg=ctl.cam_yaw_deg - self.pose.cam_yaw_deg,
            cam_pitch_delta_deg=ctl.cam_pitch_deg - self.pose.cam_pitch_deg,
        )
        self.pose, step_events = step_agent(self.scene, self.pose, inp, TICK_DT)
        self.tick_count += 1
        events = []
        for e in step_events:
            self.log.add(self.t_ms, "collision_intervention",
                         {"obstacle": e["obstacle"], "missed": e["missed"]})
            events.append({"kind": "missed" if e["missed"] else "collision",
                           "t_ms": self.t_ms, "obstacle": e["obstacle"]})
        img = render_camera(self.scene, self.pose, self.cam)
        activations, _timing = process_frame(img, self.cfg)
        finished = self.pose.x >= self.scene.length - ZONE_DEPTH
        if finished:
            self.log.add(self.t_ms, "finish", {})
            self.phase = "finished"
            events.append({"kind": "finish", "t_ms": self.t_ms})
        return TickResult(activations=activations, events=events, finished=finished)

    def summary(self) -> dict:
        m = trial_metrics(self.log)
        return {
            "completion_time_s": m.completion_time_s,
            "objects_seen": m.objects_seen,
            "objects_missed": m.objects_missed,
            "false_marks": m.false_marks,
        }


def replay(seed: int, log: TrialLog, pipeline_cfg: PipelineConfig | None = None,
           max_ticks: int = 100000) -> TrialLog:
    """Re-run a recorded session's input/mark events; returns the new log.

    With the same seed and the same per-tick message times this reproduces
    the original TrialLog exactly.
    """
    core = SessionCore(seed, pipeline_cfg)
    core.start()
    pending = [e for e in log.events if e.kind in ("input", "detection_mark")]
    idx = 0
    for _ in range(max_ticks):
        while idx < len(pending) and pending[idx].t_ms <= core.t_ms:
            e = pending[idx]
            if e.kind == "input":
                core.handle_input(e.payload["seq"], e.payload["forward"], e.payload["turn"],
                                  e.payload["cam_yaw_deg"], e.payload["cam_pitch_deg"])
            else:
                core.handle_mark(core.last_seq + 1)
            idx += 1
        result = core.tick()
        if result.finished:
            break
    else:
        core.abort("replay tick limit")
    return core.log
