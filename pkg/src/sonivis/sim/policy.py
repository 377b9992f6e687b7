"""Scripted follow-the-silence navigation policy.

Stop; sweep the camera across candidate headings fanned around the goal
bearing; step about one metre toward the quietest (fewest active cells)
sector, preferring the sector closest to the goal on ties; repeat. On a
collision the agent backs off and penalizes that heading for the next
scans. Nearby unseen obstacles are reported (detection marks), mirroring
the stop-and-tell-the-assistant protocol.
"""

import math
from dataclasses import replace

from ..pipeline import PipelineConfig, process_frame
from .camera import CameraConfig, render_camera
from .trial import TrialLog
from .world import (
    DETECTION_RANGE, ZONE_DEPTH, AgentInput, Scene, mark_detected, start_pose, step_agent,
)

SCAN_OFFSETS_DEG = (-60, -40, -20, 0, 20, 40, 60)
SCAN_PITCH_DEG = -20.0
SCAN_TIME_MS = 1000      # nominal cost of one stop-and-scan sweep
STEP_DT = 0.1
WALK_SUBSTEPS = 10       # up to 1 m per decision
BLOCKED_PENALTY = 6
BLOCKED_NEAR_DEG = 25.0


def _bearing(from_x, from_y, to_x, to_y) -> float:
    return math.degrees(math.atan2(to_y - from_y, to_x - from_x))


def _angdiff(a: float, b: float) -> float:
    return abs((a - b + 180.0) % 360.0 - 180.0)


def follow_silence(scene: Scene, pipeline_cfg: PipelineConfig | None = None,
                   cam_cfg: CameraConfig | None = None, max_steps: int = 400) -> TrialLog:
    cfg = pipeline_cfg or PipelineConfig()
    cam = cam_cfg or CameraConfig(width=cfg.grid.image_width, height=cfg.grid.image_height)
    pose = replace(start_pose(scene), cam_pitch_deg=SCAN_PITCH_DEG)
    log = TrialLog(seed=scene.seed)
    t_ms = 0
    log.add(t_ms, "start", {"seed": scene.seed})
    goal = (scene.length - ZONE_DEPTH / 2, scene.width / 2)
    blocked_headings: list[float] = []
    seq = 0

    for _ in range(max_steps):
        if pose.x >= scene.length - ZONE_DEPTH:
            log.add(t_ms, "finish", {})
            return log

        goal_bearing = _bearing(pose.x, pose.y, *goal)
        best_key, best_heading = None, goal_bearing
        for off in SCAN_OFFSETS_DEG:
            heading = goal_bearing + off
            scan_pose = replace(pose, cam_yaw_deg=heading - pose.heading_deg)
            img = render_camera(scene, scan_pose, cam)
            activations, _ = process_frame(img, cfg)
            score = int(activations.sum())
            penalty = sum(BLOCKED_PENALTY for b in blocked_headings
                          if _angdiff(heading, b) <= BLOCKED_NEAR_DEG)
            key = (score + penalty, abs(off))
            if best_key is None or key < best_key:
                best_key, best_heading = key, heading
        t_ms += SCAN_TIME_MS

        # report the nearest unseen obstacle in range, facing it first
        for obs in scene.obstacles:
            if obs.seen:
                continue
            if math.hypot(obs.cx - pose.x, obs.cy - pose.y) <= DETECTION_RANGE:
                aim = _bearing(pose.x, pose.y, obs.cx, obs.cy)
                pose = replace(pose, cam_yaw_deg=aim - pose.heading_deg)
                ev = mark_detected(scene, pose)
                log.add(t_ms, "detection_mark",
                        {"result": ev["kind"] if ev["kind"] == "false_mark" else "seen",
                         "obstacle": ev.get("obstacle")})
                break

        pose = replace(pose, heading_deg=best_heading, cam_yaw_deg=0.0)
        seq += 1
        log.add(t_ms, "input", {"seq": seq, "forward": 1, "turn": 0,
                                "cam_yaw_deg": 0.0, "cam_pitch_deg": pose.cam_pitch_deg})
        collided = False
        for _ in range(WALK_SUBSTEPS):
            pose, events = step_agent(scene, pose, AgentInput(forward=1), STEP_DT)
            t_ms += int(STEP_DT * 1000)
            for e in events:
                log.add(t_ms, "collision_intervention",
                        {"obstacle": e["obstacle"], "missed": e["missed"]})
                collided = True
            if collided or pose.x >= scene.length - ZONE_DEPTH:
                break
        if collided:
            blocked_headings.append(pose.heading_deg)
            blocked_headings = blocked_headings[-3:]
            # back off to regain a viewpoint from which the blocker is visible
            back = replace(pose, heading_deg=pose.heading_deg + 180.0)
            for _ in range(6):
                back, _ev = step_agent(scene, back, AgentInput(forward=1), STEP_DT)
                t_ms += int(STEP_DT * 1000)
            pose = replace(back, heading_deg=pose.heading_deg, colliding=False)
        else:
            blocked_headings = blocked_headings[-1:] if blocked_headings else []

    log.add(t_ms, "abort", {"reason": "step limit reached"})
    return log
