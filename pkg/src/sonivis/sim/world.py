"""Virtual corridor world: layout generation, agent motion, detection marks.

The corridor is 15 m long (x axis) by 6 m wide (y axis), z up. Eight
obstacles - two each of chair, garbage bin, small bag, cardboard box -
are placed by seeded rejection sampling. Layouts are reproduced across
platforms by a 64-bit linear congruential generator (Knuth MMIX
constants: x' = 6364136223846793005*x + 1442695040888963407 mod 2^64,
uniforms from the top 53 bits).
"""

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

CORRIDOR_LENGTH = 15.0
CORRIDOR_WIDTH = 6.0
ZONE_DEPTH = 1.0          # start/end zones at each corridor end
OBSTACLE_ZONE_MARGIN = 1.0  # footprints stay this far from the zones
MIN_CENTER_DIST = 1.5

AGENT_RADIUS = 0.3
WALK_SPEED = 1.0          # m/s
TURN_RATE = 60.0          # deg/s
CAMERA_HEIGHT = 1.2

DETECTION_RANGE = 2.0
DETECTION_HALF_ANGLE = 30.0

# kind -> (footprint x, footprint y, height); plausible real-object sizes
OBSTACLE_DIMS = {
    "chair": (0.45, 0.45, 1.0),
    "garbage_bin": (0.4, 0.4, 0.8),
    "small_bag": (0.35, 0.25, 0.3),
    "cardboard_box": (0.5, 0.4, 0.5),
}
OBSTACLE_ORDER = ("chair", "chair", "garbage_bin", "garbage_bin",
                  "small_bag", "small_bag", "cardboard_box", "cardboard_box")

FLOOR_INTENSITY = 250
WALL_INTENSITY = 235
OBSTACLE_INTENSITY = 5


class Lcg:
    """64-bit linear congruential generator (Knuth MMIX constants)."""

    MULT = 6364136223846793005
    INC = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state * self.MULT + self.INC) & self.MASK
        return self.state

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * ((self.next_u64() >> 11) / float(1 << 53))


@dataclass
class Obstacle:
    kind: str
    cx: float
    cy: float
    sx: float
    sy: float
    height: float
    intensity: int = OBSTACLE_INTENSITY
    seen: bool = False
    missed: bool = False

    @property
    def aabb(self) -> tuple[float, float, float, float]:
        return (self.cx - self.sx / 2, self.cy - self.sy / 2,
                self.cx + self.sx / 2, self.cy + self.sy / 2)


@dataclass
class Scene:
    seed: int
    obstacles: list = field(default_factory=list)
    length: float = CORRIDOR_LENGTH
    width: float = CORRIDOR_WIDTH

    def layout_dict(self) -> dict:
        return {
            "seed": self.seed,
            "length": self.length,
            "width": self.width,
            "obstacles": [
                {"kind": o.kind, "cx": round(o.cx, 9), "cy": round(o.cy, 9),
                 "sx": o.sx, "sy": o.sy, "height": o.height, "intensity": o.intensity}
                for o in self.obstacles
            ],
        }

    def layout_hash(self) -> str:
        blob = json.dumps(self.layout_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def generate_layout(seed: int) -> Scene:
    """Deterministic 8-obstacle layout satisfying spacing/zone constraints."""
    rng = Lcg(seed)
    obstacles: list[Obstacle] = []
    for kind in OBSTACLE_ORDER:
        sx, sy, h = OBSTACLE_DIMS[kind]
        while True:
            cx = rng.uniform(ZONE_DEPTH + OBSTACLE_ZONE_MARGIN + sx / 2,
                             CORRIDOR_LENGTH - ZONE_DEPTH - OBSTACLE_ZONE_MARGIN - sx / 2)
            cy = rng.uniform(sy / 2, CORRIDOR_WIDTH - sy / 2)
            if all(math.hypot(cx - o.cx, cy - o.cy) >= MIN_CENTER_DIST for o in obstacles):
                obstacles.append(Obstacle(kind=kind, cx=cx, cy=cy, sx=sx, sy=sy, height=h))
                break
    return Scene(seed=seed, obstacles=obstacles)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading_deg: float = 0.0
    cam_yaw_deg: float = 0.0
    cam_pitch_deg: float = 0.0
    cam_height: float = CAMERA_HEIGHT
    colliding: bool = False

    @property
    def camera_heading_deg(self) -> float:
        return self.heading_deg + self.cam_yaw_deg


def start_pose(scene: Scene) -> Pose:
    return Pose(x=ZONE_DEPTH / 2, y=scene.width / 2, heading_deg=0.0, cam_pitch_deg=-15.0)


@dataclass(frozen=True)
class AgentInput:
    forward: int = 0   # -1, 0, 1
    turn: int = 0      # -1 right (clockwise), 0, 1 left
    cam_yaw_delta_deg: float = 0.0
    cam_pitch_delta_deg: float = 0.0


def _point_aabb_dist(px: float, py: float, aabb) -> float:
    x0, y0, x1, y1 = aabb
    dx = max(x0 - px, 0.0, px - x1)
    dy = max(y0 - py, 0.0, py - y1)
    return math.hypot(dx, dy)


def _blocked(scene: Scene, x: float, y: float):
    """Returns (blocked, obstacle index or None)."""
    if not (AGENT_RADIUS <= x <= scene.length - AGENT_RADIUS
            and AGENT_RADIUS <= y <= scene.width - AGENT_RADIUS):
        return True, None
    for i, obs in enumerate(scene.obstacles):
        if _point_aabb_dist(x, y, obs.aabb) < AGENT_RADIUS:
            return True, i
    return False, None


def step_agent(scene: Scene, pose: Pose, inp: AgentInput, dt: float):
    """Advance the agent by dt seconds; returns (new pose, events).

    A translation that would intersect a wall or an obstacle is cancelled.
    One collision_intervention event is emitted per contact episode; the
    touched obstacle is flagged missed (once) unless it had been seen.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    heading = pose.heading_deg + inp.turn * TURN_RATE * dt
    cam_yaw = pose.cam_yaw_deg + inp.cam_yaw_delta_deg
    cam_pitch = min(45.0, max(-90.0, pose.cam_pitch_deg + inp.cam_pitch_delta_deg))
    events = []
    x, y = pose.x, pose.y
    colliding = False
    if inp.forward:
        step = inp.forward * WALK_SPEED * dt
        nx = x + step * math.cos(math.radians(heading))
        ny = y + step * math.sin(math.radians(heading))
        blocked, obs_idx = _blocked(scene, nx, ny)
        if blocked:
            colliding = True
            if not pose.colliding:
                missed = False
                if obs_idx is not None:
                    obs = scene.obstacles[obs_idx]
                    if not obs.seen and not obs.missed:
                        obs.missed = True
                        missed = True
                events.append({"kind": "collision_intervention",
                               "obstacle": obs_idx, "missed": missed})
        else:
            x, y = nx, ny
    new_pose = replace(pose, x=x, y=y, heading_deg=heading,
                       cam_yaw_deg=cam_yaw, cam_pitch_deg=cam_pitch,
                       colliding=colliding)
    return new_pose, events


def mark_detected(scene: Scene, pose: Pose) -> dict:
    """Mark the nearest unseen obstacle within 2 m and +-30 deg of camera heading."""
    cam = math.radians(pose.camera_heading_deg)
    best = None
    best_dist = DETECTION_RANGE
    for i, obs in enumerate(scene.obstacles):
        if obs.seen:
            continue
        dist = math.hypot(obs.cx - pose.x, obs.cy - pose.y)
        if dist > best_dist:
            continue
        angle = math.atan2(obs.cy - pose.y, obs.cx - pose.x)
        diff = math.degrees((angle - cam + math.pi) % (2 * math.pi) - math.pi)
        if abs(diff) <= DETECTION_HALF_ANGLE:
            best, best_dist = i, dist
    if best is None:
        return {"kind": "false_mark"}
    scene.obstacles[best].seen = True
    return {"kind": "seen", "obstacle": best, "obstacle_kind": scene.obstacles[best].kind}
