"""Trial logs and metrics.

Persisted log format: one record per line, `t_ms event_type json_payload`,
time-ordered, starting with a `start` record (payload carries the seed)
and ending with exactly one `finish` or `abort` record. Event types:

    start                  {"seed": int}
    input                  {"seq": int, "forward": int, "turn": int,
                            "cam_yaw_deg": float, "cam_pitch_deg": float}
    detection_mark         {"result": "seen"|"false_mark", "obstacle": int|null}
    collision_intervention {"obstacle": int|null, "missed": bool}
    finish                 {}
    abort                  {"reason": str}
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

TERMINAL_KINDS = ("finish", "abort")


class IncompleteTrialError(ValueError):
    pass


@dataclass(frozen=True)
class TrialEvent:
    t_ms: int
    kind: str
    payload: dict


@dataclass
class TrialLog:
    seed: int
    events: list = field(default_factory=list)

    def add(self, t_ms: int, kind: str, payload: dict | None = None) -> TrialEvent:
        ev = TrialEvent(t_ms=int(t_ms), kind=kind, payload=payload or {})
        if self.events and ev.t_ms < self.events[-1].t_ms:
            raise ValueError("events must be time-ordered")
        if self.events and self.events[-1].kind in TERMINAL_KINDS:
            raise ValueError("trial already terminated")
        self.events.append(ev)
        return ev

    @property
    def finished(self) -> bool:
        return bool(self.events) and self.events[-1].kind == "finish"


@dataclass(frozen=True)
class TrialMetrics:
    completion_time_s: float
    objects_seen: int
    objects_missed: int
    false_marks: int


def trial_metrics(log: TrialLog) -> TrialMetrics:
    """Metrics of a finished trial; missed/seen deduplicate per obstacle."""
    finish = [e for e in log.events if e.kind == "finish"]
    if not finish:
        raise IncompleteTrialError("trial log has no finish event")
    start_t = log.events[0].t_ms if log.events else 0
    seen: set[int] = set()
    missed: set[int] = set()
    false_marks = 0
    for e in log.events:
        if e.kind == "detection_mark":
            if e.payload.get("result") == "seen":
                seen.add(e.payload["obstacle"])
            else:
                false_marks += 1
        elif e.kind == "collision_intervention":
            if e.payload.get("missed") and e.payload.get("obstacle") is not None:
                missed.add(e.payload["obstacle"])
    return TrialMetrics(
        completion_time_s=(finish[0].t_ms - start_t) / 1000.0,
        objects_seen=len(seen),
        objects_missed=len(missed),
        false_marks=false_marks,
    )


def save_log(log: TrialLog, path) -> None:
    lines = [
        f"{e.t_ms} {e.kind} {json.dumps(e.payload, sort_keys=True)}"
        for e in log.events
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def load_log(path) -> TrialLog:
    events = []
    seed = 0
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        t_str, kind, payload_str = line.split(" ", 2)
        ev = TrialEvent(t_ms=int(t_str), kind=kind, payload=json.loads(payload_str))
        if kind == "start":
            seed = ev.payload.get("seed", 0)
        events.append(ev)
    log = TrialLog(seed=seed)
    log.events = events
    return log


def validate_log_schema(log: TrialLog) -> None:
    """Raises ValueError when the event stream violates the documented schema."""
    if not log.events or log.events[0].kind != "start":
        raise ValueError("log must begin with a start record")
    terminal = [e for e in log.events if e.kind in TERMINAL_KINDS]
    if len(terminal) != 1 or log.events[-1].kind not in TERMINAL_KINDS:
        raise ValueError("log must end with exactly one finish or abort record")
    last = -1
    for e in log.events:
        if e.t_ms < last:
            raise ValueError("events out of order")
        last = e.t_ms
