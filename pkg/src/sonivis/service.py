"""Websocket session service.

Text frames carry JSON messages (see the protocol below); binary frames
carry audio: 4 ASCII bytes "PCM0", a little-endian u32 frame offset, then
interleaved little-endian 16-bit stereo samples (1024 frames at 44100 Hz).

client -> server:
    {"type": "start", "seed": u64, "spectator": bool}
    {"type": "input", "seq": u32, "forward": -1|0|1, "turn": -1|0|1,
     "cam_yaw_deg": f32, "cam_pitch_deg": f32}
    {"type": "mark", "seq": u32}
    {"type": "end"}
server -> client:
    {"type": "session_ready", "seed": ..., "layout_hash": hex}
    {"type": "activations", "cells": [12 bools]}
    {"type": "event", "kind": "seen"|"missed"|"collision"|"false_mark"|"finish", "t_ms": u32, ...}
    {"type": "trial_summary", ...}
    {"type": "error", "detail": ...}
"""

import asyncio
import json
import struct
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .audio import VoiceEngine
from .pipeline import PipelineConfig
from .sim.session import ProtocolError, SessionCore, TICK_MS
from .sim.trial import save_log

AUDIO_MAGIC = b"PCM0"


@dataclass
class ServiceConfig:
    pipeline: PipelineConfig = None
    log_dir: str | None = None
    hrir_set: object = None
    sound_bank: dict | None = None
    realtime: bool = True

    def __post_init__(self):
        if self.pipeline is None:
            self.pipeline = PipelineConfig()


def encode_audio_chunk(frame_offset: int, block: np.ndarray) -> bytes:
    pcm = np.clip(np.round(block * 32767.0), -32768, 32767).astype("<i2")
    return AUDIO_MAGIC + struct.pack("<I", frame_offset & 0xFFFFFFFF) + pcm.tobytes()


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="sonivis session service")

    @app.websocket("/ws")
    async def session_ws(ws: WebSocket):  # noqa: C901 - protocol state machine
        await ws.accept()
        core: SessionCore | None = None
        engine: VoiceEngine | None = None
        spectator = False
        frames_sent = 0
        block = config.pipeline.block_size
        rate = config.pipeline.sample_rate

        async def send_json(obj):
            await ws.send_text(json.dumps(obj))

        async def send_error(detail):
            await send_json({"type": "error", "detail": str(detail)})

        persisted = False

        async def persist(reason: str | None):
            nonlocal persisted
            if core is None or persisted:
                return
            if reason is not None:
                core.abort(reason)
            if config.log_dir is None:
                persisted = True
                return
            path = Path(config.log_dir) / f"session_seed{core.scene.seed}_{int(time.time()*1000)}.log"
            path.parent.mkdir(parents=True, exist_ok=True)
            save_log(core.log, path)
            persisted = True

        async def run_ticks():
            nonlocal frames_sent
            assert core is not None and engine is not None
            tick_dt = TICK_MS / 1000.0
            t0 = time.perf_counter()
            while core.phase == "running":
                result = core.tick()
                for ev in result.events:
                    await send_json({"type": "event", **ev})
                cells = [bool(v) for v in np.asarray(result.activations).reshape(-1)]
                await send_json({"type": "activations", "cells": cells})
                engine.update_voices(result.activations)
                target_frames = int(core.tick_count * tick_dt * rate)
                while frames_sent + block <= target_frames:
                    chunk = encode_audio_chunk(frames_sent, engine.render_block())
                    await ws.send_bytes(chunk)
                    frames_sent += block
                if result.finished:
                    await send_json({"type": "trial_summary", **core.summary()})
                    await persist(None)
                    return
                if config.realtime:
                    target = t0 + core.tick_count * tick_dt
                    delay = target - time.perf_counter()
                    await asyncio.sleep(max(delay, 0.0))
                else:
                    await asyncio.sleep(0)

        ticker: asyncio.Task | None = None
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await send_error("invalid JSON")
                    continue
                mtype = msg.get("type")
                try:
                    if mtype == "start":
                        if core is not None:
                            raise ProtocolError("session already started")
                        seed = int(msg["seed"])
                        spectator = bool(msg.get("spectator", False))
                        core = SessionCore(seed, config.pipeline)
                        engine = VoiceEngine(hrir_set=config.hrir_set,
                                             sound_bank=config.sound_bank,
                                             sample_rate=rate, block_size=block,
                                             master_gain=1.0 / 12.0)
                        await send_json({"type": "session_ready", "seed": seed,
                                         "layout_hash": core.scene.layout_hash(),
                                         "spectator": spectator})
                        core.start()
                        ticker = asyncio.create_task(run_ticks())
                    elif mtype == "input":
                        if core is None:
                            raise ProtocolError("no session started")
                        core.handle_input(int(msg["seq"]), int(msg["forward"]),
                                          int(msg["turn"]), float(msg["cam_yaw_deg"]),
                                          float(msg["cam_pitch_deg"]))
                    elif mtype == "mark":
                        if core is None:
                            raise ProtocolError("no session started")
                        ev = core.handle_mark(int(msg["seq"]))
                        kind = "false_mark" if ev["kind"] == "false_mark" else "seen"
                        await send_json({"type": "event", "kind": kind,
                                         "t_ms": core.t_ms,
                                         "obstacle": ev.get("obstacle")})
                    elif mtype == "end":
                        if ticker is not None:
                            ticker.cancel()
                        await persist("client ended session")
                        await ws.close()
                        return
                    else:
                        raise ProtocolError(f"unknown message type: {mtype!r}")
                except ProtocolError as exc:
                    await send_error(exc)
                except (KeyError, TypeError, ValueError) as exc:
                    await send_error(f"malformed message: {exc}")
        except WebSocketDisconnect:
            if ticker is not None:
                ticker.cancel()
            await persist("client disconnected")
        finally:
            if ticker is not None and not ticker.done():
                ticker.cancel()

    return app
