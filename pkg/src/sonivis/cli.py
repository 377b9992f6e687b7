"""Command-line entry points: mask, sonify, sim, analyze, serve."""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from .analytics import dbscan, fit_exp_decay, percent_improvement, standardize
from .grid import GridSpec
from .pipeline import PipelineConfig, render_offline
from .saliency import OPERATIONAL_THRESH, FilterConfig, GrayImage, salient_mask
from .sim import follow_silence, generate_layout, load_log, save_log, trial_metrics
from .wavio import write_wav16

REC601 = (0.299, 0.587, 0.114)


def load_gray(path) -> GrayImage:
    """Load PNG/PGM as 8-bit gray; color converted by the Rec. 601 luma."""
    img = Image.open(path)
    if img.mode in ("RGB", "RGBA", "P"):
        arr = np.asarray(img.convert("RGB"), np.float64)
        gray = arr[..., 0] * REC601[0] + arr[..., 1] * REC601[1] + arr[..., 2] * REC601[2]
        pixels = np.clip(np.round(gray), 0, 255).astype(np.uint8)
    else:
        pixels = np.asarray(img.convert("L"), np.uint8)
    return GrayImage(pixels=pixels)


def _load_config_file(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, val = line.split("=", 1)
        values[key.strip()] = val.strip()
    return values


def _pipeline_config(args, width: int, height: int) -> PipelineConfig:
    conf = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_val, key, cast, default):
        if flag_val is not None:
            return flag_val
        if key in conf:
            return cast(conf[key])
        return default

    thresh = pick(getattr(args, "thresh", None), "thresh", float, OPERATIONAL_THRESH)
    iters = pick(getattr(args, "iters", None), "iterations", int, 1)
    ratio = pick(getattr(args, "ratio", None), "activation_ratio", float, 0.01)
    rows = int(conf.get("grid_rows", 3))
    cols = int(conf.get("grid_cols", 4))
    rate = int(conf.get("sample_rate", 44100))
    block = int(conf.get("block_size", 1024))
    return PipelineConfig(
        filter=FilterConfig(thresh=thresh, iterations=iters),
        grid=GridSpec(width, height, rows=rows, cols=cols, activation_ratio=ratio),
        sample_rate=rate, block_size=block,
    )


def cmd_mask(args) -> int:
    img = load_gray(args.input)
    cfg = FilterConfig(thresh=args.thresh if args.thresh is not None else OPERATIONAL_THRESH,
                       iterations=args.iters if args.iters is not None else 1)
    mask = salient_mask(img, cfg)
    out = (mask.flags.astype(np.uint8)) * 255
    Image.fromarray(out, mode="L").save(args.output)
    print(f"{mask.count} salient pixels of {img.width * img.height}")
    return 0


def cmd_sonify(args) -> int:
    src = Path(args.input)
    if src.is_dir():
        paths = sorted(p for p in src.iterdir() if p.suffix.lower() in (".png", ".pgm"))
        if not paths:
            print(f"no frames found in {src}", file=sys.stderr)
            return 1
        frames = [load_gray(p) for p in paths]
    else:
        frames = [load_gray(src)]
    cfg = _pipeline_config(args, frames[0].width, frames[0].height)
    blocks = max(1, math.ceil(args.seconds * cfg.sample_rate / cfg.block_size))
    audio = render_offline(frames, cfg, blocks)
    write_wav16(args.output, audio, cfg.sample_rate)
    print(f"wrote {blocks * cfg.block_size} frames to {args.output}")
    return 0


def cmd_sim(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = _pipeline_config(args, 192, 144)
    rows = []
    for i in range(args.trials):
        seed = args.seed + i
        scene = generate_layout(seed)
        log = follow_silence(scene, cfg)
        save_log(log, out_dir / f"trial_{seed}.log")
        if log.finished:
            m = trial_metrics(log)
            rows.append((seed, m.completion_time_s, m.objects_seen, m.objects_missed, m.false_marks))
        else:
            rows.append((seed, float("nan"), 0, 0, 0))
    header = f"{'seed':>6} {'time_s':>8} {'seen':>5} {'missed':>7} {'false':>6}"
    lines = [header] + [f"{s:>6} {t:>8.1f} {sn:>5} {ms:>7} {fm:>6}" for s, t, sn, ms, fm in rows]
    table = "\n".join(lines)
    print(table)
    (out_dir / "metrics.txt").write_text(table + "\n")
    return 0


def _load_times(path: Path) -> np.ndarray:
    if path.is_dir():
        logs = sorted(path.glob("*.log"))
        times = [trial_metrics(load_log(p)).completion_time_s for p in logs]
        return np.asarray(times)
    text = path.read_text()
    delim = "," if "," in text else None
    return np.atleast_1d(np.loadtxt(str(path), delimiter=delim))


def cmd_analyze(args) -> int:
    path = Path(args.input)
    report: dict = {"input": str(path)}
    if args.improve:
        times = _load_times(path)
        if len(times) != 5:
            print(f"--improve needs exactly 5 trial times, got {len(times)}", file=sys.stderr)
            return 1
        val = percent_improvement(times)
        report["percent_improvement"] = val
        print(f"relative improvement: {val:.2f}%")
    elif args.fit:
        times = _load_times(path)
        fit = fit_exp_decay(times)
        report["fit"] = {"amplitude": fit.amplitude, "decay": fit.decay,
                         "offset": fit.offset, "rss": fit.rss, "degenerate": fit.degenerate}
        print(f"fit: {fit.amplitude:.3f} * exp(-n/{fit.decay:.3f}) + {fit.offset:.3f}"
              f"  (rss {fit.rss:.3e}{', degenerate' if fit.degenerate else ''})")
    elif args.dbscan:
        data = np.loadtxt(str(path), delimiter="," if "," in path.read_text() else None)
        if data.ndim != 2 or data.shape[1] != 2:
            print("--dbscan expects a 2-column file of (time, error) points", file=sys.stderr)
            return 1
        labels = dbscan(standardize(data), eps=args.eps, min_neighbours=args.minpts)
        n_clusters = int(labels.max()) + 1 if labels.max() >= 0 else 0
        n_noise = int((labels == -1).sum())
        report["dbscan"] = {"labels": labels.tolist(), "clusters": n_clusters, "noise": n_noise}
        print(f"{n_clusters} cluster(s), {n_noise} noise point(s)")
        for c in range(n_clusters):
            print(f"  cluster {c}: {int((labels == c).sum())} points")
    else:
        print("choose one of --improve, --fit, --dbscan", file=sys.stderr)
        return 1
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .audio import load_hrir_set, load_sound_bank
    from .service import ServiceConfig, create_app

    hrir = load_hrir_set(args.hrir) if args.hrir else None
    sounds = load_sound_bank(args.sounds) if args.sounds else None
    cfg = _pipeline_config(args, 192, 144)
    app = create_app(ServiceConfig(pipeline=cfg, log_dir=args.log_dir,
                                   hrir_set=hrir, sound_bank=sounds))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sonivis",
                                description="vision-to-audition toolkit and simulator")
    p.add_argument("--config", help="key=value preset file (flags override)")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mask", help="write the binary saliency mask of an image")
    m.add_argument("input")
    m.add_argument("output")
    m.add_argument("--thresh", type=float, default=None)
    m.add_argument("--iters", type=int, default=None)
    m.set_defaults(func=cmd_mask)

    s = sub.add_parser("sonify", help="offline pipeline render of frames to a stereo WAV")
    s.add_argument("input", help="image file or directory of frames")
    s.add_argument("output")
    s.add_argument("--seconds", type=float, required=True)
    s.add_argument("--thresh", type=float, default=None)
    s.add_argument("--iters", type=int, default=None)
    s.add_argument("--ratio", type=float, default=None)
    s.set_defaults(func=cmd_sonify)

    si = sub.add_parser("sim", help="headless scripted navigation trials")
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--policy", choices=["follow-silence"], default="follow-silence")
    si.add_argument("--trials", type=int, default=5)
    si.add_argument("--out", required=True)
    si.add_argument("--thresh", type=float, default=None)
    si.add_argument("--iters", type=int, default=None)
    si.add_argument("--ratio", type=float, default=None)
    si.set_defaults(func=cmd_sim)

    a = sub.add_parser("analyze", help="trial analytics over logs or CSV data")
    a.add_argument("input", help="directory of trial logs or a CSV file")
    a.add_argument("--improve", action="store_true")
    a.add_argument("--fit", action="store_true")
    a.add_argument("--dbscan", action="store_true")
    a.add_argument("--eps", type=float, default=0.8)
    a.add_argument("--minpts", type=int, default=5)
    a.add_argument("--json", help="write a machine-readable summary to this path")
    a.set_defaults(func=cmd_analyze)

    sv = sub.add_parser("serve", help="run the interactive session service")
    sv.add_argument("--port", type=int, default=8000)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--hrir", help="impulse-response manifest")
    sv.add_argument("--sounds", help="sound-bank manifest")
    sv.add_argument("--log-dir", help="directory for persisted trial logs")
    sv.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
