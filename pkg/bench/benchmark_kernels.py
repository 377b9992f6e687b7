"""Compare the compiled kernels against the numpy fallback.

Usage: python3 bench/benchmark_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from sonivis import kernels
from sonivis.sim.camera import CameraConfig, scene_boxes
from sonivis.sim.world import generate_layout


def timeit(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1000.0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (144, 192), dtype=np.uint8)
    thresh_num = math.floor(0.7 * 9 * 255 * (1 << 16))
    taps = rng.normal(size=64)
    xext = rng.normal(size=len(taps) - 1 + 44100)
    scene = generate_layout(0)
    cam = CameraConfig()
    ray_args = (7.5, 3.0, 1.2, 0.0, math.radians(-15.0),
                cam.tan_half_h, cam.tan_half_v, cam.width, cam.height,
                scene.length, scene.width, cam.far_clip, scene_boxes(scene),
                250, 235, 250)

    cases = [
        ("weight_sums 192x144", lambda k: k.weight_sums(img)),
        ("filter x3 192x144", lambda k: k.filter_iterations(img, 3, thresh_num)),
        ("fir 64 taps, 1 s", lambda k: k.fir_block(xext, taps)),
        ("raycast 192x144", lambda k: k.raycast(*ray_args)),
    ]

    active = kernels
    print(f"active backend: {kernels.BACKEND} (best of {args.repeats} runs)")
    print(f"{'kernel':<22} {'compiled ms':>12} {'numpy ms':>10} {'speedup':>8}")
    for name, call in cases:
        fast = timeit(lambda: call(active), args.repeats)
        slow = timeit(lambda: call(_Fallback), args.repeats)
        ratio = slow / fast if fast > 0 else float("inf")
        print(f"{name:<22} {fast:>12.3f} {slow:>10.3f} {ratio:>7.1f}x")


class _Fallback:
    weight_sums = staticmethod(kernels.fallback_weight_sums)
    filter_iterations = staticmethod(kernels.fallback_filter_iterations)
    fir_block = staticmethod(kernels.fallback_fir_block)
    raycast = staticmethod(kernels.fallback_raycast)


if __name__ == "__main__":
    main()
