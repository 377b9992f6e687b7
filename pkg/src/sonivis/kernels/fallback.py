"""Numpy implementations of the hot kernels.

Arithmetic contracts (shared with the compiled backend):

* weights are the 8-bit quantization entry[d] = 255 - d of f(x) = 1 - x/255;
* multi-iteration filter states are fixed point at scale 2**16, with the
  per-iteration estimate kept as the integer T = 255*S_i + sum_j entry*S_j
  (true state = T / (9*255*2**16)) and requantized by T // 2295;
* fir_block accumulates taps in ascending index order so that outputs are
  bit-identical for any partition of the input into blocks.
"""

import numpy as np

FP_SCALE = 1 << 16  # fixed-point scale for filter states
_DENOM = 9 * 255    # divisor of the state estimate, in weight-table units

_OFFSETS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


def weight_sums(img):
    """Per-pixel sum of entry[|p_i - p_j|] over the 8 neighbours.

    Border neighbours are replicated (edge-clamped). img is uint8 (H, W);
    returns int64 (H, W).
    """
    center = img.astype(np.int64)
    padded = np.pad(center, 1, mode="edge")
    h, w = img.shape
    total = np.zeros((h, w), np.int64)
    for dy, dx in _OFFSETS:
        nb = padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        total += 255 - np.abs(center - nb)
    return total


def filter_iterations(img, iterations, thresh_num):
    """Synchronous fixed-point filter iterations.

    thresh_num = floor(thresh * 9 * 255 * 2**16); a neuron whose estimate
    T satisfies T <= thresh_num is forced to 0. Returns int64 states at
    scale 2**16 (initially all 2**16).
    """
    h, w = img.shape
    center = img.astype(np.int64)
    padded_img = np.pad(center, 1, mode="edge")
    weights = []
    for dy, dx in _OFFSETS:
        nb = padded_img[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        weights.append(255 - np.abs(center - nb))

    states = np.full((h, w), FP_SCALE, np.int64)
    for _ in range(iterations):
        padded_s = np.pad(states, 1, mode="edge")
        t = 255 * states
        for (dy, dx), wgt in zip(_OFFSETS, weights):
            t = t + wgt * padded_s[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        states = np.where(t <= thresh_num, 0, t // _DENOM)
    return states


def fir_block(xext, taps):
    """FIR over one block: xext = history (len(taps)-1 samples) + block.

    Returns len(xext) - len(taps) + 1 output samples. Accumulation is in
    ascending tap order, one multiply-add per tap, so block splits are
    sample-exact.
    """
    m = taps.shape[0]
    n = xext.shape[0] - (m - 1)
    out = np.zeros(n, np.float64)
    for k in range(m):
        out += taps[k] * xext[m - 1 - k : m - 1 - k + n]
    return out


def raycast(ox, oy, oz, yaw, pitch, tan_half_h, tan_half_v, width, height,
            corridor_len, corridor_wid, far_clip, boxes,
            floor_val, wall_val, background_val):
    """Pinhole ray cast over the corridor scene.

    yaw/pitch in radians (yaw CCW from +x, pitch positive up); boxes is a
    float64 (n, 6) array of [x0, y0, x1, y1, height, intensity]. Walls are
    the four corridor side planes (unbounded height); the floor is z = 0.
    Returns a uint8 (height, width) image.
    """
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    fwd = np.array([cp * cy, cp * sy, sp])
    right = np.array([sy, -cy, 0.0])
    up = np.array([-sp * cy, -sp * sy, cp])

    u = (2.0 * (np.arange(width) + 0.5) / width - 1.0) * tan_half_h
    v = (1.0 - 2.0 * (np.arange(height) + 0.5) / height) * tan_half_v
    dirs = (fwd[None, None, :]
            + u[None, :, None] * right[None, None, :]
            + v[:, None, None] * up[None, None, :])
    dirs /= np.linalg.norm(dirs, axis=2, keepdims=True)
    dx, dy, dz = dirs[..., 0], dirs[..., 1], dirs[..., 2]

    eps = 1e-9
    best_t = np.full((height, width), np.inf)
    color = np.full((height, width), background_val, np.uint8)

    def plane_hit(t, valid, value):
        nonlocal best_t, color
        hit = valid & (t > eps) & (t < best_t)
        best_t = np.where(hit, t, best_t)
        color = np.where(hit, np.uint8(value), color)

    with np.errstate(divide="ignore", invalid="ignore"):
        # floor z = 0
        t = -oz / dz
        px, py = ox + t * dx, oy + t * dy
        plane_hit(t, (dz < -eps) & (px >= 0) & (px <= corridor_len)
                  & (py >= 0) & (py <= corridor_wid), floor_val)
        # side walls y = 0 and y = corridor_wid
        t = -oy / dy
        px, pz = ox + t * dx, oz + t * dz
        plane_hit(t, (dy < -eps) & (px >= 0) & (px <= corridor_len) & (pz >= 0),
                  wall_val)
        t = (corridor_wid - oy) / dy
        px, pz = ox + t * dx, oz + t * dz
        plane_hit(t, (dy > eps) & (px >= 0) & (px <= corridor_len) & (pz >= 0),
                  wall_val)
        # end walls x = 0 and x = corridor_len
        t = -ox / dx
        py, pz = oy + t * dy, oz + t * dz
        plane_hit(t, (dx < -eps) & (py >= 0) & (py <= corridor_wid) & (pz >= 0),
                  wall_val)
        t = (corridor_len - ox) / dx
        py, pz = oy + t * dy, oz + t * dz
        plane_hit(t, (dx > eps) & (py >= 0) & (py <= corridor_wid) & (pz >= 0),
                  wall_val)

        origin = np.array([ox, oy, oz])
        for i in range(boxes.shape[0]):
            x0, y0, x1, y1, bh, val = boxes[i]
            lo = np.array([x0, y0, 0.0])
            hi = np.array([x1, y1, bh])
            tmin = np.full((height, width), eps)
            tmax = np.full((height, width), np.inf)
            ok = np.ones((height, width), bool)
            for ax, d in ((0, dx), (1, dy), (2, dz)):
                t1 = (lo[ax] - origin[ax]) / d
                t2 = (hi[ax] - origin[ax]) / d
                near, far_ = np.minimum(t1, t2), np.maximum(t1, t2)
                parallel = np.abs(d) < eps
                inside = (origin[ax] >= lo[ax]) & (origin[ax] <= hi[ax])
                near = np.where(parallel, -np.inf, near)
                far_ = np.where(parallel, np.inf, far_)
                ok &= ~parallel | inside
                tmin = np.maximum(tmin, near)
                tmax = np.minimum(tmax, far_)
            hit = ok & (tmin <= tmax) & (tmin > eps) & (tmin < best_t)
            best_t = np.where(hit, tmin, best_t)
            color = np.where(hit, np.uint8(val), color)

    color = np.where(best_t > far_clip, np.uint8(background_val), color)
    return color.astype(np.uint8)
