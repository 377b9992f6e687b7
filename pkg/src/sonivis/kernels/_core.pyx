# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; semantics match kernels/fallback.py exactly
(see that module for the arithmetic contracts)."""

from libc.math cimport INFINITY, cos, fabs, sin, sqrt

import numpy as np

cimport numpy as cnp


def weight_sums(const cnp.uint8_t[:, :] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_arr = np.empty((h, w), np.int64)
    cdef cnp.int64_t[:, :] out = out_arr
    cdef Py_ssize_t y, x, dy, dx, yy, xx
    cdef long long total
    cdef int p, q
    for y in range(h):
        for x in range(w):
            p = img[y, x]
            total = 0
            for dy in range(-1, 2):
                yy = y + dy
                if yy < 0: yy = 0
                elif yy >= h: yy = h - 1
                for dx in range(-1, 2):
                    if dy == 0 and dx == 0:
                        continue
                    xx = x + dx
                    if xx < 0: xx = 0
                    elif xx >= w: xx = w - 1
                    q = img[yy, xx]
                    total += 255 - (p - q if p >= q else q - p)
            out[y, x] = total
    return out_arr


def filter_iterations(const cnp.uint8_t[:, :] img, int iterations, long long thresh_num):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cur_arr = np.full((h, w), 1 << 16, np.int64)
    nxt_arr = np.empty((h, w), np.int64)
    cdef cnp.int64_t[:, :] cur = cur_arr
    cdef cnp.int64_t[:, :] nxt = nxt_arr
    cdef Py_ssize_t it, y, x, dy, dx, yy, xx
    cdef long long t
    cdef int p, q
    for it in range(iterations):
        for y in range(h):
            for x in range(w):
                p = img[y, x]
                t = 255 * cur[y, x]
                for dy in range(-1, 2):
                    yy = y + dy
                    if yy < 0: yy = 0
                    elif yy >= h: yy = h - 1
                    for dx in range(-1, 2):
                        if dy == 0 and dx == 0:
                            continue
                        xx = x + dx
                        if xx < 0: xx = 0
                        elif xx >= w: xx = w - 1
                        q = img[yy, xx]
                        t += (255 - (p - q if p >= q else q - p)) * cur[yy, xx]
                nxt[y, x] = 0 if t <= thresh_num else t // 2295
        cur_arr, nxt_arr = nxt_arr, cur_arr
        cur = cur_arr
        nxt = nxt_arr
    return cur_arr


def fir_block(const double[::1] xext, const double[::1] taps):
    cdef Py_ssize_t m = taps.shape[0]
    cdef Py_ssize_t n = xext.shape[0] - (m - 1)
    out_arr = np.zeros(n, np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double acc
    for i in range(n):
        acc = 0.0
        for k in range(m):
            acc += taps[k] * xext[i + m - 1 - k]
        out[i] = acc
    return out_arr


cdef inline void _slab(double o, double d, double lo, double hi,
                       double* tmin, double* tmax, bint* ok) nogil:
    cdef double inv, t1, t2, tmp
    if fabs(d) < 1e-9:
        if o < lo or o > hi:
            ok[0] = False
        return
    inv = 1.0 / d
    t1 = (lo - o) * inv
    t2 = (hi - o) * inv
    if t1 > t2:
        tmp = t1; t1 = t2; t2 = tmp
    if t1 > tmin[0]:
        tmin[0] = t1
    if t2 < tmax[0]:
        tmax[0] = t2


def raycast(double ox, double oy, double oz, double yaw, double pitch,
            double tan_half_h, double tan_half_v, int width, int height,
            double corridor_len, double corridor_wid, double far_clip,
            double[:, ::1] boxes, int floor_val, int wall_val, int background_val):
    cdef double cp = cos(pitch), sp = sin(pitch)
    cdef double cy = cos(yaw), sy = sin(yaw)
    cdef double fx = cp * cy, fy = cp * sy, fz = sp
    cdef double rx = sy, ry = -cy, rz = 0.0
    cdef double ux = -sp * cy, uy = -sp * sy, uz = cp

    out_arr = np.empty((height, width), np.uint8)
    cdef cnp.uint8_t[:, :] out = out_arr
    cdef Py_ssize_t px, py, b
    cdef Py_ssize_t nboxes = boxes.shape[0]
    cdef double u, v, dx, dy, dz, norm
    cdef double best_t, t, hx, hy, hz, tmin, tmax
    cdef int color
    cdef bint ok
    cdef double eps = 1e-9

    for py in range(height):
        v = (1.0 - 2.0 * (py + 0.5) / height) * tan_half_v
        for px in range(width):
            u = (2.0 * (px + 0.5) / width - 1.0) * tan_half_h
            dx = fx + u * rx + v * ux
            dy = fy + u * ry + v * uy
            dz = fz + u * rz + v * uz
            norm = sqrt(dx * dx + dy * dy + dz * dz)
            dx /= norm; dy /= norm; dz /= norm

            best_t = INFINITY
            color = background_val

            # floor z = 0
            if dz < -eps:
                t = -oz / dz
                if eps < t < best_t:
                    hx = ox + t * dx; hy = oy + t * dy
                    if 0.0 <= hx <= corridor_len and 0.0 <= hy <= corridor_wid:
                        best_t = t; color = floor_val
            # side wall y = 0
            if dy < -eps:
                t = -oy / dy
                if eps < t < best_t:
                    hx = ox + t * dx; hz = oz + t * dz
                    if 0.0 <= hx <= corridor_len and hz >= 0.0:
                        best_t = t; color = wall_val
            # side wall y = corridor_wid
            if dy > eps:
                t = (corridor_wid - oy) / dy
                if eps < t < best_t:
                    hx = ox + t * dx; hz = oz + t * dz
                    if 0.0 <= hx <= corridor_len and hz >= 0.0:
                        best_t = t; color = wall_val
            # end wall x = 0
            if dx < -eps:
                t = -ox / dx
                if eps < t < best_t:
                    hy = oy + t * dy; hz = oz + t * dz
                    if 0.0 <= hy <= corridor_wid and hz >= 0.0:
                        best_t = t; color = wall_val
            # end wall x = corridor_len
            if dx > eps:
                t = (corridor_len - ox) / dx
                if eps < t < best_t:
                    hy = oy + t * dy; hz = oz + t * dz
                    if 0.0 <= hy <= corridor_wid and hz >= 0.0:
                        best_t = t; color = wall_val

            for b in range(nboxes):
                tmin = eps
                tmax = INFINITY
                ok = True
                _slab(ox, dx, boxes[b, 0], boxes[b, 2], &tmin, &tmax, &ok)
                _slab(oy, dy, boxes[b, 1], boxes[b, 3], &tmin, &tmax, &ok)
                _slab(oz, dz, 0.0, boxes[b, 4], &tmin, &tmax, &ok)
                if ok and tmin <= tmax and eps < tmin < best_t:
                    best_t = tmin
                    color = <int>boxes[b, 5]

            if best_t > far_clip:
                color = background_val
            out[py, px] = <cnp.uint8_t>color
    return out_arr
