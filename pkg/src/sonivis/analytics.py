"""Trial analytics: relative improvement, exponential-decay fit, clustering."""

import math
from dataclasses import dataclass

import numpy as np

NOISE = -1  # dbscan label for noise points

DBSCAN_EPS_DEFAULT = 0.8
DBSCAN_MIN_NEIGHBOURS_DEFAULT = 5


def percent_improvement(times) -> float:
    """100 - min(t5, t4) / t1 * 100 over the five trial times.

    Negative when the participant regressed. Ratio-based, so invariant
    under uniform scaling of all times.
    """
    t = [float(x) for x in times]
    if len(t) != 5:
        raise ValueError("expected exactly 5 trial times")
    if min(t) <= 0:
        raise ValueError("trial times must be positive")
    return 100.0 - min(t[4], t[3]) / t[0] * 100.0


@dataclass(frozen=True)
class DecayFit:
    amplitude: float   # a, seconds
    decay: float       # b, trials
    offset: float      # c, seconds
    rss: float
    degenerate: bool = False

    def predict(self, n):
        n = np.asarray(n, np.float64)
        return self.amplitude * np.exp(-n / self.decay) + self.offset


def fit_exp_decay(means, max_iter: int = 200, rel_tol: float = 1e-10) -> DecayFit:
    """Least-squares fit of a*exp(-n/b) + c to per-trial means (n = 1..N).

    Gauss-Newton with Levenberg damping; accepted steps never increase the
    residual sum of squares. Init: a = means[0] - means[-1], b = 1,
    c = means[-1]. All-equal input returns the degenerate fit a=0, c=mean.
    """
    y = np.asarray(means, np.float64)
    if len(y) < 3:
        raise ValueError("need at least 3 per-trial means")
    if np.allclose(y, y[0], rtol=0, atol=1e-12):
        return DecayFit(amplitude=0.0, decay=1.0, offset=float(y[0]), rss=0.0, degenerate=True)
    n = np.arange(1, len(y) + 1, dtype=np.float64)
    a, b, c = float(y[0] - y[-1]), 1.0, float(y[-1])
    if a == 0.0:
        a = 1.0

    def residual(a, b, c):
        return y - (a * np.exp(-n / b) + c)

    r = residual(a, b, c)
    rss = float(r @ r)
    lam = 1e-3
    for _ in range(max_iter):
        e = np.exp(-n / b)
        jac = np.column_stack([e, a * e * n / b**2, np.ones_like(n)])
        jtj = jac.T @ jac
        jtr = jac.T @ r
        stepped = False
        for _try in range(50):
            damped = jtj + lam * np.diag(np.diag(jtj))
            try:
                delta = np.linalg.solve(damped, jtr)
            except np.linalg.LinAlgError:
                lam *= 3.0
                continue
            na, nb, nc = a + delta[0], b + delta[1], c + delta[2]
            if nb <= 0:
                lam *= 3.0
                continue
            nr = residual(na, nb, nc)
            nrss = float(nr @ nr)
            if nrss <= rss:
                rel_change = (rss - nrss) / rss if rss > 0 else 0.0
                a, b, c, r = na, nb, nc, nr
                rss = nrss
                lam = max(lam / 3.0, 1e-12)
                stepped = True
                break
            lam *= 3.0
        if not stepped or rss == 0.0 or rel_change < rel_tol:
            break
    return DecayFit(amplitude=a, decay=b, offset=c, rss=rss)


def standardize(points) -> np.ndarray:
    """Per-axis zero mean, unit population variance; points is (n, d)."""
    pts = np.asarray(points, np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("need at least 2 points")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    std = pts.std(axis=0)
    if np.any(std == 0):
        raise ValueError("zero variance along an axis")
    return (pts - pts.mean(axis=0)) / std


def dbscan(points, eps: float = DBSCAN_EPS_DEFAULT,
           min_neighbours: int = DBSCAN_MIN_NEIGHBOURS_DEFAULT) -> np.ndarray:
    """Density-based clustering; returns a label per point (-1 = noise).

    Core point: >= min_neighbours other points within Euclidean eps.
    Clusters are connected components of core points plus their border
    points; a border point reachable from several clusters joins the one
    discovered first (lowest core index), so labels are deterministic.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if min_neighbours < 1:
        raise ValueError("min_neighbours must be >= 1")
    pts = np.asarray(points, np.float64)
    npts = len(pts)
    labels = np.full(npts, NOISE, np.int64)
    if npts == 0:
        return labels
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    neighbours = [np.flatnonzero((d2[i] <= eps * eps)) for i in range(npts)]
    core = np.array([len(nb) - 1 >= min_neighbours for nb in neighbours])

    visited = np.zeros(npts, bool)
    cluster = 0
    for i in range(npts):
        if visited[i] or not core[i]:
            continue
        # grow a new cluster from the lowest-indexed unvisited core point
        queue = [i]
        visited[i] = True
        labels[i] = cluster
        while queue:
            j = queue.pop(0)
            for k in neighbours[j]:
                if labels[k] == NOISE:
                    labels[k] = cluster
                if core[k] and not visited[k]:
                    visited[k] = True
                    queue.append(int(k))
        cluster += 1
    return labels
