import numpy as np
import pytest

from sonivis.analytics import (
    NOISE, dbscan, fit_exp_decay, percent_improvement, standardize,
)


def oracle_dbscan(pts, eps, min_neighbours):
    """Independent straight-line implementation of the deterministic labeling.

    Clusters are connected components of core points, numbered by their
    lowest point index; a border point takes the smallest label among its
    core neighbours.
    """
    n = len(pts)
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    within = dist <= eps
    core = [int(within[i].sum()) - 1 >= min_neighbours for i in range(n)]

    comp = [-1] * n
    comps = []
    for i in range(n):
        if not core[i] or comp[i] != -1:
            continue
        members = [i]
        comp[i] = len(comps)
        stack = [i]
        while stack:
            j = stack.pop()
            for k in range(n):
                if core[k] and comp[k] == -1 and within[j][k]:
                    comp[k] = len(comps)
                    members.append(k)
                    stack.append(k)
        comps.append(members)

    labels = np.full(n, NOISE, np.int64)
    for cid, members in enumerate(comps):
        for m in members:
            labels[m] = cid
    for i in range(n):
        if core[i] or labels[i] != NOISE:
            continue
        owners = [comp[k] for k in range(n) if core[k] and within[i][k]]
        if owners:
            labels[i] = min(owners)
    return labels


# --- improvement ---------------------------------------------------------------

def test_percent_improvement_basic():
    assert percent_improvement([100, 90, 80, 70, 60]) == pytest.approx(40.0)
    # the better of the last two trials counts
    assert percent_improvement([100, 90, 80, 50, 70]) == pytest.approx(50.0)
    assert percent_improvement([60, 70, 80, 90, 120]) == pytest.approx(-50.0)


def test_percent_improvement_scale_invariant():
    times = [183.1, 150.0, 141.2, 139.9, 136.5]
    a = percent_improvement(times)
    b = percent_improvement([t * 3.7 for t in times])
    assert a == pytest.approx(b, abs=1e-12)


def test_percent_improvement_rejects_bad_input():
    with pytest.raises(ValueError):
        percent_improvement([1, 2, 3])
    with pytest.raises(ValueError):
        percent_improvement([1, 2, 3, 0, 5])


# --- exponential decay fit --------------------------------------------------------

def test_fit_recovers_known_curve():
    n = np.arange(1, 6)
    y = 179.8 * np.exp(-n / 2.0) + 134.0
    fit = fit_exp_decay(y)
    assert fit.amplitude == pytest.approx(179.8, rel=1e-6)
    assert fit.decay == pytest.approx(2.0, rel=1e-6)
    assert fit.offset == pytest.approx(134.0, rel=1e-6)
    assert fit.rss < 1e-12
    assert np.allclose(fit.predict(n), y)


def test_fit_many_random_curves():
    rng = np.random.default_rng(13)
    for _ in range(30):
        a = rng.uniform(20, 300)
        b = rng.uniform(0.5, 4.0)
        c = rng.uniform(50, 200)
        n = np.arange(1, 8)
        y = a * np.exp(-n / b) + c
        fit = fit_exp_decay(y)
        assert np.allclose(fit.predict(n), y, rtol=1e-6, atol=1e-6)


def test_fit_noisy_data_no_worse_than_truth():
    rng = np.random.default_rng(21)
    n = np.arange(1, 11)
    truth = 100.0 * np.exp(-n / 2.5) + 80.0
    y = truth + rng.normal(0, 1.0, len(n))
    fit = fit_exp_decay(y)
    truth_rss = float(((y - truth) ** 2).sum())
    assert fit.rss <= truth_rss + 1e-9
    assert fit.decay > 0


def test_fit_degenerate_and_errors():
    fit = fit_exp_decay([5.0, 5.0, 5.0, 5.0])
    assert fit.degenerate
    assert fit.amplitude == 0.0 and fit.offset == 5.0 and fit.rss == 0.0
    with pytest.raises(ValueError):
        fit_exp_decay([1.0, 2.0])


# --- standardization ---------------------------------------------------------------

def test_standardize_zero_mean_unit_population_std():
    rng = np.random.default_rng(5)
    pts = rng.normal([10, -4], [3, 0.5], size=(40, 2))
    z = standardize(pts)
    assert np.allclose(z.mean(axis=0), 0, atol=1e-12)
    assert np.allclose(z.std(axis=0), 1, atol=1e-12)  # population variance


def test_standardize_errors():
    with pytest.raises(ValueError):
        standardize([[1.0, 2.0]])
    with pytest.raises(ValueError):
        standardize([[1.0, 2.0], [1.0, 3.0]])  # zero variance on axis 0
    with pytest.raises(ValueError):
        standardize([[1.0, np.nan], [2.0, 3.0]])


# --- clustering ------------------------------------------------------------------

def test_dbscan_two_blobs_and_noise():
    rng = np.random.default_rng(3)
    blob_a = rng.normal((0, 0), 0.15, (20, 2))
    blob_b = rng.normal((5, 5), 0.15, (20, 2))
    outliers = np.array([[2.5, 2.5], [-4.0, 6.0]])
    pts = np.vstack([blob_a, blob_b, outliers])
    labels = dbscan(pts, eps=0.8, min_neighbours=5)
    assert set(labels[:20]) == {0}
    assert set(labels[20:40]) == {1}
    assert np.all(labels[40:] == NOISE)


def test_dbscan_all_noise_when_sparse():
    pts = np.arange(10, dtype=float).reshape(-1, 1) * 10.0
    assert np.all(dbscan(pts, eps=0.8, min_neighbours=5) == NOISE)


def test_dbscan_matches_oracle_on_random_data():
    rng = np.random.default_rng(8)
    for _ in range(25):
        centers = rng.uniform(-3, 3, (3, 2))
        pts = np.vstack([rng.normal(c, 0.4, (20, 2)) for c in centers])
        got = dbscan(pts, eps=0.8, min_neighbours=5)
        want = oracle_dbscan(pts, 0.8, 5)
        assert np.array_equal(got, want)


def test_dbscan_deterministic_under_repeat():
    rng = np.random.default_rng(17)
    pts = rng.normal(0, 1.0, (60, 2))
    a = dbscan(pts)
    b = dbscan(pts)
    assert np.array_equal(a, b)


def test_dbscan_errors_and_empty():
    assert len(dbscan(np.empty((0, 2)))) == 0
    with pytest.raises(ValueError):
        dbscan(np.zeros((3, 2)), eps=0.0)
    with pytest.raises(ValueError):
        dbscan(np.zeros((3, 2)), min_neighbours=0)
