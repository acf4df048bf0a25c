"""Kernel backends: brute-force oracles and bit-for-bit backend parity."""

from __future__ import annotations

import numpy as np
import pytest

from oride_attack import kernels
from oride_attack.kernels import _reference

compiled_available = "compiled" in kernels.available_backends()
needs_compiled = pytest.mark.skipif(
    not compiled_available, reason="compiled kernel extension not built"
)

EPS = 1e-6


def random_points(rng, k, lo=0.0, hi=10000.0):
    return np.ascontiguousarray(rng.uniform(lo, hi, size=(k, 2)))


def pairwise_inputs(rng, n1=17, n2=23):
    """Two circle families with a few crafted tangent/near-tangent radii."""
    c1 = rng.uniform(0, 10000, 2)
    c2 = rng.uniform(0, 10000, 2)
    d = float(np.hypot(*(c2 - c1)))
    r1 = rng.uniform(10.0, 9000.0, n1)
    r2 = rng.uniform(10.0, 9000.0, n2)
    # external tangency, internal tangency, near-tangent crossing, disjoint
    r2[0] = abs(d - r1[0])
    r2[1] = d + r1[1]
    r2[2] = abs(d - r1[2]) + 1e-9
    r2[3] = d + r1[3] + 50.0
    return float(c1[0]), float(c1[1]), r1, float(c2[0]), float(c2[1]), r2


# ----------------------------------------------------------------- oracles --


def test_pairwise_intersections_match_scalar_geometry():
    from oride_attack.geometry import Circle, Point, circle_intersection

    rng = np.random.default_rng(11)
    c1x, c1y, r1, c2x, c2y, r2 = pairwise_inputs(rng)
    got = _reference.pairwise_circle_intersections(c1x, c1y, r1, c2x, c2y, r2, EPS)
    expected = []
    for ra in r1:
        for rb in r2:
            expected.extend(
                (p.x, p.y)
                for p in circle_intersection(
                    Circle(Point(c1x, c1y), ra), Circle(Point(c2x, c2y), rb), EPS
                )
            )
    expected = np.array(expected).reshape(-1, 2)
    assert got.shape == expected.shape
    np.testing.assert_allclose(got, expected, atol=1e-9)


def test_pairwise_intersections_empty_inputs():
    out = _reference.pairwise_circle_intersections(
        0.0, 0.0, np.empty(0), 10.0, 0.0, np.array([5.0]), EPS
    )
    assert out.shape == (0, 2)


def test_on_any_circle_mask_oracle():
    rng = np.random.default_rng(12)
    pts = random_points(rng, 40)
    cx, cy = 5000.0, 5000.0
    radii = rng.uniform(10, 8000, 9)
    d = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    radii[0] = d[0]  # exact hit
    radii[1] = d[1] + 0.5 * EPS  # hit within tolerance
    got = _reference.on_any_circle_mask(pts, cx, cy, radii, EPS)
    want = np.array(
        [np.any(np.abs(np.hypot(x - cx, y - cy) - radii) <= EPS) for x, y in pts]
    )
    assert got[0] and got[1]
    np.testing.assert_array_equal(got, want)


def test_band_mask_oracle():
    # A point survives when some disclosed circle crosses the circle of
    # radius `band` around it: |r - band| - eps <= dist <= r + band + eps.
    rng = np.random.default_rng(13)
    pts = random_points(rng, 50)
    cx, cy = 2500.0, 7500.0
    radii = rng.uniform(10, 8000, 7)
    band = 100.0
    d = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    radii[0] = d[0] + band  # exact tangency: kept
    got = _reference.band_mask(pts, cx, cy, radii, band, EPS)
    want = np.array(
        [
            np.any((np.abs(radii - band) - EPS <= dd) & (dd <= radii + band + EPS))
            for dd in d
        ]
    )
    assert got[0]
    np.testing.assert_array_equal(got, want)


def test_band_mask_containment_is_not_crossing():
    # A tiny disclosed circle strictly inside the band circle never crosses
    # its boundary, so the point is not kept.
    pts = np.array([[0.0, 0.0]])
    got = _reference.band_mask(pts, 10.0, 0.0, np.array([1.0]), 100.0, EPS)
    assert not got[0]


def test_residual_score_oracle():
    rng = np.random.default_rng(14)
    pts = random_points(rng, 30)
    centers = random_points(rng, 5)
    radii = np.ascontiguousarray(rng.uniform(10, 9000, size=(5, 8)))
    got = _reference.residual_score(pts, centers, radii)
    want = np.zeros(len(pts))
    for i, (x, y) in enumerate(pts):
        for g in range(5):
            dd = np.hypot(x - centers[g, 0], y - centers[g, 1])
            want[i] += np.min(np.abs(dd - radii[g]))
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_residual_score_zero_for_consistent_point():
    pts = np.array([[3.0, 4.0]])
    centers = np.array([[0.0, 0.0], [6.0, 0.0]])
    radii = np.array([[5.0, 99.0], [123.0, 5.0]])
    np.testing.assert_allclose(
        _reference.residual_score(pts, centers, radii), [0.0], atol=1e-12
    )


def test_has_later_neighbor_mask_oracle():
    rng = np.random.default_rng(15)
    pts = random_points(rng, 60, 0, 500)
    tau = 60.0
    got = _reference.has_later_neighbor_mask(pts, tau)
    k = len(pts)
    want = np.zeros(k, dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            if np.hypot(*(pts[i] - pts[j])) <= tau:
                want[i] = True
                break
    np.testing.assert_array_equal(got, want)
    assert not got[-1]  # the last point never has a later neighbor


def test_dedup_leaders_mask_oracle():
    rng = np.random.default_rng(16)
    pts = random_points(rng, 60, 0, 500)
    tau = 60.0
    got = _reference.dedup_leaders_mask(pts, tau)
    kept: list[np.ndarray] = []
    want = np.zeros(len(pts), dtype=bool)
    for i, p in enumerate(pts):
        if all(np.hypot(*(p - q)) > tau for q in kept):
            kept.append(p)
            want[i] = True
    np.testing.assert_array_equal(got, want)
    assert got[0]  # the first point is always a leader


def test_near_partner_mask_oracle():
    rng = np.random.default_rng(17)
    a = random_points(rng, 25, 0, 500)
    b = random_points(rng, 30, 0, 500)
    b[0] = a[0]  # exact duplicate: must not count as a partner
    b[1] = a[1] + 0.5 * EPS  # equal within eps: must not count either
    tau = 80.0
    got = _reference.near_partner_mask(a, b, tau, EPS)
    want = np.zeros(len(a), dtype=bool)
    for i, p in enumerate(a):
        for q in b:
            same = abs(p[0] - q[0]) <= EPS and abs(p[1] - q[1]) <= EPS
            if not same and np.hypot(*(p - q)) <= tau:
                want[i] = True
                break
    np.testing.assert_array_equal(got, want)


def test_near_partner_mask_eps_equality_only_excludes_selfmatch():
    a = np.array([[100.0, 100.0]])
    twin = np.array([[100.0 + 0.5 * EPS, 100.0]])
    distinct = np.array([[103.0, 100.0]])
    assert not _reference.near_partner_mask(a, twin, 10.0, EPS)[0]
    assert _reference.near_partner_mask(a, distinct, 10.0, EPS)[0]


def test_masks_on_empty_inputs():
    empty = np.empty((0, 2))
    radii = np.array([5.0])
    assert _reference.on_any_circle_mask(empty, 0, 0, radii, EPS).shape == (0,)
    assert _reference.band_mask(empty, 0, 0, radii, 10.0, EPS).shape == (0,)
    assert _reference.residual_score(empty, np.array([[0.0, 0.0]]), radii.reshape(1, 1)).shape == (0,)
    assert _reference.has_later_neighbor_mask(empty, 1.0).shape == (0,)
    assert _reference.dedup_leaders_mask(empty, 1.0).shape == (0,)
    assert _reference.near_partner_mask(empty, empty, 1.0, EPS).shape == (0,)


def test_unique_rows_stable():
    pts = np.array([[1.0, 2.0], [3.0, 4.0], [1.0, 2.0], [5.0, 6.0], [3.0, 4.0]])
    out = kernels.unique_rows_stable(pts)
    np.testing.assert_array_equal(out, [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    # Already-unique input comes back unchanged.
    np.testing.assert_array_equal(kernels.unique_rows_stable(out), out)
    assert kernels.unique_rows_stable(np.empty((0, 2))).shape == (0, 2)


# ------------------------------------------------------------------ parity --


@needs_compiled
def test_parity_pairwise_intersections():
    from oride_attack.kernels import _speedups

    rng = np.random.default_rng(18)
    for _ in range(25):
        args = pairwise_inputs(rng)
        ref = _reference.pairwise_circle_intersections(*args, EPS)
        fast = _speedups.pairwise_circle_intersections(*args, EPS)
        assert ref.shape == fast.shape
        assert np.array_equal(ref, fast)  # bit-for-bit


@needs_compiled
def test_parity_masks_and_scores():
    from oride_attack.kernels import _speedups

    rng = np.random.default_rng(19)
    for _ in range(25):
        pts = random_points(rng, int(rng.integers(0, 200)))
        other = random_points(rng, int(rng.integers(0, 200)))
        radii = np.ascontiguousarray(rng.uniform(10, 9000, 12))
        grid = np.ascontiguousarray(rng.uniform(10, 9000, size=(4, 12)))
        centers = random_points(rng, 4)
        cx, cy = rng.uniform(0, 10000, 2)
        tau = float(rng.uniform(1.0, 500.0))
        band = float(rng.uniform(1.0, 300.0))
        pairs = [
            (
                _reference.on_any_circle_mask(pts, cx, cy, radii, EPS),
                _speedups.on_any_circle_mask(pts, cx, cy, radii, EPS),
            ),
            (
                _reference.band_mask(pts, cx, cy, radii, band, EPS),
                _speedups.band_mask(pts, cx, cy, radii, band, EPS),
            ),
            (
                _reference.residual_score(pts, centers, grid),
                _speedups.residual_score(pts, centers, grid),
            ),
            (
                _reference.has_later_neighbor_mask(pts, tau),
                _speedups.has_later_neighbor_mask(pts, tau),
            ),
            (
                _reference.dedup_leaders_mask(pts, tau),
                _speedups.dedup_leaders_mask(pts, tau),
            ),
            (
                _reference.near_partner_mask(pts, other, tau, EPS),
                _speedups.near_partner_mask(pts, other, tau, EPS),
            ),
        ]
        for ref, fast in pairs:
            assert np.array_equal(ref, fast)


@needs_compiled
def test_parity_near_tangent_ensemble():
    # Stress the stable half-chord path: radii straddling tangency by
    # less than one part in 1e12 must still agree bit-for-bit.
    from oride_attack.kernels import _speedups

    rng = np.random.default_rng(20)
    c1 = (0.0, 0.0)
    c2 = (10000.0, 0.0)
    offsets = rng.uniform(-1e-6, 1e-6, 64)
    r1 = np.ascontiguousarray(rng.uniform(4000, 7000, 64))
    r2 = np.ascontiguousarray(10000.0 - r1 + offsets)
    ref = _reference.pairwise_circle_intersections(*c1, r1, *c2, r2, EPS)
    fast = _speedups.pairwise_circle_intersections(*c1, r1, *c2, r2, EPS)
    assert np.array_equal(ref, fast)


# --------------------------------------------------------------- selection --


def test_use_backend_switching(restore_backend):
    kernels.use_backend("python")
    assert kernels.BACKEND == "python"
    assert kernels.pairwise_circle_intersections is _reference.pairwise_circle_intersections
    kernels.use_backend("auto")
    assert kernels.BACKEND in kernels.available_backends()


def test_use_backend_unknown_name():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_available_backends_contains_python():
    assert "python" in kernels.available_backends()


@needs_compiled
def test_use_backend_compiled(restore_backend):
    from oride_attack.kernels import _speedups

    kernels.use_backend("compiled")
    assert kernels.BACKEND == "compiled"
    assert kernels.band_mask is _speedups.band_mask
