"""Pure NumPy kernels: the fallback backend.

Semantics (and the exact floating-point operation order) must match
``_speedups.pyx``; the parity tests compare outputs bit for bit.  Quadratic
scans are blocked to bound temporary memory.
"""

from __future__ import annotations

import numpy as np

# Rows per block in the pairwise scans; k x _BLOCK temporaries stay small.
_BLOCK = 128


def pairwise_circle_intersections(
    c1x: float,
    c1y: float,
    r1: np.ndarray,
    c2x: float,
    c2y: float,
    r2: np.ndarray,
    eps: float,
) -> np.ndarray:
    """Intersection points of every circle (c1, r1[i]) with every (c2, r2[j]).

    Centers must be distinct.  Output rows follow (i, j) scan order with the
    two roots of a crossing pair ordered lexicographically; tangent pairs
    contribute the collapsed midpoint root only.
    """
    dx = c2x - c1x
    dy = c2y - c1y
    d = np.sqrt(dx * dx + dy * dy)
    ex = dx / d
    ey = dy / d
    mey = -ey

    a1 = np.asarray(r1, dtype=np.float64)[:, None]
    a2 = np.asarray(r2, dtype=np.float64)[None, :]
    rsum = a1 + a2
    rdiff = np.abs(a1 - a2)
    crossing = (d < rsum) & (d > rdiff)
    tangent = ~crossing & ((np.abs(d - rsum) <= eps) | (np.abs(d - rdiff) <= eps))

    a = ((a1 * a1 - a2 * a2) + d * d) / (2.0 * d)
    bx = c1x + a * ex
    by = c1y + a * ey
    # Half-chord offset via the stable sorted-sides area formula; the naive
    # r1^2 - a^2 loses the root entirely for near-tangent pairs.
    hi = np.maximum(a1, a2)
    lo = np.minimum(a1, a2)
    sa = np.maximum(hi, d)
    sc = np.minimum(lo, d)
    sb = np.maximum(lo, np.minimum(d, hi))
    f1 = sa + (sb + sc)
    f2 = sc - (sa - sb)
    f3 = sc + (sa - sb)
    f4 = sa + (sb - sc)
    prod = (f1 * f2) * (f3 * f4)
    h = np.sqrt(np.where(crossing & (prod > 0.0), prod, 0.0)) / (2.0 * d)
    ox = mey * h
    oy = ex * h
    px1 = bx + ox
    py1 = by + oy
    px2 = bx - ox
    py2 = by - oy

    swap = crossing & ((px2 < px1) | ((px2 == px1) & (py2 < py1)))
    lox = np.where(swap, px2, px1)
    loy = np.where(swap, py2, py1)
    hix = np.where(swap, px1, px2)
    hiy = np.where(swap, py1, py2)

    n1 = a1.shape[0]
    n2 = a2.shape[1]
    slots = np.empty((n1, n2, 2, 2), dtype=np.float64)
    slots[:, :, 0, 0] = lox
    slots[:, :, 0, 1] = loy
    slots[:, :, 1, 0] = hix
    slots[:, :, 1, 1] = hiy
    valid = np.empty((n1, n2, 2), dtype=bool)
    valid[:, :, 0] = tangent | crossing
    valid[:, :, 1] = crossing
    return np.ascontiguousarray(slots.reshape(-1, 2)[valid.reshape(-1)])


def on_any_circle_mask(
    pts: np.ndarray, cx: float, cy: float, radii: np.ndarray, eps: float
) -> np.ndarray:
    """mask[i] is True when pts[i] lies within eps of some circle (c, radii[j])."""
    dx = pts[:, 0] - cx
    dy = pts[:, 1] - cy
    d = np.sqrt(dx * dx + dy * dy)
    k = d.shape[0]
    out = np.zeros(k, dtype=bool)
    for i0 in range(0, k, _BLOCK):
        i1 = min(i0 + _BLOCK, k)
        out[i0:i1] = np.any(np.abs(d[i0:i1, None] - radii[None, :]) <= eps, axis=1)
    return out


def band_mask(
    pts: np.ndarray,
    cx: float,
    cy: float,
    radii: np.ndarray,
    band: float,
    eps: float,
) -> np.ndarray:
    """mask[i] is True when some circle (c, radii[j]) crosses the circle
    centered at pts[i] with radius band (tangency within eps counts)."""
    lo = np.abs(radii - band) - eps
    hi = radii + band + eps
    dx = pts[:, 0] - cx
    dy = pts[:, 1] - cy
    d = np.sqrt(dx * dx + dy * dy)
    k = d.shape[0]
    out = np.zeros(k, dtype=bool)
    for i0 in range(0, k, _BLOCK):
        i1 = min(i0 + _BLOCK, k)
        dblk = d[i0:i1, None]
        out[i0:i1] = np.any((dblk >= lo[None, :]) & (dblk <= hi[None, :]), axis=1)
    return out


def residual_score(
    pts: np.ndarray, centers: np.ndarray, radii: np.ndarray
) -> np.ndarray:
    """score[i] = sum over rows g of min_j |dist(pts[i], centers[g]) - radii[g, j]|.

    Lower scores mean the point is better supported by the disclosed radii.
    """
    k = pts.shape[0]
    m = centers.shape[0]
    out = np.zeros(k, dtype=np.float64)
    for g in range(m):
        dx = pts[:, 0] - centers[g, 0]
        dy = pts[:, 1] - centers[g, 1]
        d = np.sqrt(dx * dx + dy * dy)
        row = radii[g]
        for i0 in range(0, k, _BLOCK):
            i1 = min(i0 + _BLOCK, k)
            out[i0:i1] += np.min(np.abs(d[i0:i1, None] - row[None, :]), axis=1)
    return out


def has_later_neighbor_mask(pts: np.ndarray, tau: float) -> np.ndarray:
    """mask[i] is True when some pts[j], j > i, lies within tau of pts[i]."""
    t2 = tau * tau
    k = pts.shape[0]
    out = np.zeros(k, dtype=bool)
    if k < 2:
        return out
    cols = np.arange(1, k)
    tail = pts[1:]
    for i0 in range(0, k - 1, _BLOCK):
        i1 = min(i0 + _BLOCK, k - 1)
        dx = pts[i0:i1, 0][:, None] - tail[:, 0][None, :]
        dy = pts[i0:i1, 1][:, None] - tail[:, 1][None, :]
        d2 = dx * dx + dy * dy
        later = cols[None, :] > np.arange(i0, i1)[:, None]
        out[i0:i1] = np.any(later & (d2 <= t2), axis=1)
    return out


def dedup_leaders_mask(pts: np.ndarray, tau: float) -> np.ndarray:
    """Greedy scan-order dedup: keep pts[i] unless a kept point lies within tau."""
    t2 = tau * tau
    k = pts.shape[0]
    out = np.zeros(k, dtype=bool)
    kept = np.empty((k, 2), dtype=np.float64)
    nk = 0
    for i in range(k):
        x = pts[i, 0]
        y = pts[i, 1]
        if nk:
            dx = kept[:nk, 0] - x
            dy = kept[:nk, 1] - y
            if np.any(dx * dx + dy * dy <= t2):
                continue
        kept[nk, 0] = x
        kept[nk, 1] = y
        nk += 1
        out[i] = True
    return out


def near_partner_mask(
    pts1: np.ndarray, pts2: np.ndarray, tau: float, eps: float
) -> np.ndarray:
    """mask[i] is True when some pts2[j] lies within tau of pts1[i] without
    being the same point (coordinate-wise equality within eps)."""
    t2 = tau * tau
    k = pts1.shape[0]
    out = np.zeros(k, dtype=bool)
    if k == 0 or pts2.shape[0] == 0:
        return out
    for i0 in range(0, k, _BLOCK):
        i1 = min(i0 + _BLOCK, k)
        dx = pts1[i0:i1, 0][:, None] - pts2[:, 0][None, :]
        dy = pts1[i0:i1, 1][:, None] - pts2[:, 1][None, :]
        d2 = dx * dx + dy * dy
        same = (np.abs(dx) <= eps) & (np.abs(dy) <= eps)
        out[i0:i1] = np.any(~same & (d2 <= t2), axis=1)
    return out
