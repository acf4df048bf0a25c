# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Bit-for-bit equivalent to ``_reference``: same formulas, same operation
order, and the extension is built with -ffp-contract=off so the C compiler
cannot fuse multiply-adds.  Scans short-circuit on the first hit, which is
where the speedup over the vectorized fallback comes from.
"""

from libc.math cimport fabs, sqrt

import numpy as np


def pairwise_circle_intersections(
    double c1x,
    double c1y,
    double[::1] r1,
    double c2x,
    double c2y,
    double[::1] r2,
    double eps,
):
    cdef double dx = c2x - c1x
    cdef double dy = c2y - c1y
    cdef double d = sqrt(dx * dx + dy * dy)
    cdef double ex = dx / d
    cdef double ey = dy / d
    cdef double mey = -ey
    cdef double dd = d * d
    cdef double twod = 2.0 * d

    cdef Py_ssize_t n1 = r1.shape[0]
    cdef Py_ssize_t n2 = r2.shape[0]
    out = np.empty((2 * n1 * n2, 2), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t cnt = 0

    cdef Py_ssize_t i, j
    cdef double ra, rb, rsum, rdiff, a, bx, by, h, ox, oy
    cdef double hi, lo, sa, sb, sc, sm, f1, f2, f3, f4, prod
    cdef double px1, py1, px2, py2
    cdef bint tangent, crossing, swap
    with nogil:
        for i in range(n1):
            ra = r1[i]
            for j in range(n2):
                rb = r2[j]
                rsum = ra + rb
                rdiff = fabs(ra - rb)
                crossing = d < rsum and d > rdiff
                tangent = (not crossing) and (
                    fabs(d - rsum) <= eps or fabs(d - rdiff) <= eps
                )
                if not (tangent or crossing):
                    continue
                a = ((ra * ra - rb * rb) + dd) / twod
                bx = c1x + a * ex
                by = c1y + a * ey
                if tangent:
                    o[cnt, 0] = bx
                    o[cnt, 1] = by
                    cnt += 1
                    continue
                # Stable sorted-sides area formula for the half-chord offset.
                hi = ra if ra >= rb else rb
                lo = ra if ra < rb else rb
                sa = hi if hi >= d else d
                sc = lo if lo < d else d
                sm = d if d <= hi else hi
                sb = lo if lo >= sm else sm
                f1 = sa + (sb + sc)
                f2 = sc - (sa - sb)
                f3 = sc + (sa - sb)
                f4 = sa + (sb - sc)
                prod = (f1 * f2) * (f3 * f4)
                h = sqrt(prod) / twod if prod > 0.0 else 0.0
                ox = mey * h
                oy = ex * h
                px1 = bx + ox
                py1 = by + oy
                px2 = bx - ox
                py2 = by - oy
                swap = px2 < px1 or (px2 == px1 and py2 < py1)
                if swap:
                    o[cnt, 0] = px2
                    o[cnt, 1] = py2
                    o[cnt + 1, 0] = px1
                    o[cnt + 1, 1] = py1
                else:
                    o[cnt, 0] = px1
                    o[cnt, 1] = py1
                    o[cnt + 1, 0] = px2
                    o[cnt + 1, 1] = py2
                cnt += 2
    return out[:cnt].copy()


def on_any_circle_mask(
    double[:, ::1] pts, double cx, double cy, double[::1] radii, double eps
):
    cdef Py_ssize_t k = pts.shape[0]
    cdef Py_ssize_t n = radii.shape[0]
    mask = np.zeros(k, dtype=np.uint8)
    cdef unsigned char[::1] m = mask
    cdef Py_ssize_t i, j
    cdef double dx, dy, d
    with nogil:
        for i in range(k):
            dx = pts[i, 0] - cx
            dy = pts[i, 1] - cy
            d = sqrt(dx * dx + dy * dy)
            for j in range(n):
                if fabs(d - radii[j]) <= eps:
                    m[i] = 1
                    break
    return mask.view(np.bool_)


def band_mask(
    double[:, ::1] pts,
    double cx,
    double cy,
    double[::1] radii,
    double band,
    double eps,
):
    cdef Py_ssize_t k = pts.shape[0]
    cdef Py_ssize_t n = radii.shape[0]
    lo_arr = np.empty(n, dtype=np.float64)
    hi_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] lo = lo_arr
    cdef double[::1] hi = hi_arr
    mask = np.zeros(k, dtype=np.uint8)
    cdef unsigned char[::1] m = mask
    cdef Py_ssize_t i, j
    cdef double dx, dy, d
    with nogil:
        for j in range(n):
            lo[j] = fabs(radii[j] - band) - eps
            hi[j] = (radii[j] + band) + eps
        for i in range(k):
            dx = pts[i, 0] - cx
            dy = pts[i, 1] - cy
            d = sqrt(dx * dx + dy * dy)
            for j in range(n):
                if d >= lo[j] and d <= hi[j]:
                    m[i] = 1
                    break
    return mask.view(np.bool_)


def residual_score(
    double[:, ::1] pts, double[:, ::1] centers, double[:, ::1] radii
):
    cdef Py_ssize_t k = pts.shape[0]
    cdef Py_ssize_t mrows = centers.shape[0]
    cdef Py_ssize_t n = radii.shape[1]
    out = np.zeros(k, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t g, i, j
    cdef double cx, cy, dx, dy, d, best, r
    with nogil:
        for g in range(mrows):
            cx = centers[g, 0]
            cy = centers[g, 1]
            for i in range(k):
                dx = pts[i, 0] - cx
                dy = pts[i, 1] - cy
                d = sqrt(dx * dx + dy * dy)
                best = fabs(d - radii[g, 0])
                for j in range(1, n):
                    r = fabs(d - radii[g, j])
                    if r < best:
                        best = r
                o[i] += best
    return out


def has_later_neighbor_mask(double[:, ::1] pts, double tau):
    cdef Py_ssize_t k = pts.shape[0]
    cdef double t2 = tau * tau
    mask = np.zeros(k, dtype=np.uint8)
    cdef unsigned char[::1] m = mask
    cdef Py_ssize_t i, j
    cdef double x, y, dx, dy
    with nogil:
        for i in range(k - 1):
            x = pts[i, 0]
            y = pts[i, 1]
            for j in range(i + 1, k):
                dx = x - pts[j, 0]
                dy = y - pts[j, 1]
                if dx * dx + dy * dy <= t2:
                    m[i] = 1
                    break
    return mask.view(np.bool_)


def dedup_leaders_mask(double[:, ::1] pts, double tau):
    cdef Py_ssize_t k = pts.shape[0]
    cdef double t2 = tau * tau
    mask = np.zeros(k, dtype=np.uint8)
    cdef unsigned char[::1] m = mask
    kept_arr = np.empty((k, 2), dtype=np.float64)
    cdef double[:, ::1] kept = kept_arr
    cdef Py_ssize_t i, j, nk = 0
    cdef double x, y, dx, dy
    cdef bint near
    with nogil:
        for i in range(k):
            x = pts[i, 0]
            y = pts[i, 1]
            near = False
            for j in range(nk):
                dx = kept[j, 0] - x
                dy = kept[j, 1] - y
                if dx * dx + dy * dy <= t2:
                    near = True
                    break
            if near:
                continue
            kept[nk, 0] = x
            kept[nk, 1] = y
            nk += 1
            m[i] = 1
    return mask.view(np.bool_)


def near_partner_mask(
    double[:, ::1] pts1, double[:, ::1] pts2, double tau, double eps
):
    cdef Py_ssize_t k1 = pts1.shape[0]
    cdef Py_ssize_t k2 = pts2.shape[0]
    cdef double t2 = tau * tau
    mask = np.zeros(k1, dtype=np.uint8)
    cdef unsigned char[::1] m = mask
    cdef Py_ssize_t i, j
    cdef double x, y, dx, dy
    cdef bint same
    with nogil:
        for i in range(k1):
            x = pts1[i, 0]
            y = pts1[i, 1]
            for j in range(k2):
                dx = x - pts2[j, 0]
                dy = y - pts2[j, 1]
                same = fabs(dx) <= eps and fabs(dy) <= eps
                if (not same) and dx * dx + dy * dy <= t2:
                    m[i] = 1
                    break
    return mask.view(np.bool_)
