# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the four-point hyperbolicity defect.

Distances come in as int64; all Gromov products are kept doubled
(2*(y|z)_x is an integer), so the arithmetic stays exact.  The returned
value is the maximal doubled defect over the requested quadruples.
"""

import numpy as np


def max_defect2_exhaustive(long long[:, :] d):
    """Max over all ordered quadruples (x, y, z, w) of
    min(2(y|w)_x, 2(w|z)_x) - 2(y|z)_x."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t x, y, z, w
    cdef long long best = 0, gyz, gyw, gwz, m
    cdef long long[:, :] gp2 = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                gp2[y, z] = d[x, y] + d[x, z] - d[y, z]
        for y in range(n):
            for z in range(n):
                gyz = gp2[y, z]
                for w in range(n):
                    gyw = gp2[y, w]
                    gwz = gp2[w, z]
                    m = gyw if gyw < gwz else gwz
                    if m - gyz > best:
                        best = m - gyz
    return best


def max_defect2_quadruples(long long[:, :] d,
                           long long[:] xs, long long[:] ys,
                           long long[:] zs, long long[:] ws):
    """Max doubled defect over the given quadruple index arrays."""
    cdef Py_ssize_t k, n = xs.shape[0]
    cdef Py_ssize_t x, y, z, w
    cdef long long best = 0, gyz, gyw, gwz, m
    for k in range(n):
        x = xs[k]; y = ys[k]; z = zs[k]; w = ws[k]
        gyz = d[x, y] + d[x, z] - d[y, z]
        gyw = d[x, y] + d[x, w] - d[y, w]
        gwz = d[x, w] + d[x, z] - d[w, z]
        m = gyw if gyw < gwz else gwz
        if m - gyz > best:
            best = m - gyz
    return best
