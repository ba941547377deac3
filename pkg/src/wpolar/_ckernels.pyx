# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled grid scan for ``x a x = b`` over 2x2 Hermitian ``x``.

``x = [[p, q + i r], [q - i r, s]]``. Along the innermost ``r`` axis the
squared Frobenius residual is a quartic in ``r``; its coefficients are
formed once per ``(p, s, q)`` line and the quartic is evaluated per point.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

cnp.import_array()

ctypedef double complex cplx


cdef inline double quad_min_sq(double c0, double c1, double c2, double lo, double hi) nogil:
    # min over [lo, hi] of (c0 + c1 r + c2 r^2)^2
    cdef double v, m, r
    v = c0 + c1 * lo + c2 * lo * lo
    m = v * v
    v = c0 + c1 * hi + c2 * hi * hi
    if v * v < m:
        m = v * v
    if c2 != 0.0:
        r = -c1 / (2.0 * c2)
        if lo < r < hi:
            v = c0 + c1 * r + c2 * r * r
            if v * v < m:
                m = v * v
    return m


cdef inline double hdot(cplx x00, cplx x11, cplx x01, cplx y00, cplx y11, cplx y01) nogil:
    # Frobenius inner product of two Hermitian 2x2 matrices
    return x00.real * y00.real + x11.real * y11.real + 2.0 * (x01 * y01.conjugate()).real


def scan_hermitian_2x2(a, b, double lo, double hi, double step,
                       double c0, double c1, Py_ssize_t max_candidates=1000000):
    """Scan the grid and keep points whose residual is at most ``c0 + c1 ||x||_F``.

    Returns
    -------
    candidates : ndarray, shape (m, 4)
        ``(p, s, q, r)`` of the kept points.
    residuals : ndarray, shape (m,)
        Frobenius residual ``||x a x - b||_F`` at each kept point.
    n_points : int
    min_residual : float
        Smallest residual among the kept points (``inf`` if none).
    overflow : bool
        True if more than ``max_candidates`` points qualified (the output is truncated).
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.ascontiguousarray(a, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] B = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = <Py_ssize_t>((hi - lo) / step + 0.5) + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cand = np.empty((max_candidates, 4), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cres = np.empty(max_candidates, dtype=np.float64)
    cdef double[:, :] cv = cand
    cdef double[:] rv = cres
    cdef Py_ssize_t count = 0
    cdef bint overflow = False
    cdef double fmin = INFINITY

    cdef cplx a00 = A[0, 0], a01 = A[0, 1], a10 = A[1, 0], a11 = A[1, 1]
    cdef cplx b00 = B[0, 0], b01 = B[0, 1], b11 = B[1, 1]
    cdef cplx I = 1j
    # F = E a with E = [[0, i], [-i, 0]]
    cdef cplx f00 = I * a10, f01 = I * a11, f10 = -I * a00, f11 = -I * a01
    # D2 = E a E
    cdef cplx e00 = -I * f01, e01 = I * f00, e11 = I * f10
    cdef double k4 = hdot(e00, e11, e01, e00, e11, e01)

    cdef Py_ssize_t i, j, k, l
    cdef double p, s, q, r, base, rmax2, nmax, fcut, f, bound
    cdef cplx y00, y01, y10, y11, z00, z01, z11, d00, d01, d11
    cdef cplx g00, g01, g10, g11, h00, h01, h11
    cdef double k0, k1, k2, k3

    rmax2 = max(lo * lo, hi * hi)
    with nogil:
        for i in range(n):
            p = lo + i * step
            for j in range(n):
                s = lo + j * step
                for k in range(n):
                    q = lo + k * step
                    # D0 = X0 a X0 - b
                    y00 = p * a00 + q * a10
                    y01 = p * a01 + q * a11
                    y10 = q * a00 + s * a10
                    y11 = q * a01 + s * a11
                    z00 = y00 * p + y01 * q
                    z01 = y00 * q + y01 * s
                    z11 = y10 * q + y11 * s
                    d00 = z00 - b00
                    d01 = z01 - b01
                    d11 = z11 - b11
                    # D1 = G + G*, G = E a X0
                    g00 = f00 * p + f01 * q
                    g01 = f00 * q + f01 * s
                    g10 = f10 * p + f11 * q
                    g11 = f10 * q + f11 * s
                    h00 = g00 + g00.conjugate()
                    h11 = g11 + g11.conjugate()
                    h01 = g01 + g10.conjugate()
                    base = p * p + s * s + 2.0 * q * q
                    nmax = c0 + c1 * sqrt(base + 2.0 * rmax2)
                    fcut = nmax * nmax
                    # each diagonal entry of the residual is a real quadratic in r
                    if quad_min_sq(d00.real, h00.real, e00.real, lo, hi) > fcut:
                        continue
                    if quad_min_sq(d11.real, h11.real, e11.real, lo, hi) > fcut:
                        continue
                    k0 = hdot(d00, d11, d01, d00, d11, d01)
                    k1 = 2.0 * hdot(d00, d11, d01, h00, h11, h01)
                    k2 = hdot(h00, h11, h01, h00, h11, h01) + 2.0 * hdot(d00, d11, d01, e00, e11, e01)
                    k3 = 2.0 * hdot(h00, h11, h01, e00, e11, e01)
                    for l in range(n):
                        r = lo + l * step
                        f = (((k4 * r + k3) * r + k2) * r + k1) * r + k0
                        if f <= fcut:
                            bound = c0 + c1 * sqrt(base + 2.0 * r * r)
                            if f <= bound * bound:
                                if f < fmin:
                                    fmin = f
                                if count < max_candidates:
                                    cv[count, 0] = p
                                    cv[count, 1] = s
                                    cv[count, 2] = q
                                    cv[count, 3] = r
                                    rv[count] = sqrt(fabs(f))
                                    count += 1
                                else:
                                    overflow = True
    return cand[:count].copy(), cres[:count].copy(), n ** 4, sqrt(fabs(fmin)), bool(overflow)
