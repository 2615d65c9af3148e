# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: symmetric power-iteration norm and diagonal sums.

Mirrors the contracts of ``toepcov._kernels_py`` (periodic two-vector Ritz
convergence checks for clustered top magnitudes); the matvec goes through
BLAS dsymv so the iteration loop runs without Python overhead.
"""

import numpy as np

from libc.math cimport fabs, hypot, sqrt
from scipy.linalg.cython_blas cimport ddot, dnrm2, dsymv

BACKEND_NAME = "compiled"

CONVERGED = 0
MAXITER = 1
ZERO_ITERATE = 2
STAGNATED = 3

cdef enum:
    REF_EVERY = 64
    REF_STABLE = 2

cdef double REF_TOL_FLOOR = 1e-9
cdef double CAP_STABLE_TOL = 1e-4
cdef double ORTHO_CUTOFF = 1e-8  # below this, pv is numerically parallel to v


cdef double _ritz_refine(const double* a, double* v, double* pv, double* w,
                         double* q, double* z, double theta, int p) noexcept:
    # Rayleigh-Ritz for A^2 on span{v, pv}; lower bound on max|eig|, never
    # below theta. q and z are scratch buffers of length p. The basis must
    # be accurately orthonormal or the 2x2 problem is meaningless, hence
    # the cutoff and the second orthogonalization sweep.
    cdef int one = 1
    cdef double alpha = 1.0, beta = 0.0
    cdef double c, nq, inv, b11, b12, b22, mid, rad, lam
    cdef int i
    c = ddot(&p, pv, &one, v, &one)
    for i in range(p):
        q[i] = pv[i] - c * v[i]
    nq = dnrm2(&p, q, &one)
    if nq < ORTHO_CUTOFF:
        return theta
    inv = 1.0 / nq
    for i in range(p):
        q[i] = q[i] * inv
    c = ddot(&p, q, &one, v, &one)
    for i in range(p):
        q[i] = q[i] - c * v[i]
    nq = dnrm2(&p, q, &one)
    if nq == 0.0:
        return theta
    inv = 1.0 / nq
    for i in range(p):
        q[i] = q[i] * inv
    dsymv("L", &p, &alpha, a, &p, q, &one, &beta, z, &one)
    b11 = ddot(&p, w, &one, w, &one)
    b12 = ddot(&p, w, &one, z, &one)
    b22 = ddot(&p, z, &one, z, &one)
    mid = 0.5 * (b11 + b22)
    rad = hypot(0.5 * (b11 - b22), b12)
    lam = mid + rad
    if lam > theta * theta:
        return sqrt(lam)
    return theta


def power_norm(const double[:, ::1] a, const double[::1] v0, double tol, long max_iter):
    """See ``toepcov._kernels_py.power_norm``; same semantics, BLAS matvec."""
    cdef int p = <int> a.shape[0]
    cdef int one = 1
    cdef double alpha = 1.0, beta = 0.0
    cdef double theta = 0.0, theta_prev = -1.0, ref_prev = -1.0
    cdef double nrm, inv, ref, ref_tol
    cdef long it = 0
    cdef int i, stable = 0
    cdef bint have_pv = 0
    if a.shape[1] != p or v0.shape[0] != p:
        raise ValueError("shape mismatch")
    if max_iter < 1:
        return 0.0, 0, MAXITER
    ref_tol = tol if tol > REF_TOL_FLOOR else REF_TOL_FLOOR

    v_arr = np.empty(p, dtype=np.float64)
    w_arr = np.empty(p, dtype=np.float64)
    pv_arr = np.empty(p, dtype=np.float64)
    q_arr = np.empty(p, dtype=np.float64)
    z_arr = np.empty(p, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef double[::1] pv = pv_arr
    cdef double[::1] q = q_arr
    cdef double[::1] z = z_arr
    cdef double* a_ptr = <double*> <void*> &a[0, 0]

    nrm = dnrm2(&p, <double*> <void*> &v0[0], &one)
    if nrm == 0.0:
        return 0.0, 0, ZERO_ITERATE
    inv = 1.0 / nrm
    for i in range(p):
        v[i] = v0[i] * inv

    # A row-major symmetric matrix seen column-major by BLAS is its own
    # transpose, so the uplo choice just selects which triangle is read.
    for it in range(1, max_iter + 1):
        dsymv("L", &p, &alpha, a_ptr, &p, &v[0], &one, &beta, &w[0], &one)
        theta = dnrm2(&p, &w[0], &one)
        if theta == 0.0:
            return 0.0, it, ZERO_ITERATE
        if theta_prev >= 0.0 and fabs(theta - theta_prev) <= tol * theta:
            if have_pv:
                theta = _ritz_refine(a_ptr, &v[0], &pv[0], &w[0], &q[0], &z[0], theta, p)
            return theta, it, CONVERGED
        if it % REF_EVERY == 0 and have_pv:
            ref = _ritz_refine(a_ptr, &v[0], &pv[0], &w[0], &q[0], &z[0], theta, p)
            if ref_prev >= 0.0 and fabs(ref - ref_prev) <= ref_tol * ref:
                stable += 1
                if stable >= REF_STABLE:
                    return ref, it, CONVERGED
            else:
                stable = 0
            ref_prev = ref
        if it == max_iter:
            break
        for i in range(p):
            pv[i] = v[i]
        have_pv = 1
        inv = 1.0 / theta
        for i in range(p):
            v[i] = w[i] * inv
        theta_prev = theta

    ref = theta
    if have_pv:
        ref = _ritz_refine(a_ptr, &v[0], &pv[0], &w[0], &q[0], &z[0], theta, p)
    if ref_prev >= 0.0 and fabs(ref - ref_prev) <= CAP_STABLE_TOL * ref:
        return ref, it, STAGNATED
    return ref, it, MAXITER


def diag_sums(const double[:, ::1] a):
    """Sums over the subdiagonals s - t = r, r = 0..p-1."""
    cdef Py_ssize_t p = a.shape[0]
    cdef Py_ssize_t r, i
    cdef double acc
    if a.shape[1] != p:
        raise ValueError("matrix must be square")
    out_arr = np.empty(p, dtype=np.float64)
    cdef double[::1] out = out_arr
    for r in range(p):
        acc = 0.0
        for i in range(p - r):
            acc += a[i + r, i]
        out[r] = acc
    return out_arr
