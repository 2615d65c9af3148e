"""Pure-numpy implementations of the hot kernels.

Same call contracts as the compiled extension ``toepcov._kernels``; the
active implementation is chosen in :mod:`toepcov._backend`.
"""

import math

import numpy as np

BACKEND_NAME = "python"

# power_norm status codes (shared with the compiled kernel)
CONVERGED = 0
MAXITER = 1
ZERO_ITERATE = 2
STAGNATED = 3

# Symmetric Toeplitz noise has near-paired top eigenvalues (even spectral
# density), so the raw magnitude estimate can creep by more than tol per
# step for ~1/splitting iterations. The two-vector Ritz value over the last
# two iterates is immune to that pair splitting and converges at the gap to
# the *third* magnitude, so convergence is also declared when the Ritz
# value is stable across consecutive checks.
REF_EVERY = 64        # iterations between Ritz checks (1 extra matvec each)
REF_STABLE = 2        # consecutive stable checks required
REF_TOL_FLOOR = 1e-9  # relative stability tolerance floor for Ritz checks
CAP_STABLE_TOL = 1e-4  # acceptable Ritz drift per check window at the cap


ORTHO_CUTOFF = 1e-8  # below this, pv is numerically parallel to v


def _ritz_refine(a, v, pv, w, theta):
    # Rayleigh-Ritz for A^2 on span{v, pv}: always a lower bound on
    # max|eig| and never below theta. The basis must be accurately
    # orthonormal or the 2x2 problem is meaningless, hence the cutoff and
    # the second orthogonalization sweep.
    if pv is None:
        return theta
    q = pv - float(pv @ v) * v
    nq = float(np.linalg.norm(q))
    if nq < ORTHO_CUTOFF:
        return theta
    q = q / nq
    q = q - float(q @ v) * v
    nq = float(np.linalg.norm(q))
    if nq == 0.0:
        return theta
    q = q / nq
    z = a @ q
    b11 = float(w @ w)
    b12 = float(w @ z)
    b22 = float(z @ z)
    mid = 0.5 * (b11 + b22)
    rad = math.hypot(0.5 * (b11 - b22), b12)
    lam = mid + rad
    return math.sqrt(lam) if lam > theta * theta else theta


def power_norm(a, v0, tol, max_iter):
    """Largest eigenvalue magnitude of a symmetric matrix by power iteration.

    Tracks the magnitude estimate ``theta_k = ||A v_k||`` (the square root
    of the Rayleigh quotient of ``A^2``), which converges to ``max|eig|``
    even when eigenvalues of opposite sign share the top magnitude. No
    deflation; a two-vector Ritz refinement runs every ``REF_EVERY``
    iterations and at every exit.

    Parameters
    ----------
    a : (p, p) float64 ndarray
        Symmetric matrix (symmetry is the caller's responsibility).
    v0 : (p,) float64 ndarray
        Nonzero start vector; normalized internally.
    tol : float
        Primary stop: relative change of theta between iterations <= tol.
        The periodic Ritz check uses max(tol, REF_TOL_FLOOR).
    max_iter : int
        Iteration cap.

    Returns
    -------
    (theta, iterations, status)
        status CONVERGED: primary tolerance met, or the Ritz value was
        stable over REF_STABLE consecutive checks;
        STAGNATED: cap reached with the Ritz value drifting less than
        CAP_STABLE_TOL relative per check window (theta is a lower
        estimate, accurate to about that drift);
        MAXITER: cap reached while still moving; ZERO_ITERATE: the iterate
        hit the kernel of ``a`` exactly.
    """
    if max_iter < 1:
        return 0.0, 0, MAXITER
    nrm = float(np.linalg.norm(v0))
    if nrm == 0.0:
        return 0.0, 0, ZERO_ITERATE
    ref_tol = max(tol, REF_TOL_FLOOR)
    v = v0 / nrm
    pv = None
    w = None
    theta = 0.0
    theta_prev = -1.0
    ref_prev = -1.0
    stable = 0
    it = 0
    for it in range(1, max_iter + 1):
        w = a @ v
        theta = float(np.linalg.norm(w))
        if theta == 0.0:
            return 0.0, it, ZERO_ITERATE
        if theta_prev >= 0.0 and abs(theta - theta_prev) <= tol * theta:
            return _ritz_refine(a, v, pv, w, theta), it, CONVERGED
        if it % REF_EVERY == 0 and pv is not None:
            ref = _ritz_refine(a, v, pv, w, theta)
            if ref_prev >= 0.0 and abs(ref - ref_prev) <= ref_tol * ref:
                stable += 1
                if stable >= REF_STABLE:
                    return ref, it, CONVERGED
            else:
                stable = 0
            ref_prev = ref
        if it == max_iter:
            break
        pv = v
        v = w / theta
        theta_prev = theta
    ref = _ritz_refine(a, v, pv, w, theta)
    if ref_prev >= 0.0 and abs(ref - ref_prev) <= CAP_STABLE_TOL * ref:
        return ref, it, STAGNATED
    return ref, it, MAXITER


def diag_sums(a):
    """Sums of the entries of ``a`` along each subdiagonal.

    Returns ``out`` of length p with ``out[r] = sum_{s-t=r} a[s, t]``.
    """
    p = a.shape[0]
    return np.array([a.diagonal(-r).sum() for r in range(p)])
