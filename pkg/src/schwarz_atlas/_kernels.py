"""Hot continuation kernels: adaptive Runge-Kutta transport of solution frames.

Two kernels live here: one for the rank-one hypergeometric frame (2x2) and one
for the rank-n torus frame ((n+1)x(n+1)).  Both integrate dF/dt = B(t) F over
t in [0, 1] with Dormand-Prince 5(4) steps and per-step relative tolerance
`rtol`.

The right-hand sides are written in numpy and compiled with numba by default;
set SCHWARZ_ATLAS_NO_NUMBA=1 before import to run the same source uncompiled
(pure-numpy fallback).  benchmarks/bench_kernels.py times the two paths
against each other in separate processes.
"""

import os

import numpy as np

NUMBA_ENV_FLAG = "SCHWARZ_ATLAS_NO_NUMBA"


def _numba_requested():
    return os.environ.get(NUMBA_ENV_FLAG, "").strip().lower() not in {"1", "true", "yes"}


USING_NUMBA = False
if _numba_requested():
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# 4th-order weights (with the FSAL 7th stage)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    5179.0 / 57600.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0,
)

_MIN_STEP = 1e-13
_MAX_STEPS = 200000


def _gauss_rhs_py(alpha, beta, gamma, za, dz, t, F):
    """d/dt of the (value, derivative) frame of the hypergeometric equation."""
    z = za + t * dz
    den = z * (1.0 - z)
    b10 = alpha * beta / den
    b11 = -(gamma - (alpha + beta + 1.0) * z) / den
    out = np.empty_like(F)
    out[0, :] = dz * F[1, :]
    out[1, :] = dz * (b10 * F[0, :] + b11 * F[1, :])
    return out


def _torus_rhs_py(lz0, m, croots, coroots, k, svec, t, F):
    """d/dt of the torus jet frame along a log-linear coordinate segment.

    lz0 + t*m are the log-coordinates, croots/coroots the positive-root and
    coroot coordinate rows (complex copies), svec the constant scalar block.
    """
    n = m.shape[0]
    lz = lz0 + t * m
    tchar = np.exp(croots @ lz)
    u = (1.0 + tchar) / (1.0 - tchar)
    w = (0.5 * k) * (croots @ m) * u
    B = np.zeros((n + 1, n + 1), dtype=np.complex128)
    B[0, 1:] = -m
    B[1:, 0] = svec
    B[1:, 1:] = croots.T @ (w.reshape(-1, 1) * coroots)
    return B @ F


if USING_NUMBA:
    _gauss_rhs = njit(cache=True)(_gauss_rhs_py)
    _torus_rhs = njit(cache=True)(_torus_rhs_py)
else:
    _gauss_rhs = _gauss_rhs_py
    _torus_rhs = _torus_rhs_py


def _gauss_segment_py(alpha, beta, gamma, za, zb, F0, rtol):
    """Transport a 2x2 frame from za to zb along the straight segment.

    Returns (frame, min |det| seen at accepted steps, accumulated error
    estimate, ok flag).  ok=False signals step-size underflow near a singular
    point or a blown step budget.
    """
    F = F0.copy()
    dz = zb - za
    t = 0.0
    h = 0.1
    mindet = abs(F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0])
    errsum = 0.0
    k1 = _gauss_rhs(alpha, beta, gamma, za, dz, t, F)
    steps = 0
    while t < 1.0:
        if h > 1.0 - t:
            h = 1.0 - t
        k2 = _gauss_rhs(alpha, beta, gamma, za, dz, t + _C2 * h, F + h * (_A21 * k1))
        k3 = _gauss_rhs(alpha, beta, gamma, za, dz, t + _C3 * h,
                        F + h * (_A31 * k1 + _A32 * k2))
        k4 = _gauss_rhs(alpha, beta, gamma, za, dz, t + _C4 * h,
                        F + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = _gauss_rhs(alpha, beta, gamma, za, dz, t + _C5 * h,
                        F + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = _gauss_rhs(alpha, beta, gamma, za, dz, t + h,
                        F + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        F5 = F + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = _gauss_rhs(alpha, beta, gamma, za, dz, t + h, F5)
        F4 = F + h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        scale = 1.0
        err = 0.0
        for i in range(2):
            for j in range(2):
                mag = abs(F[i, j])
                if mag > scale:
                    scale = mag
                d = abs(F5[i, j] - F4[i, j])
                if d > err:
                    err = d
        tol = rtol * scale
        if err <= tol:
            t += h
            F = F5
            k1 = k7
            errsum += err
            det = abs(F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0])
            if det < mindet:
                mindet = det
        if err > 0.0:
            fac = 0.9 * (tol / err) ** 0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
            h *= fac
        else:
            h *= 5.0
        if h < _MIN_STEP:
            return F, mindet, errsum, False
        steps += 1
        if steps > _MAX_STEPS:
            return F, mindet, errsum, False
    return F, mindet, errsum, True


def _torus_segment_py(lz0, m, croots, coroots, k, svec, F0, rtol):
    """Transport an (n+1)x(n+1) frame along one log-linear torus segment.

    Returns (frame, accumulated error estimate, ok flag).
    """
    F = F0.copy()
    t = 0.0
    h = 0.05
    errsum = 0.0
    k1 = _torus_rhs(lz0, m, croots, coroots, k, svec, t, F)
    steps = 0
    while t < 1.0:
        if h > 1.0 - t:
            h = 1.0 - t
        k2 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + _C2 * h, F + h * (_A21 * k1))
        k3 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + _C3 * h,
                        F + h * (_A31 * k1 + _A32 * k2))
        k4 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + _C4 * h,
                        F + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + _C5 * h,
                        F + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + h,
                        F + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        F5 = F + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = _torus_rhs(lz0, m, croots, coroots, k, svec, t + h, F5)
        F4 = F + h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        scale = 1.0
        err = 0.0
        nn = F.shape[0]
        for i in range(nn):
            for j in range(nn):
                mag = abs(F[i, j])
                if mag > scale:
                    scale = mag
                d = abs(F5[i, j] - F4[i, j])
                if d > err:
                    err = d
        tol = rtol * scale
        if err <= tol:
            t += h
            F = F5
            k1 = k7
            errsum += err
        if err > 0.0:
            fac = 0.9 * (tol / err) ** 0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
            h *= fac
        else:
            h *= 5.0
        if h < _MIN_STEP:
            return F, errsum, False
        steps += 1
        if steps > _MAX_STEPS:
            return F, errsum, False
    return F, errsum, True


if USING_NUMBA:
    gauss_segment = njit(cache=True)(_gauss_segment_py)
    torus_segment = njit(cache=True)(_torus_segment_py)
else:
    gauss_segment = _gauss_segment_py
    torus_segment = _torus_segment_py
