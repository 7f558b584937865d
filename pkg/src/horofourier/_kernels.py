"""Quadrature sweep kernels shared by the transform machinery.

Every kernel exists twice: a numba-compiled version and a plain numpy twin
with identical semantics.  The public wrappers dispatch on the module flag
from _accel (overridable per call for benchmarking and testing).

Phase accumulation along a uniform lambda grid uses the rotation recurrence
acc *= exp(-1j*dlam*A), which costs one complex multiply per node instead of
a transcendental; the multiplicative drift after n steps is O(n*eps) and the
grids used here keep n below a few thousand.
"""

import numpy as np

from ._accel import USE_JIT, njit, prange

__all__ = ["forward_sweep", "inverse_sweep", "direct_eval"]


# ---------------------------------------------------------------------------
# numba implementations

@njit(cache=True, parallel=True)
def _forward_sweep_nb(base, A, lam0, dlam, nlam):
    npts, nb = A.shape
    out = np.zeros((nb, nlam), dtype=np.complex128)
    for m in prange(nb):
        row = out[m]
        p0 = 0
        # eight independent recurrence chains keep the multiply pipeline full
        while p0 + 8 <= npts:
            a0 = base[p0 + 0, m] * np.exp(-1j * lam0 * A[p0 + 0, m])
            a1 = base[p0 + 1, m] * np.exp(-1j * lam0 * A[p0 + 1, m])
            a2 = base[p0 + 2, m] * np.exp(-1j * lam0 * A[p0 + 2, m])
            a3 = base[p0 + 3, m] * np.exp(-1j * lam0 * A[p0 + 3, m])
            a4 = base[p0 + 4, m] * np.exp(-1j * lam0 * A[p0 + 4, m])
            a5 = base[p0 + 5, m] * np.exp(-1j * lam0 * A[p0 + 5, m])
            a6 = base[p0 + 6, m] * np.exp(-1j * lam0 * A[p0 + 6, m])
            a7 = base[p0 + 7, m] * np.exp(-1j * lam0 * A[p0 + 7, m])
            z0 = np.exp(-1j * dlam * A[p0 + 0, m])
            z1 = np.exp(-1j * dlam * A[p0 + 1, m])
            z2 = np.exp(-1j * dlam * A[p0 + 2, m])
            z3 = np.exp(-1j * dlam * A[p0 + 3, m])
            z4 = np.exp(-1j * dlam * A[p0 + 4, m])
            z5 = np.exp(-1j * dlam * A[p0 + 5, m])
            z6 = np.exp(-1j * dlam * A[p0 + 6, m])
            z7 = np.exp(-1j * dlam * A[p0 + 7, m])
            for t in range(nlam):
                row[t] += ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7))
                a0 *= z0
                a1 *= z1
                a2 *= z2
                a3 *= z3
                a4 *= z4
                a5 *= z5
                a6 *= z6
                a7 *= z7
            p0 += 8
        for p in range(p0, npts):
            acc = base[p, m] * np.exp(-1j * lam0 * A[p, m])
            z = np.exp(-1j * dlam * A[p, m])
            for t in range(nlam):
                row[t] += acc
                acc *= z
    return out.T.copy()


@njit(cache=True, parallel=True)
def _inverse_sweep_nb(wphiT, A, lam0, dlam, rho):
    nb, nlam = wphiT.shape
    nx = A.shape[0]
    out = np.zeros(nx, dtype=np.complex128)
    for x in prange(nx):
        total = 0.0 + 0.0j
        m0 = 0
        while m0 + 4 <= nb:
            e0 = np.exp((1j * lam0 + rho) * A[x, m0 + 0])
            e1 = np.exp((1j * lam0 + rho) * A[x, m0 + 1])
            e2 = np.exp((1j * lam0 + rho) * A[x, m0 + 2])
            e3 = np.exp((1j * lam0 + rho) * A[x, m0 + 3])
            z0 = np.exp(1j * dlam * A[x, m0 + 0])
            z1 = np.exp(1j * dlam * A[x, m0 + 1])
            z2 = np.exp(1j * dlam * A[x, m0 + 2])
            z3 = np.exp(1j * dlam * A[x, m0 + 3])
            s0 = 0.0 + 0.0j
            s1 = 0.0 + 0.0j
            s2 = 0.0 + 0.0j
            s3 = 0.0 + 0.0j
            r0 = wphiT[m0 + 0]
            r1 = wphiT[m0 + 1]
            r2 = wphiT[m0 + 2]
            r3 = wphiT[m0 + 3]
            for t in range(nlam):
                s0 += r0[t] * e0
                s1 += r1[t] * e1
                s2 += r2[t] * e2
                s3 += r3[t] * e3
                e0 *= z0
                e1 *= z1
                e2 *= z2
                e3 *= z3
            total += (s0 + s1) + (s2 + s3)
            m0 += 4
        for m in range(m0, nb):
            e = np.exp((1j * lam0 + rho) * A[x, m])
            z = np.exp(1j * dlam * A[x, m])
            s = 0.0 + 0.0j
            for t in range(nlam):
                s += wphiT[m, t] * e
                e *= z
            total += s
        out[x] = total
    return out


@njit(cache=True, parallel=True)
def _direct_eval_nb(base, A, lams):
    npts, nb = A.shape
    nl = lams.shape[0]
    out = np.empty((nl, nb), dtype=np.complex128)
    for m in prange(nb):
        for t in range(nl):
            lam = lams[t]
            s = 0.0 + 0.0j
            for p in range(npts):
                s += base[p, m] * np.exp(-1j * lam * A[p, m])
            out[t, m] = s
    return out


# ---------------------------------------------------------------------------
# numpy twins

def _forward_sweep_np(base, A, lam0, dlam, nlam):
    acc = base * np.exp(-1j * lam0 * A)
    z = np.exp(-1j * dlam * A)
    out = np.empty((nlam, A.shape[1]), dtype=np.complex128)
    for t in range(nlam):
        out[t] = acc.sum(axis=0)
        acc *= z
    return out


def _inverse_sweep_np(wphiT, A, lam0, dlam, rho):
    nlam = wphiT.shape[1]
    e = np.exp((1j * lam0 + rho) * A)
    z = np.exp(1j * dlam * A)
    out = np.zeros(A.shape[0], dtype=np.complex128)
    for t in range(nlam):
        out += e @ wphiT[:, t]
        e *= z
    return out


def _direct_eval_np(base, A, lams):
    out = np.empty((lams.shape[0], A.shape[1]), dtype=np.complex128)
    for t, lam in enumerate(lams):
        out[t] = (base * np.exp(-1j * lam * A)).sum(axis=0)
    return out


# ---------------------------------------------------------------------------
# dispatching wrappers

def _pick(jit_fn, np_fn, use_jit):
    if use_jit is None:
        use_jit = USE_JIT
    return jit_fn if use_jit else np_fn


def forward_sweep(base, A, lam0, dlam, nlam, use_jit=None):
    """out[t, m] = sum_p base[p, m] * exp(-1j*(lam0 + t*dlam)*A[p, m])."""
    base = np.ascontiguousarray(base, dtype=np.complex128)
    A = np.ascontiguousarray(A, dtype=np.float64)
    if base.shape != A.shape:
        raise ValueError("base and A must have identical shapes")
    fn = _pick(_forward_sweep_nb, _forward_sweep_np, use_jit)
    return fn(base, A, float(lam0), float(dlam), int(nlam))


def inverse_sweep(wphi, A, lam0, dlam, rho, use_jit=None):
    """out[x] = sum_{t,m} wphi[t, m] * exp((1j*(lam0+t*dlam) + rho)*A[x, m])."""
    wphiT = np.ascontiguousarray(np.asarray(wphi, dtype=np.complex128).T)
    A = np.ascontiguousarray(A, dtype=np.float64)
    if wphiT.shape[0] != A.shape[1]:
        raise ValueError("boundary axes of wphi and A disagree")
    fn = _pick(_inverse_sweep_nb, _inverse_sweep_np, use_jit)
    return fn(wphiT, A, float(lam0), float(dlam), float(rho))


def direct_eval(base, A, lams, use_jit=None):
    """out[t, m] = sum_p base[p, m] * exp(-1j*lams[t]*A[p, m]) for scattered lams."""
    base = np.ascontiguousarray(base, dtype=np.complex128)
    A = np.ascontiguousarray(A, dtype=np.float64)
    lams = np.ascontiguousarray(np.atleast_1d(lams), dtype=np.complex128)
    if base.shape != A.shape:
        raise ValueError("base and A must have identical shapes")
    fn = _pick(_direct_eval_nb, _direct_eval_np, use_jit)
    return fn(base, A, lams)
