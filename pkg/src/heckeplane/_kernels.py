"""
Hot inner loops: Gaussian moment batches and Poincare lattice sums.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy
version with the same signature.  ``HECKEPLANE_BACKEND=numpy`` in the
environment forces the numpy path; otherwise numba is used when it imports.

Kernels never reduce across independent terms in a thread-dependent order:
per-term kernels write one output slot per term, and the lattice kernel
parallelises over sample points while summing each point sequentially in
index order.  Results are therefore identical for any thread count.
"""

import math
import os

import numpy as np

BACKEND_ENV = "HECKEPLANE_BACKEND"

try:
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old; avoid the warning and pick a portable layer
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(BACKEND_ENV, "numba").lower() != "numpy"


def _factorials(n):
    return np.array([math.factorial(k) for k in range(n + 1)], dtype=np.float64)


def _binomials(n):
    out = np.zeros((n + 1, n + 1), dtype=np.float64)
    for i in range(n + 1):
        for k in range(i + 1):
            out[i, k] = math.comb(i, k)
    return out


# ---------------------------------------------------------------------------
# numpy path

def moment_terms_numpy(pa, pb, pc, coef, zeta, w1, w2):
    """Batch of moments  coef_k * int P(x) exp(i pi zeta_k |x|^2 + 2 pi i <w_k, x>) dx.

    ``P`` is given in complex coordinates: sum_t pc[t] xi^pa[t] xibar^pb[t]
    with xi = x1 + i x2.  All per-term arrays have the same length.
    """
    zeta = np.asarray(zeta, dtype=np.complex128)
    w1 = np.asarray(w1, dtype=np.complex128)
    w2 = np.asarray(w2, dtype=np.complex128)
    coef = np.asarray(coef, dtype=np.complex128)
    base = np.exp(-1j * np.pi * (w1 * w1 + w2 * w2) / zeta) / (-1j * zeta)
    if len(pc) == 0:
        return np.zeros_like(base)
    mu1 = -w1 / zeta
    mu2 = -w2 / zeta
    mup = mu1 + 1j * mu2
    mum = mu1 - 1j * mu2
    s2 = 1j / (np.pi * zeta)
    dmax = int(max(np.max(pa), np.max(pb)))
    fact = _factorials(dmax)
    binom = _binomials(dmax)
    powp = [np.ones_like(mup)]
    powm = [np.ones_like(mum)]
    pows = [np.ones_like(s2)]
    for _ in range(dmax):
        powp.append(powp[-1] * mup)
        powm.append(powm[-1] * mum)
        pows.append(pows[-1] * s2)
    acc = np.zeros_like(base)
    for a, b, c in zip(pa, pb, pc):
        a = int(a)
        b = int(b)
        inner = np.zeros_like(base)
        for k in range(min(a, b) + 1):
            w = binom[a, k] * binom[b, k] * fact[k]
            inner += w * pows[k] * powp[a - k] * powm[b - k]
        acc += c * inner
    return coef * base * acc


def poincare_sums_numpy(a, b, c, d, z, weight, M):
    """For each z: sum_t (-a_t z - c_t)^(-weight) exp(2 pi i M (b_t z + d_t)/(-a_t z - c_t))."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    out = np.empty(len(z), dtype=np.complex128)
    for i, zi in enumerate(np.asarray(z, dtype=np.complex128)):
        den = -a * zi - c
        inv = 1.0 / den
        terms = inv ** weight * np.exp(2j * np.pi * M * (b * zi + d) * inv)
        out[i] = np.sum(terms)
    return out


# ---------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def moment_terms_numba(pa, pb, pc, coef, zeta, w1, w2):
        n = zeta.shape[0]
        out = np.empty(n, dtype=np.complex128)
        nt = pc.shape[0]
        dmax = 0
        for t in range(nt):
            if pa[t] > dmax:
                dmax = pa[t]
            if pb[t] > dmax:
                dmax = pb[t]
        fact = np.ones(dmax + 1)
        for k in range(1, dmax + 1):
            fact[k] = fact[k - 1] * k
        binom = np.zeros((dmax + 1, dmax + 1))
        for i in range(dmax + 1):
            binom[i, 0] = 1.0
            for k in range(1, i + 1):
                binom[i, k] = binom[i - 1, k - 1] + (binom[i - 1, k] if k < i else 0.0)
        for j in prange(n):
            zt = zeta[j]
            base = np.exp(-1j * np.pi * (w1[j] * w1[j] + w2[j] * w2[j]) / zt) / (-1j * zt)
            mu1 = -w1[j] / zt
            mu2 = -w2[j] / zt
            mup = mu1 + 1j * mu2
            mum = mu1 - 1j * mu2
            s2 = 1j / (np.pi * zt)
            powp = np.empty(dmax + 1, dtype=np.complex128)
            powm = np.empty(dmax + 1, dtype=np.complex128)
            pows = np.empty(dmax + 1, dtype=np.complex128)
            powp[0] = 1.0
            powm[0] = 1.0
            pows[0] = 1.0
            for k in range(1, dmax + 1):
                powp[k] = powp[k - 1] * mup
                powm[k] = powm[k - 1] * mum
                pows[k] = pows[k - 1] * s2
            acc = 0j
            for t in range(nt):
                a = pa[t]
                b = pb[t]
                kk = a if a < b else b
                inner = 0j
                for k in range(kk + 1):
                    inner += binom[a, k] * binom[b, k] * fact[k] * pows[k] * powp[a - k] * powm[b - k]
                acc += pc[t] * inner
            out[j] = coef[j] * base * acc
        return out

    @njit(cache=True, parallel=True)
    def poincare_sums_numba(a, b, c, d, z, weight, M):
        nz = z.shape[0]
        nt = a.shape[0]
        out = np.empty(nz, dtype=np.complex128)
        for i in prange(nz):
            zi = z[i]
            acc = 0j
            for t in range(nt):
                inv = 1.0 / (-a[t] * zi - c[t])
                p = 1.0 + 0j
                for _ in range(weight):
                    p *= inv
                acc += p * np.exp(2j * np.pi * M * (b[t] * zi + d[t]) * inv)
            out[i] = acc
        return out


def _prep_moment_args(pa, pb, pc, coef, zeta, w1, w2):
    n = np.broadcast(np.asarray(coef), np.asarray(zeta), np.asarray(w1), np.asarray(w2)).shape
    def arr(v):
        return np.ascontiguousarray(np.broadcast_to(np.asarray(v, dtype=np.complex128), n)).ravel()
    return (np.ascontiguousarray(pa, dtype=np.int64), np.ascontiguousarray(pb, dtype=np.int64),
            np.ascontiguousarray(pc, dtype=np.complex128),
            arr(coef), arr(zeta), arr(w1), arr(w2)), n


def moment_terms(pa, pb, pc, coef, zeta, w1, w2, backend=None):
    """Dispatch to the configured backend; scalar/array arguments broadcast."""
    args, shape = _prep_moment_args(pa, pb, pc, coef, zeta, w1, w2)
    use_nb = USE_NUMBA if backend is None else backend == "numba"
    if use_nb and len(args[2]) > 0:
        out = moment_terms_numba(*args)
    else:
        out = moment_terms_numpy(*args)
    return out.reshape(shape)


def poincare_sums(a, b, c, d, z, weight, M, backend=None):
    args = tuple(np.ascontiguousarray(v, dtype=np.float64) for v in (a, b, c, d))
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    use_nb = USE_NUMBA if backend is None else backend == "numba"
    if use_nb:
        return poincare_sums_numba(*args, z, int(weight), float(M))
    return poincare_sums_numpy(*args, z, int(weight), float(M))


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def set_threads(n):
    """Set the numba worker count (no-op on the numpy path)."""
    if HAVE_NUMBA and n:
        numba.set_num_threads(min(int(n), numba.config.NUMBA_NUM_THREADS))
