"""Dense numeric kernels, JIT-compiled with a pure numpy fallback.

The one numerically hot loop in the package is the pivoted orthonormalization
of Gram matrices (pivoted Cholesky with greedy diagonal pivoting). The
environment variable ``CUNTZR_BACKEND`` selects the implementation:

* ``numpy``  - always run the vectorized numpy path,
* ``numba``  - always run the compiled kernel (import error if unavailable),
* ``auto``   - default; compiled kernel for matrices large enough to
  amortize the JIT cost, numpy below that.

For a Hermitian positive semidefinite G with G[i, j] = <v_i, v_j> the
factorization returns, up to the numerical rank r:

    pivots p_0 .. p_{r-1}   greedily chosen column indices,
    coords M (r x N) with   M[k, i] = <q_k, v_i>,
    combos C (r x N) with   q_k = sum_i C[k, i] v_i,

where q_0 .. q_{r-1} is the orthonormal sequence Gram-Schmidt produces from
the pivot columns. Identities callers rely on (and tests check):
G = M^H M up to the rank cutoff, M = conj(C) @ G, conj(C) @ G @ C^T = I_r.

Both backends run the same pivot-selection rule on the same residual
diagonal, so they agree on pivots and rank; coefficients agree to rounding.
"""

from __future__ import annotations

import os

import numpy as np

RANK_TOL = 1e-10       # residual-diagonal cutoff for rank decisions
_MIN_NUMBA_SIZE = 64   # below this the JIT overhead dominates the work

_MODE = os.environ.get("CUNTZR_BACKEND", "auto").strip().lower() or "auto"
if _MODE not in ("auto", "numpy", "numba"):
    raise ValueError(
        f"CUNTZR_BACKEND must be auto, numpy, or numba, got {_MODE!r}"
    )

_HAVE_NUMBA = False
if _MODE != "numpy":
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _MODE == "numba":
            raise


def _factor_numpy(G, tol):
    N = G.shape[0]
    d = np.real(np.diag(G)).copy()
    M = np.zeros((N, N), dtype=complex)
    C = np.zeros((N, N), dtype=complex)
    piv = np.empty(N, dtype=np.int64)
    r = 0
    while r < N:
        p = int(np.argmax(d))
        if d[p] <= tol:
            break
        rk = np.sqrt(d[p])
        if r:
            row = G[p] - M[:r, p].conj() @ M[:r]
            crow = -(M[:r, p] @ C[:r])
            crow[p] += 1.0
        else:
            row = G[p].copy()
            crow = np.zeros(N, dtype=complex)
            crow[p] = 1.0
        M[r] = row / rk
        C[r] = crow / rk
        d -= np.abs(M[r]) ** 2
        d[p] = -1.0
        piv[r] = p
        r += 1
    return r, piv[:r].copy(), M[:r].copy(), C[:r].copy()


def _factor_loops(G, tol):
    # the per-step reductions are matrix-vector products over the rows built
    # so far; np.dot keeps them on BLAS whether compiled or not
    N = G.shape[0]
    d = np.empty(N, dtype=np.float64)
    for i in range(N):
        d[i] = G[i, i].real
    M = np.zeros((N, N), dtype=np.complex128)
    C = np.zeros((N, N), dtype=np.complex128)
    piv = np.empty(N, dtype=np.int64)
    r = 0
    for _ in range(N):
        p = -1
        best = tol
        for i in range(N):
            if d[i] > best:
                best = d[i]
                p = i
        if p < 0:
            break
        rk = np.sqrt(best)
        row = G[p].copy()
        crow = np.zeros(N, dtype=np.complex128)
        if r > 0:
            mp = np.empty(r, dtype=np.complex128)
            cp = np.empty(r, dtype=np.complex128)
            for j in range(r):
                mp[j] = np.conj(M[j, p])
                cp[j] = M[j, p]
            row -= np.dot(mp, M[:r])
            crow -= np.dot(cp, C[:r])
        crow[p] += 1.0
        for i in range(N):
            m = row[i] / rk
            M[r, i] = m
            d[i] -= m.real * m.real + m.imag * m.imag
            C[r, i] = crow[i] / rk
        d[p] = -1.0
        piv[r] = p
        r += 1
    return r, piv, M, C


if _HAVE_NUMBA:
    _factor_numba = njit(cache=True)(_factor_loops)


def backend_mode():
    """The configured mode: auto, numpy, or numba."""
    return _MODE


def active_backend(size=None):
    """The backend that runs for a matrix of the given size (or in general)."""
    if _MODE == "numpy" or not _HAVE_NUMBA:
        return "numpy"
    if _MODE == "numba":
        return "numba"
    if size is None:
        return "numba" if _HAVE_NUMBA else "numpy"
    return "numba" if size >= _MIN_NUMBA_SIZE else "numpy"


def orthonormalize_gram(G, tol=RANK_TOL, force=None):
    """Pivoted orthonormalization of a Hermitian PSD Gram matrix.

    Returns (rank, pivots, coords, combos) as described in the module
    docstring. ``force`` overrides the backend choice for benchmarks.
    """
    G = np.ascontiguousarray(G, dtype=np.complex128)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {G.shape}")
    which = force or active_backend(G.shape[0])
    if which == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        r, piv, M, C = _factor_numba(G, float(tol))
        return r, piv[:r].copy(), M[:r].copy(), C[:r].copy()
    r, piv, M, C = _factor_numpy(G, float(tol))
    return r, piv, M, C
