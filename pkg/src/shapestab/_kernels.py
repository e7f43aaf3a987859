"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The dominant inner loop of the eigenvalue oracle is the assembly of the
Fourier-Bessel collocation matrix J_k(x_i) for all integer orders k <= N at
every boundary/interior point and every trial eigenvalue.  The numba path
computes whole rows by Miller's backward recurrence; the fallback broadcasts
``scipy.special.jv``.

Set ``SHAPESTAB_PURE_NUMPY=1`` to force the fallback (also used when numba
is unavailable).  ``benchmarks/bench_kernels.py`` compares both paths.
"""

from __future__ import annotations

import os

import numpy as np
from scipy import special

__all__ = ["bessel_j_matrix", "bessel_j_matrix_numpy", "using_numba"]


def _flag_pure_numpy() -> bool:
    return os.environ.get("SHAPESTAB_PURE_NUMPY", "").strip() not in ("", "0")


def bessel_j_matrix_numpy(N: int, x: np.ndarray) -> np.ndarray:
    """J_k(x_i) for k = 0..N as an (len(x), N+1) array, scipy-backed."""
    x = np.asarray(x, dtype=float)
    return special.jv(np.arange(N + 1)[None, :], x[:, None])


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _rows(N, x, out):
        # Miller backward recurrence per point, normalized with
        # J_0(x) + 2 * sum_m J_{2m}(x) = 1.
        for i in range(x.shape[0]):
            xi = x[i]
            if xi == 0.0:
                out[i, 0] = 1.0
                for k in range(1, N + 1):
                    out[i, k] = 0.0
                continue
            M = N + 30 + int(2.0 * xi)
            if M % 2 == 1:
                M += 1
            jp1 = 0.0       # J_{k+1} (unnormalized)
            j = 1e-30       # J_k, seeded arbitrarily at k = M
            s = 0.0         # accumulates J_0 + 2*(J_2 + J_4 + ...)
            for k in range(M, 0, -1):
                jm1 = (2.0 * k / xi) * j - jp1
                jp1 = j
                j = jm1     # j is now J_{k-1}
                if (k - 1) % 2 == 0:
                    s += j if k - 1 == 0 else 2.0 * j
                if k - 1 <= N:
                    out[i, k - 1] = j
                if abs(j) > 1e250:
                    # rescale the growing solution to avoid overflow;
                    # entries k-1..N are the ones already written
                    j *= 1e-250
                    jp1 *= 1e-250
                    s *= 1e-250
                    for m in range(k - 1, N + 1):
                        out[i, m] *= 1e-250
            scale = 1.0 / s
            for m in range(N + 1):
                out[i, m] *= scale

    return _rows


_numba_rows = None
if not _flag_pure_numpy():
    try:
        _numba_rows = _make_numba_kernel()
    except ImportError:  # pragma: no cover - numba present in normal installs
        _numba_rows = None


def using_numba() -> bool:
    return _numba_rows is not None and not _flag_pure_numpy()


def bessel_j_matrix(N: int, x: np.ndarray) -> np.ndarray:
    """J_k(x_i), k = 0..N, shape (len(x), N+1); path selected by env flag."""
    x = np.ascontiguousarray(np.asarray(x, dtype=float).ravel())
    if using_numba():
        out = np.empty((x.shape[0], N + 1))
        _numba_rows(N, x, out)
        return out
    return bessel_j_matrix_numpy(N, x)
