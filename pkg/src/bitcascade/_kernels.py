"""Hot numeric kernels with numba and pure-numpy implementations.

Every kernel exists twice: a numba ``@njit`` build and a numpy build with
identical semantics.  The active implementation is chosen once at import
time; set ``BITCASCADE_DISABLE_NUMBA=1`` to force the numpy path (numba is
also skipped automatically when it cannot be imported).  Both variants stay
importable so tests and ``benchmarks/bench_kernels.py`` can compare them.

Binary feature matrices and bitplanes are uint8 arrays of 0/1; weights are
float64.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("BITCASCADE_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in {"1", "true", "yes", "on"}

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

USING_NUMBA = NUMBA_AVAILABLE and not NUMBA_DISABLED


# ---------------------------------------------------------------------------
# correlation logits: valid cross-correlation of binary planes with kernels
# ---------------------------------------------------------------------------

def nonzero_taps(kernels: np.ndarray):
    """Flatten an (K, L, L) kernel stack into arrays of its nonzero taps.

    Zero taps contribute exactly 0.0 to every accumulation, so skipping
    them leaves results bit-identical while making sparse kernels cheap.
    Returns (plane_idx, row_off, col_off, weight) int64/float64 arrays.
    """
    k, i, j = np.nonzero(kernels)
    return (k.astype(np.int64), i.astype(np.int64), j.astype(np.int64),
            np.ascontiguousarray(kernels[k, i, j], dtype=np.float64))


def correlate_logits_numpy(planes, kernels, bias):
    """Valid cross-correlation, accumulated tap by tap with numpy slices."""
    K, H, W = planes.shape
    L = kernels.shape[1]
    ho, wo = H - L + 1, W - L + 1
    out = np.full((ho, wo), bias, dtype=np.float64)
    tk, ti, tj, tw = nonzero_taps(kernels)
    for t in range(tk.shape[0]):
        out += tw[t] * planes[tk[t], ti[t]:ti[t] + ho, tj[t]:tj[t] + wo]
    return out


def _correlate_logits_impl(planes, tk, ti, tj, tw, bias, ho, wo):
    out = np.empty((ho, wo), dtype=np.float64)
    ntaps = tk.shape[0]
    for r in range(ho):
        for c in range(wo):
            s = bias
            for t in range(ntaps):
                s += tw[t] * planes[tk[t], r + ti[t], c + tj[t]]
            out[r, c] = s
    return out


if NUMBA_AVAILABLE:
    _correlate_logits_numba = njit(cache=True)(_correlate_logits_impl)

    def correlate_logits_numba(planes, kernels, bias):
        K, H, W = planes.shape
        L = kernels.shape[1]
        tk, ti, tj, tw = nonzero_taps(kernels)
        return _correlate_logits_numba(
            np.ascontiguousarray(planes), tk, ti, tj, tw,
            float(bias), H - L + 1, W - L + 1)


# ---------------------------------------------------------------------------
# binary design-matrix products (features are 0/1 uint8, shape (M, P))
# ---------------------------------------------------------------------------

def binary_matvec_numpy(feats, w, bias):
    """logits = feats @ w + bias without mutating the uint8 features."""
    return feats.astype(np.float64) @ w + bias


def binary_rmatvec_numpy(feats, r):
    """Weight-space reduction feats.T @ r as float64."""
    return feats.astype(np.float64).T @ r


def _binary_matvec_impl(feats, w, bias):
    m, p = feats.shape
    out = np.empty(m, dtype=np.float64)
    for i in range(m):
        s = bias
        for j in range(p):
            s += w[j] * feats[i, j]
        out[i] = s
    return out


def _binary_rmatvec_impl(feats, r):
    m, p = feats.shape
    out = np.zeros(p, dtype=np.float64)
    for i in range(m):
        ri = r[i]
        if ri != 0.0:
            for j in range(p):
                out[j] += ri * feats[i, j]
    return out


if NUMBA_AVAILABLE:
    _binary_matvec_numba = njit(cache=True)(_binary_matvec_impl)
    _binary_rmatvec_numba = njit(cache=True)(_binary_rmatvec_impl)

    def binary_matvec_numba(feats, w, bias):
        return _binary_matvec_numba(np.ascontiguousarray(feats),
                                    np.ascontiguousarray(w), float(bias))

    def binary_rmatvec_numba(feats, r):
        return _binary_rmatvec_numba(np.ascontiguousarray(feats),
                                     np.ascontiguousarray(r))


if USING_NUMBA:
    correlate_logits = correlate_logits_numba
    binary_matvec = binary_matvec_numba
    binary_rmatvec = binary_rmatvec_numba
else:
    correlate_logits = correlate_logits_numpy
    binary_matvec = binary_matvec_numpy
    binary_rmatvec = binary_rmatvec_numpy
