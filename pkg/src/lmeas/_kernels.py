"""Brute-force subset-enumeration kernels.

These back the definitional-supremum oracles on finite atom spaces (up to
2^20 subsets).  Rational weights are scaled to a common denominator, so the
kernels work on integers and stay exact.  The numba path is used when numba
imports and ``LMEAS_NUMBA`` is not "0"; otherwise (or when int64 could
overflow) the pure-numpy path runs, on object arrays of Python ints if needed.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

try:
    if os.environ.get("LMEAS_NUMBA", "1") == "0":
        raise ImportError
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

INT64_SAFE = 1 << 62


def backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"


def scale_rows(rows):
    """Rational matrix -> (integer matrix, common denominator, fits_int64)."""
    den = 1
    for row in rows:
        for q in row:
            den = math.lcm(den, Fraction(q).denominator)
    ints = [[int(Fraction(q) * den) for q in row] for row in rows]
    total = sum(abs(v) for row in ints for v in row)
    fits = total < INT64_SAFE
    arr = np.array(ints, dtype=np.int64 if fits else object)
    return arr, den, fits


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _subset_sums_nb(W):
    n, d = W.shape
    out = np.zeros((1 << n, d), dtype=np.int64)
    for mask in range(1, 1 << n):
        low = mask & (-mask)
        i = 0
        while (low >> i) != 1:
            i += 1
        prev = mask ^ low
        for c in range(d):
            out[mask, c] = out[prev, c] + W[i, c]
    return out


@njit(cache=True)
def _sup_inf_nb(W, hmask):
    n, d = W.shape
    sums = _subset_sums_nb(W)
    hi = np.zeros(d, dtype=np.int64)
    lo = np.zeros(d, dtype=np.int64)
    for mask in range(1 << n):
        if mask & ~hmask:
            continue
        for c in range(d):
            v = sums[mask, c]
            if v > hi[c]:
                hi[c] = v
            if v < lo[c]:
                lo[c] = v
    return hi, lo


@njit(cache=True)
def _sup_abs_small_nu_nb(W, nu, nu_den, levels):
    n, d = W.shape
    sums = _subset_sums_nb(W)
    nus = np.zeros(1 << n, dtype=np.int64)
    for mask in range(1, 1 << n):
        low = mask & (-mask)
        i = 0
        while (low >> i) != 1:
            i += 1
        nus[mask] = nus[mask ^ low] + nu[i]
    T = levels.shape[0]
    out = np.zeros((T, d), dtype=np.int64)
    for mask in range(1 << n):
        for t in range(T):
            # nu(A) <= 1/levels[t]  <=>  nus * levels[t] <= nu_den
            if nus[mask] * levels[t] <= nu_den:
                for c in range(d):
                    v = abs(sums[mask, c])
                    if v > out[t, c]:
                        out[t, c] = v
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks


def _subset_sums_np(W):
    n, d = W.shape
    sums = np.zeros((1, d), dtype=W.dtype)
    for i in range(n):
        sums = np.concatenate([sums, sums + W[i]])
    return sums


def _submasks(n, hmask):
    masks = np.arange(1 << n, dtype=np.int64)
    return masks[(masks & ~np.int64(hmask)) == 0]


def _sup_inf_np(W, hmask):
    n, d = W.shape
    sums = _subset_sums_np(W)[_submasks(n, hmask)]
    zero = np.zeros(d, dtype=W.dtype)
    return np.maximum(sums.max(axis=0), zero), np.minimum(sums.min(axis=0), zero)


def _sup_abs_small_nu_np(W, nu, nu_den, levels):
    n, d = W.shape
    sums = np.abs(_subset_sums_np(W))
    nus = _subset_sums_np(nu.reshape(n, 1))[:, 0]
    out = np.zeros((len(levels), d), dtype=W.dtype)
    for t, lev in enumerate(levels):
        sel = nus * lev <= nu_den
        out[t] = sums[sel].max(axis=0)
    return out


# ---------------------------------------------------------------------------
# public entry points (rational in, rational out)


def _check_size(n: int) -> None:
    if n < 1:
        raise ValueError("need at least one atom")
    if n > 20:
        raise ValueError("brute-force enumeration is capped at 20 atoms")


def subset_sums(rows, use_numba=None):
    """All 2^n subset sums of the given weight rows, as a Fraction matrix."""
    _check_size(len(rows))
    W, den, fits = scale_rows(rows)
    use_nb = NUMBA_AVAILABLE if use_numba is None else use_numba
    sums = _subset_sums_nb(W) if (use_nb and fits) else _subset_sums_np(W)
    return [[Fraction(int(v), den) for v in row] for row in sums]


def sup_inf_over_subsets(rows, hmask: int, use_numba=None):
    """(max, min) over subsets A of H of sum_{i in A} rows[i], componentwise.

    The empty set is included, so max >= 0 >= min.
    """
    _check_size(len(rows))
    W, den, fits = scale_rows(rows)
    use_nb = NUMBA_AVAILABLE if use_numba is None else use_numba
    hi, lo = (_sup_inf_nb(W, hmask) if (use_nb and fits) else _sup_inf_np(W, hmask))
    return ([Fraction(int(v), den) for v in hi], [Fraction(int(v), den) for v in lo])


def sup_abs_small_nu(rows, nu_weights, levels, use_numba=None):
    """For each n in levels: sup{ |m(A)| : nu(A) <= 1/n }, componentwise."""
    _check_size(len(rows))
    W, den, fits = scale_rows(rows)
    nu_int, nu_den, nu_fits = scale_rows([[q] for q in nu_weights])
    nu_vec = nu_int[:, 0] if len(nu_weights) else np.zeros(0, dtype=np.int64)
    lev = np.array([int(n) for n in levels], dtype=np.int64)
    max_lev = int(lev.max()) if len(lev) else 0
    nu_total = int(sum(abs(int(v)) for v in nu_vec))
    safe = fits and nu_fits and nu_total * max(max_lev, 1) < INT64_SAFE
    use_nb = NUMBA_AVAILABLE if use_numba is None else use_numba
    if use_nb and safe:
        out = _sup_abs_small_nu_nb(W, nu_vec.astype(np.int64), np.int64(nu_den), lev)
    else:
        if not safe:
            W = W.astype(object)
            nu_vec = nu_vec.astype(object)
            lev = lev.astype(object)
        out = _sup_abs_small_nu_np(W, nu_vec, nu_den, lev)
    return [[Fraction(int(v), den) for v in row] for row in out]
