"""Permanents, determinants, and occupation normalisation factors.

These are the combinatorial kernels behind every transition probability:
bosonic amplitudes are permanents, fermionic ones determinants, and
multiply-occupied detectors contribute a factorial normalisation.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, SizeLimitError

NAIVE_PERMANENT_LIMIT = 9


def _check_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def permanent(a: np.ndarray) -> complex:
    """perm A = Σ_{σ∈S_n} Π_k A_{k σ(k)}, by Ryser's formula with Gray-code
    subset iteration: one row-sum update per subset step, O(2^n · n) total.

    The empty matrix has permanent 1 (vacuum-to-vacuum convention).
    """
    a = _check_square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    # Ryser: perm A = (-1)^n Σ_{S ≠ ∅} (-1)^{|S|} Π_j Σ_{i∈S} A_{ij}
    row_sums = np.zeros(n, dtype=complex)
    total = 0.0 + 0.0j
    mask = 0
    sign = 1  # (-1)^{|S|}; flips every step since one bit changes per Gray code
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        bit = mask ^ gray
        idx = bit.bit_length() - 1
        if gray & bit:
            row_sums += a[idx]
        else:
            row_sums -= a[idx]
        sign = -sign
        mask = gray
        total += sign * np.prod(row_sums)
    return complex((-1) ** n * total)


def permanent_naive(a: np.ndarray) -> complex:
    """Direct O(n!·n) sum over all permutations; independent test oracle."""
    from itertools import permutations as _perms

    a = _check_square(a)
    n = a.shape[0]
    if n > NAIVE_PERMANENT_LIMIT:
        raise SizeLimitError(f"naive permanent limited to n <= {NAIVE_PERMANENT_LIMIT}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    rows = range(n)
    for sigma in _perms(range(n)):
        prod = 1.0 + 0.0j
        for k in rows:
            prod *= a[k, sigma[k]]
        total += prod
    return complex(total)


def determinant(a: np.ndarray) -> complex:
    """det A via LU factorisation with partial pivoting; the pivot-swap sign
    is tracked explicitly."""
    a = _check_square(a).copy()
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    sign = 1.0
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot, col]) == 0.0:
            return 0.0 + 0.0j
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            sign = -sign
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
    return complex(sign * np.prod(np.diagonal(a)))


def occupation_counts(m: int, ports) -> np.ndarray:
    """Mode occupation vector: counts[k] = number of particles in port k+1."""
    counts = np.zeros(m, dtype=int)
    for p in ports:
        counts[p - 1] += 1
    return counts


def occupation_normalization(counts) -> int:
    """Π_k M_k! -- equals perm I for the δ-matrix I_{jk} = δ_{o_j, o_k}."""
    counts = np.asarray(counts, dtype=int)
    if np.any(counts < 0):
        raise DimensionError("occupation counts must be non-negative")
    result = 1
    for c in counts:
        result *= math.factorial(int(c))
    return result
