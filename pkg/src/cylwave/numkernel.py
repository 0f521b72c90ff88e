"""Small dense complex linear algebra: inversion, matrix exponential, norms.

Everything here operates on square complex matrices of modest size (3x3 and
6x6 dominate), so plain LAPACK-backed dense routines are the right tool.
"""
from __future__ import annotations

import numpy as np

from .errors import Overflow, SingularMatrix

# Pade [6/6] coefficients for exp: c[k+1] = c[k] * (6-k) / ((12-k)(k+1))
_PADE6 = np.array([
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
])


def mat_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square complex matrix via LU with partial pivoting.

    Raises SingularMatrix (with a condition estimate when one can be formed)
    if the factorization hits a vanishing pivot or produces non-finite
    entries.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    try:
        b = np.linalg.inv(a)
    except np.linalg.LinAlgError:
        raise SingularMatrix(cond=_cond_estimate(a)) from None
    if not np.all(np.isfinite(b)):
        raise SingularMatrix("inverse has non-finite entries",
                             cond=_cond_estimate(a))
    return b


def _cond_estimate(a: np.ndarray) -> float:
    try:
        with np.errstate(all="ignore"):
            c = float(abs(np.linalg.cond(a, 1)))
    except np.linalg.LinAlgError:
        return float("inf")
    return c if np.isfinite(c) else float("inf")


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a Pade [6/6] core.

    The input is scaled until its 1-norm is at most 0.5, which keeps the
    rational approximation error far below double-precision round-off, then
    squared back up.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix exponential of non-finite input")
    nrm = np.linalg.norm(a, 1)
    s = 0
    if nrm > 0.5:
        s = int(np.ceil(np.log2(nrm / 0.5)))
    x = a / (2.0 ** s)

    n = a.shape[0]
    x2 = x @ x
    # numerator/denominator share even and odd parts: D = N(-x)
    even = _PADE6[0] * np.eye(n) + _PADE6[2] * x2
    odd = _PADE6[1] * np.eye(n) + _PADE6[3] * x2
    x4 = x2 @ x2
    even = even + _PADE6[4] * x4
    odd = odd + _PADE6[5] * x4
    even = even + _PADE6[6] * (x4 @ x2)
    odd_x = x @ odd
    num = even + odd_x
    den = even - odd_x
    try:
        e = np.linalg.solve(den, num)
    except np.linalg.LinAlgError:
        raise SingularMatrix("Pade denominator singular") from None
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            e = e @ e
            if not np.all(np.isfinite(e)):
                raise Overflow(
                    "matrix exponential overflowed floating-point range")
    if not np.all(np.isfinite(e)):
        raise Overflow("matrix exponential overflowed floating-point range")
    return e


def hermitian_residual(a: np.ndarray) -> float:
    """Frobenius-norm departure from Hermitian symmetry, relative to ||A||."""
    a = np.asarray(a, dtype=complex)
    num = np.linalg.norm(a - a.conj().T)
    return float(num / max(np.linalg.norm(a), 1e-300))
