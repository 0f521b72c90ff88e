"""Cylinder functions f_n^l and derivatives, integer order, complex argument.

The four kinds are indexed the usual way: l=1 Bessel J, l=2 Bessel Y,
l=3 Hankel H(1) = J + iY, l=4 Hankel H(2) = J - iY.  Evaluation is backed by
scipy.special, which switches between ascending series, backward recurrence
and large-argument asymptotics internally; the guarantees exposed here
(accuracy over the validated range, Wronskian/recurrence identities) are
checked in the test suite against an independent high-precision oracle.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy import special

from .errors import AccuracyLoss, DomainError

KIND_J = 1
KIND_Y = 2
KIND_H1 = 3
KIND_H2 = 4

_KINDS = (KIND_J, KIND_Y, KIND_H1, KIND_H2)

# Range over which 1e-12 relative accuracy is validated.
_N_MAX = 60
_X_LO = 1e-6
_X_HI = 200.0


def _check(kind: int, n: int, x: complex) -> complex:
    if kind not in _KINDS:
        raise ValueError(f"unknown cylinder-function kind {kind!r}")
    if n < 0:
        raise ValueError("order must be a nonnegative integer")
    x = complex(x)
    if x == 0 and kind != KIND_J:
        raise DomainError(f"kind {kind} is singular at x=0")
    ax = abs(x)
    if n > _N_MAX or (ax != 0 and not (_X_LO <= ax <= _X_HI)):
        warnings.warn(
            f"cyl_f(kind={kind}, n={n}, |x|={ax:.3g}) outside validated "
            f"range (n<={_N_MAX}, {_X_LO}<=|x|<={_X_HI})",
            AccuracyLoss,
            stacklevel=3,
        )
    return x


def _eval(kind: int, n: int, x: complex) -> complex:
    # scipy's real-argument paths are faster and exact for real x
    if x.imag == 0.0:
        xr = x.real
        if kind == KIND_J:
            return complex(special.jv(n, xr))
        if xr > 0:
            if kind == KIND_Y:
                return complex(special.yv(n, xr))
            if kind == KIND_H1:
                return complex(special.hankel1(n, xr))
            return complex(special.hankel2(n, xr))
    z = complex(x)
    if kind == KIND_J:
        return complex(special.jv(n, z))
    if kind == KIND_Y:
        return complex(special.yv(n, z))
    if kind == KIND_H1:
        return complex(special.hankel1(n, z))
    return complex(special.hankel2(n, z))


def cyl_f(kind: int, n: int, x: complex) -> complex:
    """f_n^l(x) for l in {1: J, 2: Y, 3: H1, 4: H2}."""
    x = _check(kind, n, x)
    if x == 0:  # only J reaches here
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    return _eval(kind, n, x)


def cyl_f_prime(kind: int, n: int, x: complex) -> complex:
    """First derivative via f_n' = (f_{n-1} - f_{n+1})/2, with f_{-1} = -f_1."""
    x = _check(kind, n, x)
    if x == 0:  # J only; J0' = -J1 = 0, J1' = 1/2, Jn'(0) = 0 for n >= 2
        return 0.5 + 0.0j if n == 1 else 0.0 + 0.0j
    if n == 0:
        return -_eval(kind, 1, x)
    return 0.5 * (_eval(kind, n - 1, x) - _eval(kind, n + 1, x))
