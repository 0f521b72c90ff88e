"""Single-step propagator approximations and global matricant composition.

Nine fixed-step schemes are provided, named by family:

* ts1, ts2   -- truncated Taylor expansions of the propagator
* lp2, lp3, lp4 -- Lagrange-polynomial collocation series (2, 3, 4 points)
* exp2a, exp2b, exp2c -- products of matrix exponentials (1, 2, 4 factors)
* mg4       -- two-point Gauss Magnus integrator

All schemes sample the system matrix Q(r) only at interior abscissae of the
step, so piecewise profiles never need derivatives.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .elastodyn import q_matrix
from .errors import DuplicatePoints, MatricantOverflow, OutOfSupport, StepTooLarge
from .numkernel import mat_exp

_SQ3 = np.sqrt(3.0)


@dataclass(frozen=True)
class Scheme:
    tag: str
    nominal_order: int


SCHEMES = {
    "ts1": Scheme("ts1", 1),
    "ts2": Scheme("ts2", 2),
    "exp2a": Scheme("exp2a", 2),
    "lp2": Scheme("lp2", 2),
    "exp2b": Scheme("exp2b", 2),
    "lp3": Scheme("lp3", 3),
    "lp4": Scheme("lp4", 4),
    "exp2c": Scheme("exp2c", 2),
    "mg4": Scheme("mg4", 4),
}

SCHEME_NAMES = tuple(SCHEMES)

_LP_POINTS = {
    "lp2": (Fraction(1, 4), Fraction(3, 4)),
    "lp3": (Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)),
    "lp4": (Fraction(1, 8), Fraction(3, 8), Fraction(5, 8), Fraction(7, 8)),
}

_LP_TERMS = {"lp2": 2, "lp3": 3, "lp4": 4}


def get_scheme(name: str | Scheme) -> Scheme:
    if isinstance(name, Scheme):
        return name
    try:
        return SCHEMES[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown scheme {name!r}; choose from {', '.join(SCHEMES)}") from None


@dataclass(frozen=True)
class Matricant:
    """Propagator M(r_to, r_from) of the state ODE, with block views."""

    m: np.ndarray
    r_from: float
    r_to: float
    half: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError("matricant must be square with even size")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "half", m.shape[0] // 2)

    @property
    def m1(self) -> np.ndarray:
        return self.m[:self.half, :self.half]

    @property
    def m2(self) -> np.ndarray:
        return self.m[:self.half, self.half:]

    @property
    def m3(self) -> np.ndarray:
        return self.m[self.half:, :self.half]

    @property
    def m4(self) -> np.ndarray:
        return self.m[self.half:, self.half:]

    @classmethod
    def identity(cls, size: int, r: float) -> "Matricant":
        return cls(np.eye(size, dtype=complex), r, r)


# ---------------------------------------------------------------------------
# Lagrange collocation weights


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    # floats like 1/6 round-trip exactly through limit_denominator
    return Fraction(x).limit_denominator(10 ** 9)


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def lagrange_weights(points, k: int):
    """Weights L_j^(k) = k * integral_0^1 L_j(x) x^(k-1) dx, exact rationals.

    L_j is the Lagrange basis polynomial on the given abscissae in [0, 1].
    The weights of each order sum to 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = [_as_fraction(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePoints(f"abscissae must be distinct, got {points}")
    weights = []
    for j, xj in enumerate(pts):
        num = [Fraction(1)]
        den = Fraction(1)
        for i, xi in enumerate(pts):
            if i == j:
                continue
            num = _poly_mul(num, [-xi, Fraction(1)])
            den *= (xj - xi)
        # integral of c_m x^m * k x^(k-1) = k c_m / (m + k)
        w = sum(Fraction(k) * c / (m + k) for m, c in enumerate(num)) / den
        weights.append(w)
    return weights


@lru_cache(maxsize=None)
def _lp_weight_rows(tag: str) -> tuple:
    pts = _LP_POINTS[tag]
    rows = []
    for k in range(1, _LP_TERMS[tag] + 1):
        rows.append(tuple(float(w) for w in lagrange_weights(pts, k)))
    return tuple(rows)


# ---------------------------------------------------------------------------
# single steps


def _sampler(profile, ctx):
    def q_at(r: float) -> np.ndarray:
        return q_matrix(profile, ctx, r).q
    return q_at


def _check_span(profile, r: float, h: float) -> None:
    support = getattr(profile, "support", None)
    if support is not None:
        lo, hi = support
        if r < lo - 1e-12 or r + h > hi + 1e-12:
            raise OutOfSupport(
                f"step [{r}, {r + h}] outside profile support [{lo}, {hi}]")


def _guard(h: float, q: np.ndarray) -> np.ndarray:
    # spectral norm: the tightest of the standard choices, so legitimate
    # steps (large-n partial waves on fine grids) are not rejected early;
    # sqrt(|Q|_1 |Q|_inf) bounds it from above, sparing the SVD on the
    # overwhelmingly common small-step path
    aq = np.abs(q)
    bound = h * math.sqrt(aq.sum(axis=0).max() * aq.sum(axis=1).max())
    if bound <= 20.0:
        return q
    nrm = h * np.linalg.norm(q, 2)
    if nrm > 20.0:
        raise StepTooLarge(
            f"||h*Q|| = {nrm:.3g} exceeds 20 (exp overflow guard); "
            "reduce the step or increase the step count")
    return q


def matricant_step(profile, ctx, r: float, h: float, scheme) -> Matricant:
    """One-step propagator M(r+h, r) for the chosen scheme."""
    if h <= 0:
        raise ValueError("step must be positive")
    _check_span(profile, r, h)
    sch = get_scheme(scheme)
    q_at = _sampler(profile, ctx)
    tag = sch.tag

    if tag == "ts1":
        q = _guard(h, q_at(r))
        m = np.eye(q.shape[0], dtype=complex) + h * q
    elif tag == "ts2":
        q = _guard(h, q_at(r + 0.5 * h))
        m = (np.eye(q.shape[0], dtype=complex) + h * q
             + (0.5 * h * h) * (q @ q))
    elif tag == "exp2a":
        q = _guard(h, q_at(r + 0.5 * h))
        m = mat_exp(h * q)
    elif tag == "exp2b":
        qa = _guard(h, q_at(r + 0.25 * h))
        qb = _guard(h, q_at(r + 0.75 * h))
        m = mat_exp(0.5 * h * qb) @ mat_exp(0.5 * h * qa)
    elif tag == "exp2c":
        qs = [_guard(h, q_at(r + x * h)) for x in (0.125, 0.375, 0.625, 0.875)]
        m = mat_exp(0.25 * h * qs[0])
        for q in qs[1:]:
            m = mat_exp(0.25 * h * q) @ m
    elif tag == "mg4":
        qa = _guard(h, q_at(r + h * (0.5 - _SQ3 / 6.0)))
        qb = _guard(h, q_at(r + h * (0.5 + _SQ3 / 6.0)))
        omega = (0.5 * h) * (qa + qb) + (_SQ3 * h * h / 12.0) * (qb @ qa - qa @ qb)
        m = mat_exp(omega)
    else:  # lp2 / lp3 / lp4
        pts = _LP_POINTS[tag]
        qs = [_guard(h, q_at(r + float(x) * h)) for x in pts]
        rows = _lp_weight_rows(tag)
        size = qs[0].shape[0]
        m = np.eye(size, dtype=complex)
        term = np.eye(size, dtype=complex)
        hk = 1.0
        fact = 1.0
        for k, row in enumerate(rows, start=1):
            a = sum(w * q for w, q in zip(row, qs))
            term = a @ term
            hk *= h
            fact *= k
            m = m + (hk / fact) * term

    return Matricant(m, r, r + h)


def matricant_global(profile, ctx, r0: float, r1: float, steps: int,
                     scheme) -> Matricant:
    """Left-multiplied composition over equal subintervals.

    Emits a MatricantOverflow warning if any intermediate product entry
    exceeds 1e12 in magnitude (the growing-solution swamp at large n or kr;
    use the impedance marcher instead of a global matricant in that regime).
    """
    if not r0 < r1:
        raise ValueError("need r0 < r1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = (r1 - r0) / steps
    m = None
    warned = False
    for i in range(steps):
        step = matricant_step(profile, ctx, r0 + i * h, h, scheme)
        m = step.m if m is None else step.m @ m
        if not warned and np.max(np.abs(m)) > 1e12:
            warnings.warn(
                f"matricant entries exceed 1e12 at r={r0 + (i + 1) * h:.6g}; "
                "growing solutions dominate this span",
                MatricantOverflow,
                stacklevel=2,
            )
            warned = True
    return Matricant(m, r0, r1)
