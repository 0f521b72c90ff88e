"""Plane-wave acoustic scattering from a layered elastic cylinder in water.

Normalized units throughout: fluid density 1, sound speed 1 (so the fluid
bulk modulus K is 1), outer radius a = 1, hence k = ka and omega = ka.  Time
convention e^{-i omega t}, outgoing waves carried by H(1).

The elastic side enters only through the scalar surface impedance z0,
obtained from the conditional impedance matrix at r = a by eliminating the
tangential displacement components under zero tangential traction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .cylfun import KIND_H1, KIND_J, cyl_f, cyl_f_prime
from .elastodyn import RadialProfile, WaveContext
from .errors import InteriorPoint, SingularMatrix, TangentialResonance
from .impedance import (ConditionalImpedance, conditional_from_twopoint,
                        integrate_impedance)
from .numkernel import mat_inverse
from .tilayers import LayerTI, global_twopoint, ti_conditional_impedance

A_OUTER = 1.0
_B_TAIL = 1e-10


@dataclass(frozen=True)
class FluidHalfSpace:
    """Exterior fluid; normalized so K = rho_f * c^2 = 1."""

    k: float
    K: float = 1.0
    rho_f: float = 1.0

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("wavenumber must be positive")


@dataclass(frozen=True)
class ScatteringResult:
    b: tuple
    ka: float
    sigma_tot: float
    f_samples: tuple


@dataclass(frozen=True)
class ScatteringConfig:
    layers: tuple
    ka: float
    scheme: str = "lp4"
    steps: int = 500
    method: str = "integrate"
    inner_impedance: object = None
    n_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError("need at least one layer")
        if self.ka <= 0:
            raise ValueError("ka must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.method not in ("integrate", "recursion"):
            raise ValueError(f"unknown method {self.method!r}")


def scalar_impedance_z0(z2) -> complex:
    """Scalar surface impedance from the 2x2 or 3x3 conditional impedance.

    Zero tangential traction lets the tangential displacement components be
    eliminated; what survives is the Schur complement onto the radial entry.
    """
    z = z2.z if isinstance(z2, ConditionalImpedance) else np.asarray(
        z2, dtype=complex)
    m = z.shape[0]
    if m == 1:
        return complex(z[0, 0])
    try:
        tinv = mat_inverse(z[1:, 1:])
    except SingularMatrix:
        raise TangentialResonance(
            "tangential impedance block singular at the surface") from None
    return complex(z[0, 0] - z[0, 1:] @ tinv @ z[1:, 0])


def scattering_coefficient(n: int, ka: float, K: float, z0: complex) -> complex:
    """Partial-wave coefficient B_n of the scattered (H1) series."""
    if ka <= 0:
        raise ValueError("ka must be positive")
    jn = cyl_f(KIND_J, n, ka)
    jnp = cyl_f_prime(KIND_J, n, ka)
    hn = cyl_f(KIND_H1, n, ka)
    hnp = cyl_f_prime(KIND_H1, n, ka)
    return -(K * ka * jn - z0 * jnp) / (K * ka * hn - z0 * hnp)


def form_function(theta, b, ka: float):
    """Far-field form function f(theta) of the truncated partial-wave sum."""
    th = np.asarray(theta, dtype=float)
    out = np.zeros(th.shape, dtype=complex)
    for n, bn in enumerate(b):
        eps = 1.0 if n == 0 else 2.0
        out += eps * bn * np.cos(n * th)
    out *= -1j / math.sqrt(ka)
    return complex(out) if th.ndim == 0 else out


def total_cross_section(b, ka: float) -> float:
    """sigma_tot = (4 pi / ka) Im f(0)."""
    return 4.0 * math.pi / ka * complex(form_function(0.0, b, ka)).imag


def pressure_field(points, b, ka: float, K: float = 1.0) -> np.ndarray:
    """Total pressure (incident + scattered) at exterior (r, theta) points.

    The incident plane wave travels along theta = 0; its partial-wave sum is
    truncated adaptively (well past the kr turning point), the scattered sum
    by the length of b.  Amplitude is per unit incident pressure amplitude
    times K*k.
    """
    pts = np.asarray(points, dtype=float)
    squeeze = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != 2:
        raise ValueError("points must be (r, theta) pairs")
    r = pts[:, 0]
    theta = pts[:, 1]
    if np.any(r < A_OUTER * (1 - 1e-12)):
        raise InteriorPoint("pressure_field is exterior-only (r >= a)")
    k = ka / A_OUTER
    x = k * r
    xmax = float(np.max(x))
    n_inc = max(len(b), int(math.ceil(xmax + 8.0 * xmax ** (1.0 / 3.0) + 20)))
    p = np.zeros(r.shape, dtype=complex)
    for n in range(n_inc + 1):
        eps = 1.0 if n == 0 else 2.0
        term = special.jv(n, x).astype(complex)
        if n < len(b):
            term = term + b[n] * special.hankel1(n, x)
        p += eps * (1j ** n) * term * np.cos(n * theta)
    p *= K * k
    return p[0] if squeeze else p


_F_ANGLES = (0.0, 0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi, math.pi)


def _inner_impedance_3x3(config: ScatteringConfig,
                         ctx3: WaveContext) -> np.ndarray:
    first = config.layers[0]
    if config.inner_impedance is None:
        return ti_conditional_impedance(1, first, ctx3, first.r_inner).z
    given = np.asarray(config.inner_impedance, dtype=complex)
    if given.ndim == 0:
        return complex(given) * np.eye(3)
    if given.shape == (3, 3):
        return given
    if given.shape == (2, 2):
        z = np.zeros((3, 3), dtype=complex)
        z[:2, :2] = given
        return z
    raise ValueError("inner_impedance must be a scalar, 2x2 or 3x3 matrix")


def solve_scattering(config: ScatteringConfig) -> ScatteringResult:
    """Run the partial-wave pipeline for one frequency.

    Per retained order n the surface impedance z(a) is produced either by
    Moebius integration of the in-plane (m=2) system from the inner radius
    outward ("integrate") or from the closed-form layer impedances joined
    recursively ("recursion").  The inner condition is the exact solid-core
    impedance of the innermost material unless one is supplied.  Only n >= 0
    is evaluated; negative orders are folded into the eps_n cos(n theta)
    sums, which is exact for this geometry.

    Truncation: hard cap n_max (default 2*ceil(ka) + 12), early stop once
    |B_n| < 1e-10 twice in a row.
    """
    layers = config.layers
    a = layers[-1].r_outer
    omega = config.ka / a
    n_cap = config.n_max
    if n_cap is None:
        n_cap = 2 * math.ceil(config.ka) + 12
    fluid = FluidHalfSpace(k=config.ka / a)

    if config.method == "integrate":
        profile = RadialProfile.piecewise(
            [(lay.r_inner, lay.r_outer, lay.material()) for lay in layers])
        r_in = layers[0].r_inner

    bs = []
    small_run = 0
    for n in range(n_cap + 1):
        ctx3 = WaveContext(omega=omega, n=n, kz=0.0, m=3)
        z_in3 = _inner_impedance_3x3(config, ctx3)
        if config.method == "integrate":
            ctx2 = WaveContext(omega=omega, n=n, kz=0.0, m=2)
            za = integrate_impedance(profile, ctx2, z_in3[:2, :2],
                                     r_in, a, config.steps, config.scheme)
        else:
            zg = global_twopoint(layers, ctx3)
            za = conditional_from_twopoint(zg, z_in3)
        z0 = scalar_impedance_z0(za)
        bn = scattering_coefficient(n, config.ka, fluid.K, z0)
        bs.append(bn)
        if abs(bn) < _B_TAIL:
            small_run += 1
            if small_run >= 2:
                break
        else:
            small_run = 0

    b = tuple(bs)
    sigma = total_cross_section(b, config.ka)
    f_samples = tuple(
        (th, complex(form_function(th, b, config.ka))) for th in _F_ANGLES)
    return ScatteringResult(b=b, ka=config.ka, sigma_tot=sigma,
                            f_samples=f_samples)
