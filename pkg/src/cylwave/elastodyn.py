"""Materials, radial profiles and the Stroh-like system matrix Q(r).

Cylindrical anisotropy with radially varying properties.  The state vector is
eta = (U, V) with U the displacement amplitudes (u_r, u_theta, u_z) and
V = i*r*(traction on the r-face); it satisfies d(eta)/dr = Q(r) eta with
Q = (i/r) G.  For lossless (real) moduli Q has the symmetry Q+ = -T Q T with
T the block-swap matrix, which is what makes impedance matrices Hermitian
downstream.

All quantities are nondimensional: lengths by the outer radius, densities by
the fluid density, speeds by the fluid sound speed, moduli by rho_w*c_w^2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DecouplingError, MaterialSingular, OutOfSupport, SchemaError

# reference fluid (water): 1000 kg/m^3, 1470 m/s
RHO_W = 1000.0
C_W = 1470.0
MODULUS_SCALE = RHO_W * C_W * C_W  # Pa per dimensionless modulus unit


# ---------------------------------------------------------------------------
# materials


@dataclass(frozen=True)
class StiffnessVoigt:
    """6x6 table of elastic moduli in Voigt ordering (11,22,33,23,13,12)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (6, 6):
            raise ValueError("stiffness table must be 6x6")
        if not np.allclose(c, c.T, rtol=0, atol=1e-12 * max(1.0, abs(c).max())):
            raise ValueError("stiffness table must be symmetric")
        object.__setattr__(self, "c", 0.5 * (c + c.T))

    def is_positive_definite(self) -> bool:
        """Leading principal minors all positive."""
        for k in range(1, 7):
            if np.linalg.det(self.c[:k, :k]) <= 0:
                return False
        return True

    def __getitem__(self, ij) -> float:
        """1-based Voigt lookup: stiffness[1, 2] is C_12."""
        i, j = ij
        return float(self.c[i - 1, j - 1])


def isotropic_stiffness(lam: float, mu: float) -> StiffnessVoigt:
    c = np.zeros((6, 6))
    c[:3, :3] = lam
    for i in range(3):
        c[i, i] = lam + 2 * mu
    for i in range(3, 6):
        c[i, i] = mu
    return StiffnessVoigt(c)


def ti_stiffness(c11: float, c12: float, c13: float, c33: float,
                 c44: float) -> StiffnessVoigt:
    """Transversely isotropic stiffness (symmetry axis z); c66 = (c11-c12)/2."""
    c66 = 0.5 * (c11 - c12)
    c = np.zeros((6, 6))
    c[0, 0] = c[1, 1] = c11
    c[0, 1] = c[1, 0] = c12
    c[0, 2] = c[2, 0] = c[1, 2] = c[2, 1] = c13
    c[2, 2] = c33
    c[3, 3] = c[4, 4] = c44
    c[5, 5] = c66
    return StiffnessVoigt(c)


@dataclass(frozen=True)
class MaterialPoint:
    rho: float
    stiffness: StiffnessVoigt

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("density must be positive")


def aluminium() -> MaterialPoint:
    """Aluminium vs water: rho ratio 2.7, E = 70 GPa, G = 26 GPa."""
    mu = 26.0e9
    lam = 58.5e9  # = G(E-2G)/(3G-E) with E=70, G=26
    return MaterialPoint(
        rho=2.7,
        stiffness=isotropic_stiffness(lam / MODULUS_SCALE, mu / MODULUS_SCALE),
    )


# ---------------------------------------------------------------------------
# radial profiles


@dataclass(frozen=True)
class RadialProfile:
    """Either a stack of uniform layers or a smooth radial material law."""

    layers: tuple | None = None
    smooth_fn: Callable[[float], MaterialPoint] | None = None
    support: tuple = (0.0, 0.0)

    @classmethod
    def piecewise(cls, layers) -> "RadialProfile":
        items = []
        prev_out = None
        for (r_in, r_out, mp) in layers:
            if not (0 < r_in < r_out):
                raise ValueError(f"bad layer bounds ({r_in}, {r_out})")
            if prev_out is not None and abs(r_in - prev_out) > 1e-12:
                raise ValueError("layers must be contiguous")
            prev_out = r_out
            items.append((float(r_in), float(r_out), mp))
        if not items:
            raise ValueError("profile needs at least one layer")
        return cls(layers=tuple(items),
                   support=(items[0][0], items[-1][1]))

    @classmethod
    def smooth(cls, fn: Callable[[float], MaterialPoint], r_min: float,
               r_max: float) -> "RadialProfile":
        if not (0 < r_min < r_max):
            raise ValueError("need 0 < r_min < r_max")
        return cls(smooth_fn=fn, support=(float(r_min), float(r_max)))

    @classmethod
    def uniform(cls, mp: MaterialPoint, r_min: float, r_max: float) -> "RadialProfile":
        return cls.piecewise([(r_min, r_max, mp)])

    def material_at(self, r: float) -> MaterialPoint:
        lo, hi = self.support
        if not (lo - 1e-12 <= r <= hi + 1e-12):
            raise OutOfSupport(f"r={r} outside profile support [{lo}, {hi}]")
        if self.smooth_fn is not None:
            return self.smooth_fn(r)
        for (r_in, r_out, mp) in self.layers:
            if r <= r_out + 1e-12:
                return mp
        return self.layers[-1][2]


# ---------------------------------------------------------------------------
# wave context and system matrix


@dataclass(frozen=True)
class WaveContext:
    omega: float
    n: int = 0
    kz: float = 0.0
    m: int = 3

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("n must be a nonnegative integer")
        if self.m not in (1, 2, 3):
            raise ValueError("m must be 1, 2 or 3")


@dataclass(frozen=True)
class SystemMatrix:
    q: np.ndarray
    r: float
    half: int = field(init=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=complex)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] % 2:
            raise ValueError("system matrix must be square with even size")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "half", q.shape[0] // 2)

    @property
    def q1(self) -> np.ndarray:
        return self.q[:self.half, :self.half]

    @property
    def q2(self) -> np.ndarray:
        return self.q[:self.half, self.half:]

    @property
    def q3(self) -> np.ndarray:
        return self.q[self.half:, :self.half]

    @property
    def q4(self) -> np.ndarray:
        return self.q[self.half:, self.half:]


def block_swap(m: int = 3) -> np.ndarray:
    """T = [[0, I], [I, 0]] of size 2m."""
    t = np.zeros((2 * m, 2 * m))
    t[:m, m:] = np.eye(m)
    t[m:, :m] = np.eye(m)
    return t


class VoigtBlocks(NamedTuple):
    qh: np.ndarray  # symmetric, rr-face
    th: np.ndarray  # symmetric, theta-face
    mh: np.ndarray  # symmetric, z-face
    r: np.ndarray
    p: np.ndarray
    s: np.ndarray


def voigt_blocks(stiff: StiffnessVoigt) -> VoigtBlocks:
    """The six 3x3 sub-tables of C entering the system matrix.

    Index transcription (1-based Voigt):

        qh = [[11,16,15],[16,66,56],[15,56,55]]     th = [[66,26,46],[26,22,24],[46,24,44]]
        mh = [[55,45,35],[45,44,34],[35,34,33]]     r  = [[16,12,14],[66,26,46],[56,25,45]]
        p  = [[15,14,13],[56,46,36],[55,45,35]]     s  = [[56,46,36],[25,24,23],[45,44,34]]
    """
    cached = getattr(stiff, "_vblocks", None)
    if cached is not None:
        return cached
    c = stiff
    qh = np.array([[c[1, 1], c[1, 6], c[1, 5]],
                   [c[1, 6], c[6, 6], c[5, 6]],
                   [c[1, 5], c[5, 6], c[5, 5]]])
    th = np.array([[c[6, 6], c[2, 6], c[4, 6]],
                   [c[2, 6], c[2, 2], c[2, 4]],
                   [c[4, 6], c[2, 4], c[4, 4]]])
    mh = np.array([[c[5, 5], c[4, 5], c[3, 5]],
                   [c[4, 5], c[4, 4], c[3, 4]],
                   [c[3, 5], c[3, 4], c[3, 3]]])
    r = np.array([[c[1, 6], c[1, 2], c[1, 4]],
                  [c[6, 6], c[2, 6], c[4, 6]],
                  [c[5, 6], c[2, 5], c[4, 5]]])
    p = np.array([[c[1, 5], c[1, 4], c[1, 3]],
                  [c[5, 6], c[4, 6], c[3, 6]],
                  [c[5, 5], c[4, 5], c[3, 5]]])
    s = np.array([[c[5, 6], c[4, 6], c[3, 6]],
                  [c[2, 5], c[2, 4], c[2, 3]],
                  [c[4, 5], c[4, 4], c[3, 4]]])
    vb = VoigtBlocks(qh, th, mh, r, p, s)
    # material constants; marching evaluates these thousands of times per run
    object.__setattr__(stiff, "_vblocks", vb)
    return vb


_K = np.array([[0.0, -1.0, 0.0],
               [1.0, 0.0, 0.0],
               [0.0, 0.0, 0.0]])


def g_matrix(mp: MaterialPoint, ctx: WaveContext, r: float) -> np.ndarray:
    """The 6x6 G(r) with Q = (i/r) G.

    Assembled from the Voigt sub-tables:

        g1 = -qh^-1 (R kap) - i kz r qh^-1 P
        g2 = -qh^-1
        g3 = kap+ th kap - (R kap)+ qh^-1 (R kap) + i kz r (W - W+)
             + r^2 (kz^2 (mh - P.T qh^-1 P) - rho w^2 I)
        W  = P.T qh^-1 (R kap) - kap S,      kap = K + i n I

    and placed as i*G = [[g1, i g2], [i g3, -g1+]].
    """
    if r <= 0:
        raise ValueError("g_matrix needs r > 0")
    qh, th, mh, rmat, p, s = voigt_blocks(mp.stiffness)
    qinv = getattr(mp.stiffness, "_qh_inv", None)
    if qinv is None:
        try:
            qinv = np.linalg.inv(qh)
        except np.linalg.LinAlgError:
            raise MaterialSingular(
                "rr-face stiffness block not invertible") from None
        object.__setattr__(mp.stiffness, "_qh_inv", qinv)

    kap = _K + 1j * ctx.n * np.eye(3)
    rt = rmat @ kap
    st = kap @ s
    tt = kap.conj().T @ th @ kap

    kzr = ctx.kz * r
    g1 = -qinv @ rt - 1j * kzr * (qinv @ p)
    g2 = -qinv
    w = p.T @ qinv @ rt - st
    g3 = (tt - rt.conj().T @ qinv @ rt
          + 1j * kzr * (w - w.conj().T)
          + r * r * (ctx.kz ** 2 * (mh - p.T @ qinv @ p)
                     - mp.rho * ctx.omega ** 2 * np.eye(3)))

    ig = np.empty((6, 6), dtype=complex)
    ig[:3, :3] = g1
    ig[:3, 3:] = 1j * g2
    ig[3:, :3] = 1j * g3
    ig[3:, 3:] = -g1.conj().T
    return -1j * ig


# Indices of the in-plane (m=2) and axial-shear (m=1) subsystems of the
# 6x6 state ordering (u_r, u_th, u_z, v_r, v_th, v_z).
_INPLANE_IDX = np.array([0, 1, 3, 4])
_AXIAL_IDX = np.array([2, 5])

# Voigt pairs that must vanish for the z-normal mirror symmetry
_MONOCLINIC_ZERO = [(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5),
                    (4, 6), (5, 6)]


def has_z_mirror_symmetry(stiff: StiffnessVoigt, tol: float = 1e-12) -> bool:
    scale = max(1.0, abs(stiff.c).max())
    return all(abs(stiff[i, j]) <= tol * scale for i, j in _MONOCLINIC_ZERO)


def q_matrix(profile, ctx: WaveContext, r: float) -> SystemMatrix:
    """System matrix Q(r) = (i/r) G(r), reduced to 2m x 2m when ctx.m < 3.

    Reduction to the in-plane (m=2) or axial-shear (m=1) subsystem is only
    meaningful at kz=0 for materials with the z-normal mirror symmetry; any
    other request is refused.

    A profile object exposing ``q_at(r, ctx)`` is used directly (test hook
    for synthetic system matrices).
    """
    q_at = getattr(profile, "q_at", None)
    if q_at is not None:
        q = np.asarray(q_at(r, ctx), dtype=complex)
        return SystemMatrix(q=q, r=float(r))

    mp = profile.material_at(r)
    g = g_matrix(mp, ctx, r)
    q6 = (1j / r) * g
    if ctx.m == 3:
        return SystemMatrix(q=q6, r=float(r))

    if ctx.kz != 0.0:
        raise DecouplingError("m<3 reduction requires kz = 0")
    mirror = getattr(mp.stiffness, "_zmirror", None)
    if mirror is None:
        mirror = has_z_mirror_symmetry(mp.stiffness)
        object.__setattr__(mp.stiffness, "_zmirror", mirror)
    if not mirror:
        raise DecouplingError(
            "m<3 reduction requires z-normal mirror symmetry of the moduli")
    idx = _INPLANE_IDX if ctx.m == 2 else _AXIAL_IDX
    return SystemMatrix(q=q6[np.ix_(idx, idx)], r=float(r))


# ---------------------------------------------------------------------------
# JSON profile schema (consumed by the CLI)


def _material_from_json(node: dict, where: str) -> MaterialPoint:
    if not isinstance(node, dict):
        raise SchemaError(f"{where}: expected object")
    mtype = node.get("type")
    if mtype not in ("isotropic", "ti", "full"):
        raise SchemaError(f"{where}/type: expected 'isotropic', 'ti' or 'full'")
    rho = node.get("rho")
    if not isinstance(rho, (int, float)) or rho <= 0:
        raise SchemaError(f"{where}/rho: expected positive number")
    params = node.get("params")
    if not isinstance(params, dict):
        raise SchemaError(f"{where}/params: expected object")

    if mtype == "isotropic":
        if "lambda" in params and "mu" in params:
            lam, mu = params["lambda"], params["mu"]
        elif "E" in params and "G" in params:
            e, g = params["E"], params["G"]
            if 3 * g - e == 0:
                raise SchemaError(f"{where}/params: E = 3G is degenerate")
            mu = g
            lam = g * (e - 2 * g) / (3 * g - e)
        else:
            raise SchemaError(
                f"{where}/params: need ('lambda','mu') or ('E','G')")
        stiff = isotropic_stiffness(float(lam), float(mu))
    elif mtype == "ti":
        need = ("c11", "c12", "c13", "c33", "c44")
        if not all(k in params for k in need):
            raise SchemaError(f"{where}/params: need {need}")
        stiff = ti_stiffness(*(float(params[k]) for k in need))
    else:
        c = np.zeros((6, 6))
        for i in range(1, 7):
            for j in range(i, 7):
                key = f"c{i}{j}"
                if key not in params:
                    raise SchemaError(f"{where}/params/{key}: missing")
                c[i - 1, j - 1] = c[j - 1, i - 1] = float(params[key])
        stiff = StiffnessVoigt(c)

    if not stiff.is_positive_definite():
        raise SchemaError(f"{where}/params: moduli not positive definite")
    return MaterialPoint(rho=float(rho), stiffness=stiff)


def profile_from_json(source) -> RadialProfile:
    """Load a layered profile from a JSON file path, file object or dict."""
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict) or "layers" not in doc:
        raise SchemaError("/: expected object with 'layers'")
    layers = doc["layers"]
    if not isinstance(layers, list) or not layers:
        raise SchemaError("/layers: expected non-empty array")
    items = []
    for i, layer in enumerate(layers):
        if not isinstance(layer, dict):
            raise SchemaError(f"/layers/{i}: expected object")
        for key in ("r_in", "r_out", "material"):
            if key not in layer:
                raise SchemaError(f"/layers/{i}/{key}: missing")
        r_in, r_out = layer["r_in"], layer["r_out"]
        if not isinstance(r_in, (int, float)) or not isinstance(r_out, (int, float)):
            raise SchemaError(f"/layers/{i}: r_in/r_out must be numbers")
        mp = _material_from_json(layer["material"], f"/layers/{i}/material")
        items.append((float(r_in), float(r_out), mp))
    try:
        return RadialProfile.piecewise(items)
    except ValueError as exc:
        raise SchemaError(f"/layers: {exc}") from None
