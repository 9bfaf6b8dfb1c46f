"""Cutoff quasimodes, residual norms, and resonance-window arithmetic.

A Landau eigenfunction of the constant-field plane at scale b,

    psi_{n,m}(r, phi) = C_{n,m} r^{|m|} e^{i m phi} e^{-b r^2/4} L_n^{|m|}(b r^2/2),

truncated by a radial C^2 cutoff chi supported in [0, r0], is an approximate
eigenfunction of any operator that agrees with the Landau one on [0, r0].
Because chi is radial and the vector potential is azimuthal, A.grad(chi) = 0,
so the commutator residual reduces in each sector to

    (H - Lambda_n)(chi f) = -(chi'' + chi'/r) f - 2 chi' f',

supported on the cutoff shoulder where the Gaussian has already decayed;
its norm is exponentially small in b. The residual size feeds the
Tang-Zworski window: a rectangle around the quasimode energy guaranteed to
contain a resonance once the residual is small enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError
from .fields import FieldProfile
from .radial import RadialGrid


def laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x) by the three-term recurrence."""
    if n < 0 or k < 0:
        raise ValidationError("laguerre requires n, k >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur


def _landau_norm_const(n: int, m: int, b: float) -> float:
    # full-plane L^2 normalization: 2 pi int |C r^{|m|} e^{-br^2/4} L|^2 r dr = 1
    k = abs(m)
    log_c2 = (math.log(b / (2.0 * math.pi)) + k * math.log(b / 2.0)
              + math.lgamma(n + 1) - math.lgamma(n + k + 1))
    return math.exp(0.5 * log_c2)


def landau_radial(n: int, m: int, b: float, r):
    """Radial factor of the normalized Landau eigenfunction psi_{n,m}."""
    if b <= 0:
        raise ValidationError("b must be > 0")
    if n < 0:
        raise ValidationError("n must be >= 0")
    r = np.asarray(r, dtype=float)
    k = abs(m)
    C = _landau_norm_const(n, m, b)
    return C * r ** k * np.exp(-b * r * r / 4.0) * laguerre(n, k, b * r * r / 2.0)


def _landau_radial_derivative(n: int, m: int, b: float, r):
    # f' = f (|m|/r - b r/2) - C r^{|m|} e^{-br^2/4} L_{n-1}^{|m|+1}(br^2/2) b r
    r = np.asarray(r, dtype=float)
    k = abs(m)
    f = landau_radial(n, m, b, r)
    out = f * (-b * r / 2.0)
    if k:
        out = out + f * (k / r)
    if n:
        C = _landau_norm_const(n, m, b)
        out = out - (C * r ** k * np.exp(-b * r * r / 4.0)
                     * laguerre(n - 1, k + 1, b * r * r / 2.0) * b * r)
    return out


def _shoulder(r, r0: float, delta: float):
    """Cutoff chi and its first two derivatives on the grid.

    chi = 1 on [0, (1-delta) r0], a quintic smoothstep down to 0 at r0:
    the C^2 shoulder keeps |chi'| <= (15/8)/(delta r0).
    """
    r = np.asarray(r, dtype=float)
    w = delta * r0
    s = np.clip((r - (1.0 - delta) * r0) / w, 0.0, 1.0)
    chi = 1.0 - s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)
    d1 = -30.0 * s ** 2 * (1.0 - s) ** 2 / w
    d2 = -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (w * w)
    return chi, d1, d2


@dataclass(frozen=True, eq=False)
class Quasimode:
    n: int
    m: int
    b: float
    r0: float  # cutoff outer radius
    delta: float  # shoulder fraction
    grid: RadialGrid
    values: np.ndarray = field(repr=False)  # chi * psi radial part at nodes
    norm: float  # discrete L^2 norm over the plane measure


def build_quasimode(n: int, m: int, b: float, r0: float, delta: float,
                    grid: RadialGrid) -> Quasimode:
    if not (0.0 < delta < 1.0):
        raise ValidationError("delta must lie in (0, 1)")
    if r0 <= 0 or r0 > grid.r_max:
        raise ValidationError("need 0 < r0 <= r_max")
    if delta * r0 / grid.dr < 16.0:
        raise ValidationError(
            f"cutoff shoulder spans {delta * r0 / grid.dr:.1f} < 16 grid "
            f"cells; refine the grid")
    r = grid.nodes
    chi, _, _ = _shoulder(r, r0, delta)
    vals = chi * landau_radial(n, m, b, r)
    vals = np.where(r <= r0, vals, 0.0)
    norm = math.sqrt(2.0 * math.pi * float(np.sum(vals * vals * r) * grid.dr))
    return Quasimode(n=n, m=m, b=b, r0=r0, delta=delta, grid=grid,
                     values=vals, norm=norm)


def quasimode_residual(q: Quasimode, profile: FieldProfile
                       ) -> tuple[float, float]:
    """(||(H - Lambda_n) u||, ||u||) for the cutoff Landau quasimode.

    Requires B = 1 on [0, r0]: the commutator formula differentiates the
    analytic Landau eigenfunction, which solves (H - Lambda_n) psi = 0 only
    where the field is the constant one.
    """
    r = q.grid.nodes
    inside = r <= q.r0
    B_vals = np.asarray(profile.B(r[inside]), dtype=float)
    if not np.allclose(B_vals, 1.0, rtol=0.0, atol=1e-12):
        raise ValidationError("field is not constant 1 on [0, r0]")
    chi, d1, d2 = _shoulder(r, q.r0, q.delta)
    f = landau_radial(q.n, q.m, q.b, r)
    fp = _landau_radial_derivative(q.n, q.m, q.b, r)
    g = -(d2 + d1 / r) * f - 2.0 * d1 * fp
    g = np.where(r <= q.r0, g, 0.0)
    res = math.sqrt(2.0 * math.pi * float(np.sum(g * g * r) * q.grid.dr))
    return res, q.norm


_MODEL_KINDS = {"anharmonic": "anharmonic", "well": "well_radial",
                "island": "island_annular"}


def generic_quasimode_residual(result, r0: float, delta: float,
                               profile: FieldProfile, model: str,
                               index: int = 0) -> float:
    """Residual norm of a cutoff discrete eigenfunction against the
    full-plane fiber operator of `profile`.

    `result` is an EigenResult whose eigenfunction solved an auxiliary
    problem (full-plane anharmonic/well, or the island disk with its Neumann
    wall); the cutoff removes the part that sees the difference. The residual
    is evaluated at the matrix level on a grid extended past the cutoff with
    the same spacing, so it is exactly the discrete commutator, free of any
    separate discretization floor.
    """
    from .radial import assemble_fiber  # local import avoids cycle at import time

    if model not in _MODEL_KINDS:
        raise ValidationError(f"unknown model {model!r}; expected one of "
                              f"{sorted(_MODEL_KINDS)}")
    if profile.spec is None or profile.spec.kind != _MODEL_KINDS[model]:
        raise ValidationError(
            f"profile kind {getattr(profile.spec, 'kind', None)!r} does not "
            f"match model {model!r}")
    if not (0.0 < delta < 1.0):
        raise ValidationError("delta must lie in (0, 1)")
    grid = result.grid
    if r0 >= grid.r_max:
        raise ValidationError("cutoff radius must sit inside the source grid")
    if delta * r0 / grid.dr < 16.0:
        raise ValidationError("cutoff shoulder under-resolved on this grid")
    r_src = grid.nodes
    mask = r_src <= r0
    B_have = np.asarray(result.profile.B(r_src[mask]), dtype=float)
    B_want = np.asarray(profile.B(r_src[mask]), dtype=float)
    if not np.allclose(B_have, B_want, rtol=0.0, atol=1e-12):
        raise ValidationError(
            "model field differs on [0, r0] from the field that produced the "
            "eigenpair")

    # extend well past both the cutoff and the field support; a power-of-two
    # blowup keeps the extended spacing bit-identical to the source grid
    target = max(2.0 * grid.r_max, r0 + 1.0)
    if math.isfinite(profile.R0):
        target = max(target, 2.0 * profile.R0)
    k = 2
    while k * grid.r_max < target:
        k *= 2
    n_ext = k * grid.N
    ext = RadialGrid(k * grid.r_max, n_ext)
    lam = float(result.values[index])
    op = assemble_fiber(profile, result.m, result.scale, ext,
                        boundary="dirichlet_far", convention=result.convention)
    r = ext.nodes
    chi, _, _ = _shoulder(r, r0, delta)
    u = np.zeros(n_ext)
    u[: grid.N] = result.vectors[:, index]
    v = chi * u * np.sqrt(r * grid.dr)  # cutoff, back to the symmetric frame
    res = (op.diag - lam) * v
    res[:-1] += op.off * v[1:]
    res[1:] += op.off * v[:-1]
    return float(np.linalg.norm(res))


@dataclass(frozen=True)
class TZWindow:
    E: float  # window center
    h: float
    c: float  # decay-rate parameter of the residual certificate
    r0: float  # quasimode support radius
    half_width: float  # w(h) = h^-2 e^{-c r0^2 / (2h)}
    depth: float  # h^-3 S(h)
    S: float  # e^{-c r0^2 / h}
    R: float  # S(h)^2, the residual-squared scale; R < S always


def tz_window(E: float, h: float, c: float, r0: float) -> TZWindow:
    """Resonance-window rectangle [E - w, E + w] + i[-h^-3 S, 0]."""
    if c <= 0 or h <= 0 or r0 <= 0:
        raise ValidationError("tz_window requires c, h, r0 > 0")
    K = c * r0 * r0
    S = math.exp(-K / h)
    w = math.exp(-K / (2.0 * h)) / (h * h)
    depth = S / h ** 3
    return TZWindow(E=E, h=h, c=c, r0=r0, half_width=w, depth=depth,
                    S=S, R=S * S)


def tz_crossover(c: float, r0: float) -> float | None:
    """Largest h below which the window half-width w(h) drops under 1.

    w(h) = h^-2 e^{-c r0^2/(2h)} vanishes at both ends and peaks at
    h = c r0^2 / 4; if even the peak stays below 1 the window is always
    informative and None is returned. Otherwise the root of w(h) = 1 on the
    rising side (0, h_peak) is the crossover: for h below it the certificate
    window is smaller than 1.
    """
    if c <= 0 or r0 <= 0:
        raise ValidationError("tz_crossover requires c, r0 > 0")
    K = c * r0 * r0
    h_peak = K / 4.0

    def log_w(h: float) -> float:
        return -2.0 * math.log(h) - K / (2.0 * h)

    if log_w(h_peak) < 0.0:
        return None
    lo = h_peak
    while log_w(lo) > 0.0:
        lo /= 2.0
    return float(brentq(log_w, lo, h_peak, xtol=1e-14, rtol=8.9e-16))
