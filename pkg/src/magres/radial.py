"""Radial fiber operators of a 2D magnetic Laplacian and their spectra.

Restricting (-i nabla - s A)^2 to the angular sector e^{i m phi} gives the
radial operator

    h_m = -d^2/dr^2 - (1/r) d/dr + (m/r - s a(r))^2      (field scale s = b)

acting in L^2(r dr). The Liouville substitution v = sqrt(r) u turns the
measure into dr and produces the extra potential -1/(4 r^2). Discretely we
realize that form on a staggered grid r_j = (j - 1/2) dr with cell faces
F_i = i dr: the quadratic form

    q(u) = kin * sum_i F_i (u_i - u_{i-1})^2 / dr + sum_j V(r_j) u_j^2 r_j dr

symmetrized by D = diag(sqrt(r_j dr)) yields a real symmetric tridiagonal
matrix. The face weight F_0 = 0 encodes the exact zero-flux condition at the
coordinate singularity r = 0 (no ghost node, no explicit 1/(4r^2) term), and
eigenvectors come out orthonormal in the discrete r dr inner product.

Two scale conventions share the same assembly:
  'b':  kin = 1,   V = (m/r - b a(r))^2        eigenvalues of the b-scaled form
  'h':  kin = h^2, V = (h m / r - a(r))^2      semiclassical (-ih nabla - A)^2

The scheme is second order in dr; level-sweep routines refine eigenvalues by
Richardson extrapolation over (N/2, N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.special import jn_zeros

from ._parallel import pmap
from .errors import (DecayCheckError, NumericalError, TruncationError,
                     ValidationError)
from .fields import FieldProfile, make_profile, zero_profile, FieldSpec


@dataclass(frozen=True)
class RadialGrid:
    r_max: float  # truncation radius
    N: int  # number of staggered nodes

    def __post_init__(self):
        if not (self.r_max > 0 and math.isfinite(self.r_max)):
            raise ValidationError("r_max must be positive and finite")
        if self.N < 64:
            raise ValidationError("N must be at least 64")

    @property
    def dr(self) -> float:
        return self.r_max / self.N

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) * self.dr

    @property
    def faces(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.dr

    def halved(self) -> "RadialGrid":
        if self.N % 2:
            raise ValidationError("N must be even to halve the grid")
        return RadialGrid(self.r_max, self.N // 2)


def face_form(w_faces, mass, dr, V, boundary):
    """Tridiagonal (diag, off) of the face-weighted form.

    w_faces has N+1 entries (kinetic weight per cell face), mass has N
    (the measure density at nodes), V has N. The far boundary is either a
    Dirichlet value at the last face (mirror ghost: weight doubled) or a
    natural/Neumann end (last face free).
    """
    diag = (w_faces[:-1] + w_faces[1:]) / (mass * dr * dr) + V
    if boundary == "dirichlet_far":
        diag = np.concatenate([
            diag[:-1],
            [(w_faces[-2] + 2.0 * w_faces[-1]) / (mass[-1] * dr * dr) + V[-1]],
        ])
    elif boundary == "neumann_far":
        diag = np.concatenate([
            diag[:-1],
            [w_faces[-2] / (mass[-1] * dr * dr) + V[-1]],
        ])
    else:
        raise ValidationError(f"unknown boundary {boundary!r}")
    # per-factor roots: safe for complex mass (product args can leave the
    # principal branch at large scaling angles)
    off = -w_faces[1:-1] / (dr * dr * np.sqrt(mass[:-1]) * np.sqrt(mass[1:]))
    return diag, off


@dataclass(frozen=True, eq=False)
class FiberOperator:
    m: int  # angular momentum
    scale: float  # field scale b, or h in the 'h' convention
    convention: str  # 'b' or 'h'
    boundary: str  # 'dirichlet_far' | 'neumann_far'
    grid: RadialGrid
    diag: np.ndarray = field(repr=False)
    off: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)  # potential at nodes
    kin: float  # kinetic coefficient (1 or h^2)
    profile: FieldProfile = field(repr=False, compare=False)


@dataclass(frozen=True, eq=False)
class EigenResult:
    values: np.ndarray  # ascending
    vectors: np.ndarray = field(repr=False)  # N x k, orthonormal in r dr
    grid: RadialGrid
    m: int
    scale: float
    convention: str
    boundary: str
    profile: FieldProfile = field(repr=False, compare=False)


def assemble_fiber(profile: FieldProfile, m: int, scale: float,
                   grid: RadialGrid, boundary: str = "dirichlet_far",
                   convention: str = "b", window: float | None = None
                   ) -> FiberOperator:
    """Symmetric tridiagonal fiber operator at angular momentum m.

    window, if given, is the top of the spectral range the caller intends to
    trust; the Dirichlet truncation is rejected unless the potential at r_max
    exceeds it by the safety margin 10.
    """
    if not (scale > 0 and math.isfinite(scale)):
        raise ValidationError("scale must be > 0")
    if convention not in ("b", "h"):
        raise ValidationError("convention must be 'b' or 'h'")
    r = grid.nodes
    a = np.asarray(profile.a(r), dtype=float)
    if convention == "b":
        kin = 1.0
        V = (m / r - scale * a) ** 2
    else:
        kin = scale * scale
        V = (scale * m / r - a) ** 2
    if window is not None and boundary == "dirichlet_far":
        if V[-1] < window + 10.0:
            raise TruncationError(
                f"potential at r_max is {V[-1]:.3g}, below the requested "
                f"window {window:.3g} + 10; enlarge r_max")
    w_faces = kin * grid.faces
    diag, off = face_form(w_faces, r, grid.dr, V, boundary)
    return FiberOperator(m=m, scale=scale, convention=convention,
                         boundary=boundary, grid=grid, diag=diag, off=off,
                         V=V, kin=kin, profile=profile)


def eigs_lowest(op: FiberOperator, k: int) -> EigenResult:
    """k lowest eigenpairs of the fiber; vectors orthonormal in r dr."""
    if not (1 <= k < op.grid.N):
        raise ValidationError("need 1 <= k < N")
    try:
        vals, vecs = sla.eigh_tridiagonal(
            op.diag, op.off, select="i", select_range=(0, k - 1))
    except Exception as exc:  # LinAlgError, convergence failure
        raise NumericalError(
            f"tridiagonal eigensolve failed for m={op.m}, "
            f"N={op.grid.N}: {exc}") from exc
    r = op.grid.nodes
    u = vecs / np.sqrt(r * op.grid.dr)[:, None]
    # deterministic sign: largest-magnitude component positive
    for j in range(u.shape[1]):
        i = int(np.argmax(np.abs(u[:, j])))
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
    return EigenResult(values=vals, vectors=u, grid=op.grid, m=op.m,
                       scale=op.scale, convention=op.convention,
                       boundary=op.boundary, profile=op.profile)


def fiber_levels(profile: FieldProfile, m: int, scale: float,
                 grid: RadialGrid, k: int, boundary: str = "dirichlet_far",
                 convention: str = "b", refine: bool = True,
                 window: float | None = None) -> np.ndarray:
    """k lowest fiber eigenvalues, Richardson-extrapolated over (N/2, N).

    The scheme is O(dr^2), so (4 lam_N - lam_{N/2}) / 3 removes the leading
    error term. refine=False returns the plain N-grid values.
    """
    op = assemble_fiber(profile, m, scale, grid, boundary, convention, window)
    vals = sla.eigh_tridiagonal(op.diag, op.off, select="i",
                                select_range=(0, k - 1), eigvals_only=True)
    if not refine:
        return vals
    oph = assemble_fiber(profile, m, scale, grid.halved(), boundary,
                         convention, window)
    vals_h = sla.eigh_tridiagonal(oph.diag, oph.off, select="i",
                                  select_range=(0, k - 1), eigvals_only=True)
    return (4.0 * vals - vals_h) / 3.0


def default_m_range(n_max: int) -> range:
    return range(-2 * n_max - 8, 2 * n_max + 9)


def _dedup_ascending(values_with_meta, tol_rel: float = 1e-8):
    """Strictly-increasing levels from a sorted (value, m, n) list."""
    out = []
    for lam, m, n in values_with_meta:
        if out and abs(lam - out[-1][0]) <= tol_rel * (1.0 + abs(out[-1][0])):
            continue
        out.append((lam, m, n))
    return out


def sector_sweep(profile: FieldProfile, scale: float, m_range, grid: RadialGrid,
                 k: int, boundary: str = "dirichlet_far", convention: str = "b",
                 refine: bool = True, window: float | None = None):
    """Per-sector lowest levels, merged ascending as (value, m, n) rows."""
    ms = list(m_range)

    def solve(m):
        return fiber_levels(profile, m, scale, grid, k, boundary, convention,
                            refine, window)
    results = pmap(solve, ms)
    rows = [(float(lam), m, n)
            for m, vals in zip(ms, results) for n, lam in enumerate(vals)]
    rows.sort(key=lambda t: (t[0], t[1], t[2]))
    return rows


def _check_m_truncation(rows_dedup, rows_all, ms, n_max):
    """Boundary sectors must contribute nothing below the returned maximum."""
    top = rows_dedup[n_max][0]
    m_lo, m_hi = min(ms), max(ms)
    for m_edge in (m_lo, m_hi):
        lowest = min(lam for lam, m, n in rows_all if m == m_edge)
        if lowest <= top * (1.0 + 1e-10):
            raise NumericalError(
                f"m-range truncation unsafe: sector m={m_edge} has an "
                f"eigenvalue {lowest:.6g} at or below the requested top level "
                f"{top:.6g}; widen m_range")


def anharmonic_levels(gamma: float, n_max: int, m_range=None,
                      grid: RadialGrid | None = None) -> np.ndarray:
    """Anharmonic Landau levels: distinct low eigenvalues of the b=1
    full-plane operator with field |x|^gamma, merged over sectors."""
    if gamma <= 0:
        raise ValidationError("gamma must be > 0")
    if grid is None:
        grid = RadialGrid(12.0, 3000)
    if m_range is None:
        m_range = default_m_range(n_max)
    profile = make_profile(FieldSpec("anharmonic", {"gamma": gamma}, R0=1.0))
    ms = list(m_range)
    rows = sector_sweep(profile, 1.0, ms, grid, k=n_max + 1)
    levels = _dedup_ascending(rows)
    if len(levels) < n_max + 1:
        raise NumericalError("not enough distinct levels; widen m_range")
    _check_m_truncation(levels, rows, ms, n_max)
    top = levels[n_max][0]
    r_end = grid.nodes[-1]
    V_end = min((m / r_end - profile.a(r_end)) ** 2 for m in ms)
    if V_end < top + 10.0:
        raise TruncationError(
            f"potential at r_max ({V_end:.3g}) too low for level {top:.3g}; "
            f"enlarge r_max")
    return np.array([lam for lam, m, n in levels[: n_max + 1]])


def well_levels(b0: float, h: float, n_max: int, m_range=None,
                grid: RadialGrid | None = None) -> np.ndarray:
    """Low eigenvalues of the semiclassical operator for B(r) = b0 + r^2."""
    if b0 <= 0:
        raise ValidationError("b0 must be > 0")
    if h <= 0:
        raise ValidationError("h must be > 0")
    if grid is None:
        grid = RadialGrid(3.0, 3000)
    if m_range is None:
        m_range = default_m_range(n_max)
    profile = make_profile(FieldSpec("well_radial", {"b0": b0}, R0=1.0))
    ms = list(m_range)
    rows = sector_sweep(profile, h, ms, grid, k=n_max + 1, convention="h")
    top = rows[n_max][0]
    r_end = grid.nodes[-1]
    V_end = min((h * m / r_end - profile.a(r_end)) ** 2 for m in ms)
    if V_end < top + 10.0:
        raise TruncationError(
            f"potential ceiling {V_end:.3g} too low for level {top:.3g}")
    return np.array([lam for lam, m, n in rows[: n_max + 1]])


def island_neumann_levels(rho1: float, rho2: float, b: float, n_max: int,
                          m_range=None, grid: RadialGrid | None = None
                          ) -> np.ndarray:
    """Strictly increasing eigenvalues of the magnetic Neumann Laplacian on
    the disk of radius rho2 with field 1 on [rho1, rho2] and 0 inside."""
    if not (0 < rho1 < rho2):
        raise ValidationError("need 0 < rho1 < rho2")
    if b < 0:
        raise ValidationError("b must be >= 0")
    if grid is None:
        grid = RadialGrid(rho2, 3000)
    if abs(grid.r_max - rho2) > 1e-12 * rho2:
        raise ValidationError("island grid must end exactly at rho2")
    if m_range is None:
        m_range = default_m_range(n_max)
    if b == 0.0:
        profile = zero_profile(R0=rho2)
        scale = 1.0  # a == 0 makes the operator scale-free
    else:
        profile = make_profile(
            FieldSpec("island_annular", {"rho1": rho1, "rho2": rho2}, R0=rho2))
        scale = b
    ms = list(m_range)
    rows = sector_sweep(profile, scale, ms, grid, k=n_max + 1,
                        boundary="neumann_far")
    levels = _dedup_ascending(rows)
    if len(levels) < n_max + 1:
        raise NumericalError("not enough distinct levels; widen m_range")
    _check_m_truncation(levels, rows, ms, n_max)
    return np.array([lam for lam, m, n in levels[: n_max + 1]])


def dirichlet_disk_levels(rho1: float, n_max: int,
                          grid: RadialGrid | None = None) -> np.ndarray:
    """Dirichlet Laplacian eigenvalues on the disk of radius rho1,
    cross-checked against Bessel zeros j_{nu,k}^2 / rho1^2."""
    if rho1 <= 0:
        raise ValidationError("rho1 must be > 0")
    if grid is None:
        grid = RadialGrid(rho1, 3000)
    if abs(grid.r_max - rho1) > 1e-12 * rho1:
        raise ValidationError("disk grid must end exactly at rho1")
    profile = zero_profile(R0=rho1)
    m_hi = n_max + 2
    ms = list(range(-m_hi, m_hi + 1))
    rows = sector_sweep(profile, 1.0, ms, grid, k=n_max + 1)
    levels = _dedup_ascending(rows)
    if len(levels) < n_max + 1:
        raise NumericalError("not enough distinct disk levels")
    out = np.array([lam for lam, m, n in levels[: n_max + 1]])
    ref = np.sort(np.concatenate(
        [jn_zeros(nu, n_max + 1) ** 2 for nu in range(m_hi + 1)]))
    ref = ref[: n_max + 1] / (rho1 * rho1)
    err = np.max(np.abs(out - ref) / (1.0 + np.abs(ref)))
    if err > 1e-6:
        raise NumericalError(
            f"disk levels disagree with Bessel zeros by {err:.2e} relative")
    return out


def verify_ah_decay(result: EigenResult, gamma: float, c0: float,
                    doubled: EigenResult | None = None) -> float:
    """Weighted tail integral int (f'^2 + f^2) e^{2 c0 r^{2+gamma}} r dr for
    the lowest eigenfunction; the weight rate must sit below the critical
    1/(2+gamma). With a doubled-domain result, growth beyond 10% is flagged.
    """
    if c0 < 0:
        raise ValidationError("c0 must be >= 0")
    critical = 1.0 / (2.0 + gamma)
    if c0 >= critical:
        raise ValidationError(
            f"c0 = {c0} is at or above the critical rate {critical:.4g}")

    def integral(res: EigenResult) -> float:
        r = res.grid.nodes
        f = res.vectors[:, 0]
        # inverse iteration tracks the true decay down to ~1e-40 and then
        # plateaus at solver noise; only the resolved prefix is meaningful,
        # and the weight would amplify the noise plateau without bound
        floor = 1e-30 * np.max(np.abs(f))
        below = np.nonzero(np.abs(f) < floor)[0]
        cut = int(below[0]) if below.size else len(r)
        if cut < 8:
            raise NumericalError("eigenvector unresolved; grid too coarse")
        r, f = r[:cut], f[:cut]
        fp = np.gradient(f, r)
        t = (fp * fp + f * f) * r
        # product in log space: the bare weight overflows long after the
        # eigenfunction has decayed to nothing
        logs = np.where(t > 0.0, np.log(np.where(t > 0.0, t, 1.0))
                        + 2.0 * c0 * r ** (2.0 + gamma), -np.inf)
        if logs[-1] >= np.max(logs) - 10.0:
            raise DecayCheckError(
                f"weighted integrand still growing at the resolution limit "
                f"(c0 = {c0}); the integral diverges or is untrustworthy")
        return float(np.trapezoid(np.exp(logs - np.max(logs)), r)
                     * math.exp(np.max(logs)))

    I = integral(result)
    if doubled is not None:
        I2 = integral(doubled)
        if I2 > 1.10 * I:
            raise DecayCheckError(
                f"weighted integral grew {I2 / I:.3f}x under domain doubling; "
                f"c0 too close to critical or truncation unsafe")
    return I


def verify_island_decay(result: EigenResult, b: float, rho1: float) -> float:
    """Annulus decay integral of the lowest island eigenfunction:

        I(b) = int_{rho1 < r < rho2} (f^2 + f'^2 + (m/r - b a)^2 f^2)
               e^{ sqrt(b) (r - rho1) / 2 } r dr
    """
    r = result.grid.nodes
    f = result.vectors[:, 0]
    fp = np.gradient(f, r)
    a = np.asarray(result.profile.a(r), dtype=float)
    kin = fp * fp + (result.m / r - b * a) ** 2 * f * f
    weight = np.exp(0.5 * np.sqrt(b) * (r - rho1))
    mask = r > rho1
    rm = r[mask]
    return float(np.trapezoid(((f * f)[mask] + kin[mask]) * weight[mask] * rm,
                              rm))
