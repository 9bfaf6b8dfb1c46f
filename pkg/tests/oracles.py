"""Independent numerical oracles used to freeze expected values.

Everything here deliberately avoids the package's own discretization:
Bessel zeros come from a power series plus bisection (not scipy.special),
the half-line band oracle uses a node-centered ghost-point scheme (not the
package's staggered face scheme), and normalization checks go through
adaptive quadrature of the closed-form integrand.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg as sla
from scipy.integrate import quad


def bessel_j(nu: int, x: float, terms: int = 80) -> float:
    """J_nu(x) by the ascending power series; fine for x <= 20."""
    acc = []
    for j in range(terms):
        sign = -1.0 if j % 2 else 1.0
        log_mag = ((2 * j + nu) * math.log(x / 2.0)
                   - math.lgamma(j + 1) - math.lgamma(j + nu + 1))
        acc.append(sign * math.exp(log_mag))
    return math.fsum(acc)


def bessel_j_zero(nu: int, k: int) -> float:
    """k-th positive zero of J_nu by scan plus bisection."""
    xs = np.arange(0.5, 40.0, 0.1)
    vals = [bessel_j(nu, float(x)) for x in xs]
    found = 0
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            continue
        if vals[i] * vals[i + 1] < 0:
            found += 1
            if found == k:
                lo, hi = float(xs[i]), float(xs[i + 1])
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    if bessel_j(nu, lo) * bessel_j(nu, mid) <= 0:
                        hi = mid
                    else:
                        lo = mid
                return 0.5 * (lo + hi)
    raise RuntimeError(f"zero {k} of J_{nu} not found in scan range")


def half_line_neumann_mu(xi: float, T: float = 12.0, N: int = 4000) -> float:
    """Lowest eigenvalue of -u'' + (t - xi)^2 u on [0, T], Neumann at 0,
    Dirichlet at T; node-centered ghost-point scheme, Richardson refined.
    """

    def plain(n: int) -> float:
        h = T / n
        t = h * np.arange(n)  # t_0 = 0 .. t_{n-1}; Dirichlet at t_n = T
        diag = 2.0 / h ** 2 + (t - xi) ** 2
        off = np.full(n - 1, -1.0 / h ** 2)
        # ghost point u_{-1} = u_1 makes row 0 carry -2/h^2; symmetrize by
        # scaling the first coordinate with 1/sqrt(2)
        off = off.copy()
        off[0] = -math.sqrt(2.0) / h ** 2
        return float(sla.eigh_tridiagonal(
            diag, off, select="i", select_range=(0, 0),
            eigvals_only=True)[0])

    lam_n = plain(N)
    lam_h = plain(N // 2)
    return (4.0 * lam_n - lam_h) / 3.0


def de_gennes_constant(T: float = 12.0, N: int = 4000,
                       bracket: tuple = (0.4, 1.2)) -> tuple:
    """(Theta_0, minimizer) of the half-line Neumann band by golden section."""
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = bracket
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc = half_line_neumann_mu(c, T, N)
    fd = half_line_neumann_mu(d, T, N)
    while b - a > 1e-10:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = half_line_neumann_mu(c, T, N)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = half_line_neumann_mu(d, T, N)
    xi = 0.5 * (a + b)
    return half_line_neumann_mu(xi, T, N), xi


def landau_norm_quad(n: int, m: int, b: float, radial) -> float:
    """Full-plane L2 norm of the radial factor by adaptive quadrature:
    2 pi * int |radial(r)|^2 r dr. `radial` is the function under test."""
    val, _ = quad(lambda r: 2.0 * math.pi * radial(r) ** 2 * r,
                  0.0, np.inf, limit=200)
    return math.sqrt(val)


def richardson_order(f_n: float, f_2n: float, f_4n: float) -> float:
    """Observed convergence order from three dyadic refinements."""
    return math.log2(abs((f_n - f_2n) / (f_2n - f_4n)))
