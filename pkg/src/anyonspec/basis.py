"""Singularity-adapted Laguerre bases and their matrix blocks.

The trial functions on sector exponent ``nu`` (``nu = alpha`` for the
s wave, ``|2k + alpha|`` on sector k) are

    phi_i(r) = C_i r^nu L_i^{(2 nu + 1)}(r / s) exp(-r / (2 s)),

normalized to an exact orthonormal system in ``L^2(r dr)``; the mass
matrix is the identity by construction.  The quadratic-form block is a
pure Gauss-Laguerre sum of polynomials (exact up to roundoff), the
potential blocks use rules matched to the potential kind, and the
overlaps with a defect element fall back to adaptive quadrature.

Everything here is expressed in the radial coefficient convention: an
s-wave plane wave function ``psi(x) = u(r) / sqrt(2 pi)`` has
coefficient function ``u`` and plane norm ``||u||_{L^2(r dr)}``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, roots_genlaguerre, roots_jacobi

from .potentials import PotentialSpec, eval_potential, quadrature_breakpoints
from .specfun import Order
from .specfun._backend import kernels

__all__ = ["RadialBasis"]


def _genlaguerre_table(nmax: int, mu: float, t: np.ndarray) -> np.ndarray:
    """L_i^{(mu)}(t) for i = 0..nmax-1 by the three-term recurrence."""
    out = np.empty((nmax, t.size))
    out[0] = 1.0
    if nmax > 1:
        out[1] = 1.0 + mu - t
    for i in range(1, nmax - 1):
        out[i + 1] = ((2 * i + 1 + mu - t) * out[i] - (i + mu) * out[i - 1]) / (i + 1)
    return out


def _scalar_genlaguerre(n: int, mu: float, t: float) -> float:
    """L_n^{(mu)}(t) at one point by the same recurrence."""
    prev = 1.0
    if n == 0:
        return prev
    cur = 1.0 + mu - t
    for i in range(1, n):
        prev, cur = cur, ((2 * i + 1 + mu - t) * cur - (i + mu) * prev) / (i + 1)
    return cur


@dataclass(frozen=True)
class RadialBasis:
    """Orthonormal weighted Laguerre basis on the half line.

    Parameters
    ----------
    order : Order
        Statistics parameter; fixes the default boundary exponent.
    size : int
        Number of functions N (at least 2).
    scale : float
        Length scale s; the functions decay like ``exp(-r / (2s))``.
    nu : float, optional
        Boundary exponent; defaults to ``order.alpha`` (s wave).  Sector
        solvers pass ``|2k + alpha|``.
    """

    order: Order
    size: int
    scale: float
    nu: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.order, Order):
            object.__setattr__(self, "order", Order(float(self.order)))
        if int(self.size) < 2:
            raise ValueError("basis size must be at least 2")
        object.__setattr__(self, "size", int(self.size))
        s = float(self.scale)
        if not (s > 0.0 and math.isfinite(s)):
            raise ValueError(f"basis scale must be positive, got {self.scale}")
        object.__setattr__(self, "scale", s)
        nu = self.order.alpha if self.nu is None else float(self.nu)
        if nu <= 0.0:
            raise ValueError("boundary exponent nu must be positive")
        object.__setattr__(self, "nu", nu)

    # -- normalization ------------------------------------------------

    def log_norms(self) -> np.ndarray:
        """log of the orthonormalization constants C_i."""
        i = np.arange(self.size)
        log_h = gammaln(i + 2 * self.nu + 2) - gammaln(i + 1)
        return -0.5 * (log_h + (2 * self.nu + 2) * math.log(self.scale))

    def norms(self) -> np.ndarray:
        return np.exp(self.log_norms())

    def boundary_coefficients(self) -> np.ndarray:
        """d_i with ``phi_i = d_i r^nu + O(r^(nu+1))`` at the origin."""
        i = np.arange(self.size)
        log_l0 = (
            gammaln(i + 2 * self.nu + 2)
            - gammaln(i + 1)
            - gammaln(2 * self.nu + 2)
        )
        return np.exp(self.log_norms() + log_l0)

    # -- pointwise evaluation ----------------------------------------

    def functions(self, r) -> np.ndarray:
        """Matrix ``phi_i(r_j)``, shape (size, len(r))."""
        rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
        t = rr / self.scale
        L = _genlaguerre_table(self.size, 2 * self.nu + 1, t)
        C = self.norms()
        return C[:, None] * rr**self.nu * L * np.exp(-0.5 * t)

    def derivatives(self, r) -> np.ndarray:
        """Matrix ``phi_i'(r_j)``, shape (size, len(r))."""
        rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
        s = self.scale
        t = rr / s
        mu = 2 * self.nu + 1
        L = _genlaguerre_table(self.size, mu, t)
        Lp = np.zeros_like(L)
        if self.size > 1:
            # d/dt L_i^{(mu)} = -L_{i-1}^{(mu+1)}
            Lp[1:] = -_genlaguerre_table(self.size - 1, mu + 1, t)
        C = self.norms()
        radial = self.nu / rr * L + (Lp - 0.5 * L) / s
        return C[:, None] * rr**self.nu * radial * np.exp(-0.5 * t)

    def second_derivatives(self, r) -> np.ndarray:
        """Matrix ``phi_i''(r_j)``, shape (size, len(r))."""
        rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
        s = self.scale
        t = rr / s
        nu = self.nu
        mu = 2 * nu + 1
        L = _genlaguerre_table(self.size, mu, t)
        Lp = np.zeros_like(L)
        Lpp = np.zeros_like(L)
        if self.size > 1:
            Lp[1:] = -_genlaguerre_table(self.size - 1, mu + 1, t)
        if self.size > 2:
            Lpp[2:] = _genlaguerre_table(self.size - 2, mu + 2, t)
        C = self.norms()
        # (r^nu L e^{-t/2})'' with t = r/s, by the product rule
        poly = (
            nu * (nu - 1) / rr**2 * L
            + 2 * nu / (rr * s) * (Lp - 0.5 * L)
            + (Lpp - Lp + 0.25 * L) / (s * s)
        )
        return C[:, None] * rr**nu * poly * np.exp(-0.5 * t)

    # -- matrix blocks ------------------------------------------------

    def form_block(self, centrifugal_nu: float | None = None) -> np.ndarray:
        """Sector-form matrix ``int r (phi_i' phi_j' + nu_c^2 phi_i phi_j / r^2) dr``.

        With the basis exponent matching ``|nu_c|`` the integrand reduces
        to a Gauss-Laguerre weight times a polynomial, so the rule below
        is exact up to roundoff.
        """
        nu = self.nu
        nu_c = nu if centrifugal_nu is None else float(centrifugal_nu)
        n_nodes = self.size + 12
        t, w = roots_genlaguerre(n_nodes, 2 * nu - 1)
        mu = 2 * nu + 1
        A = _genlaguerre_table(self.size, mu, t)
        Ashift = np.zeros_like(A)
        if self.size > 1:
            Ashift[1:] = _genlaguerre_table(self.size - 1, mu + 1, t)
        B = nu * A - t * (Ashift + 0.5 * A)
        core = (B * w) @ B.T + nu_c * nu_c * ((A * w) @ A.T)
        i = np.arange(self.size)
        log_h = gammaln(i + 2 * nu + 2) - gammaln(i + 1)
        scale = np.exp(-0.5 * (log_h[:, None] + log_h[None, :]))
        return core * scale / (self.scale * self.scale)

    def potential_block(self, potential: PotentialSpec) -> np.ndarray:
        """Matrix ``int r V(r) phi_i phi_j dr`` for a supported potential."""
        if potential.is_zero:
            return np.zeros((self.size, self.size))
        if potential.kind == "finite_well":
            block = self._jacobi_segment(0.0, potential.radius)
            return -potential.depth * block
        if potential.kind == "gaussian":
            return self._smooth_block(potential)
        # piecewise kinds: integrate between breakpoints
        return self._segmented_block(potential)

    def defect_overlaps(self, lam: float, rel_tol: float = 1e-12) -> np.ndarray:
        """Vector ``<phi_i, g_lam>`` against the coefficient-space defect ray.

        ``g_lam(r) = sqrt(2 pi) lam^alpha K_alpha(lam r)``; the integrand
        is regular at the origin because the basis supplies ``r^(1+nu)``
        against the ``r^-alpha`` singularity.  Adaptive quadrature per
        entry; these overlaps are the only blocks without a closed form.
        """
        a = self.order.alpha
        lam = float(lam)
        pref = math.sqrt(2.0 * math.pi) * lam**a
        rate = lam + 0.5 / self.scale
        R = 90.0 / rate
        C = self.norms()
        mu = 2 * self.nu + 1
        out = np.empty(self.size)

        def integrand_for(i: int):
            def f(r: float) -> float:
                t = r / self.scale
                L = _scalar_genlaguerre(i, mu, t)
                k = kernels.besselk_eval(a, lam * r)[0]
                return r * C[i] * r**self.nu * L * math.exp(-0.5 * t) * pref * k

            return f

        for i in range(self.size):
            f = integrand_for(i)
            v1, _ = integrate.quad(
                f, 0.0, R / 8.0, epsabs=1e-300, epsrel=rel_tol, limit=300
            )
            with warnings.catch_warnings():
                # The tail integral decays like exp(-rate r) and can sit far
                # below any relative tolerance; quad then reports roundoff
                # even though the contribution is negligible.
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                v2, _ = integrate.quad(
                    f, R / 8.0, R, epsabs=1e-300, epsrel=rel_tol, limit=300
                )
            out[i] = v1 + v2
        return out

    # -- block helpers ------------------------------------------------

    def _jacobi_segment(self, lo: float, hi: float, n_nodes: int = 90) -> np.ndarray:
        """``int_lo^hi r phi_i phi_j dr`` with the r^{2 nu} endpoint weight.

        For ``lo = 0`` a Gauss-Jacobi rule absorbs the fractional power
        exactly; interior segments use plain Legendre (Jacobi with zero
        exponents).
        """
        nu = self.nu
        if lo == 0.0:
            x, w = roots_jacobi(n_nodes, 0.0, 2 * nu)
            r = hi * (x + 1.0) / 2.0
            jac = (hi / 2.0) ** (2 * nu + 1)
            weight = w * r  # leftover r from the measure, r^{2nu} in the rule
            P = self._bare(r)
            return jac * np.einsum("l,il,jl->ij", weight, P, P)
        x, w = roots_jacobi(n_nodes, 0.0, 0.0)
        r = lo + (hi - lo) * (x + 1.0) / 2.0
        phi = self.functions(r)
        return (hi - lo) / 2.0 * np.einsum("l,il,jl->ij", w * r, phi, phi)

    def _bare(self, r: np.ndarray) -> np.ndarray:
        """phi_i without the r^nu factor (absorbed into a Jacobi weight)."""
        t = r / self.scale
        L = _genlaguerre_table(self.size, 2 * self.nu + 1, t)
        return self.norms()[:, None] * L * np.exp(-0.5 * t)

    def _smooth_block(self, potential: PotentialSpec) -> np.ndarray:
        """Gauss-Laguerre rule for smooth decaying potentials."""
        nu = self.nu
        n_nodes = max(4 * self.size + 40, 120)
        t, w = roots_genlaguerre(n_nodes, 2 * nu + 1)
        r = self.scale * t
        V = eval_potential(potential, r)
        L = _genlaguerre_table(self.size, 2 * nu + 1, t)
        i = np.arange(self.size)
        log_h = gammaln(i + 2 * nu + 2) - gammaln(i + 1)
        scale = np.exp(-0.5 * (log_h[:, None] + log_h[None, :]))
        core = np.einsum("l,il,jl->ij", w * V, L, L)
        # C_i C_j cancels the s^{2nu+2} from the substitution r = s t exactly
        return core * scale

    def _segmented_block(self, potential: PotentialSpec) -> np.ndarray:
        """Per-segment rules between potential breakpoints."""
        points = quadrature_breakpoints(potential)
        rate = 1.0 / self.scale
        R = 90.0 * self.scale
        edges = sorted({0.0, *[p for p in points if p < R], R})
        block = np.zeros((self.size, self.size))
        for lo, hi in zip(edges[:-1], edges[1:]):
            x, w = roots_jacobi(40, 0.0, 2 * self.nu if lo == 0.0 else 0.0)
            if lo == 0.0:
                r = hi * (x + 1.0) / 2.0
                jac = (hi / 2.0) ** (2 * self.nu + 1)
                P = self._bare(r)
                V = eval_potential(potential, r)
                block += jac * np.einsum("l,il,jl->ij", w * r * V, P, P)
            else:
                r = lo + (hi - lo) * (x + 1.0) / 2.0
                phi = self.functions(r)
                V = eval_potential(potential, r)
                block += (hi - lo) / 2.0 * np.einsum("l,il,jl->ij", w * r * V, phi, phi)
        return block
