"""Defect elements of the s-wave anyon operator.

For order alpha and scale lambda > 0 the defect element

    G_lambda(r) = lambda^alpha K_alpha(lambda r)

solves ``(-D_alpha^2 + lambda^2) G = 0`` away from the origin, where
``D_alpha^2`` is the s-wave radial operator, and spans the deficiency
direction of the minimal operator.  Its Gram identities in the plane
inner product ``<F, G> = 2 pi int_0^oo r F G dr`` are closed forms in

    c_alpha = pi^2 / sin(pi alpha),

and those closed forms are what make the extension forms lambda
independent.  This module provides the closed forms, honest quadrature
twins for verifying them, pointwise evaluation, derivative and ODE
residual helpers, and the small-r expansion coefficients.

Sign convention: with lambda1 != lambda2,

    <G_{l1}, G_{l2}> = c_alpha (l1^{2a} - l2^{2a}) / (l1^2 - l2^2),

which is manifestly positive and continuous at coinciding scales, as a
Gram value of one defect ray must be.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .specfun import Order, bessel_k, bessel_k_many, bessel_k_prime, gamma

__all__ = [
    "AsymptoticCoefficients",
    "DefectFunction",
    "asymptotic_coefficients",
    "c_alpha",
    "cross_gram",
    "defect_derivatives",
    "eval_defect",
    "gram_quadrature",
    "l2_norm_sq",
    "ode_residual",
    "radial_quadrature",
]


def c_alpha(order: Order | float) -> float:
    """The extension constant ``pi^2 / sin(pi alpha)``.

    Positive and finite on the open unit interval, divergent toward the
    bosonic and fermionic endpoints.  Also equals
    ``(2 pi / alpha) int_0^oo r K_alpha(r)^2 dr``, which is the identity
    the verification suite integrates numerically.
    """
    a = _alpha(order)
    return math.pi * math.pi / math.sin(math.pi * a)


@dataclass(frozen=True)
class DefectFunction:
    """The defect element ``G_lambda(r) = lambda^alpha K_alpha(lambda r)``."""

    order: Order
    scale: float

    def __post_init__(self) -> None:
        if not isinstance(self.order, Order):
            object.__setattr__(self, "order", Order(float(self.order)))
        s = float(self.scale)
        if not (s > 0.0 and math.isfinite(s)):
            raise ValueError(f"defect scale must be positive, got {self.scale}")
        object.__setattr__(self, "scale", s)


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Leading small-r behavior ``G = singular r^-a + regular r^a + ...``."""

    singular: float
    regular: float


def _alpha(order: Order | float) -> float:
    return order.alpha if isinstance(order, Order) else Order(float(order)).alpha


def eval_defect(g: DefectFunction, r):
    """G_lambda at a positive radius or array of radii."""
    a = g.order.alpha
    lam = g.scale
    pref = lam**a
    if np.ndim(r) == 0:
        return pref * bessel_k(g.order, lam * float(r)).value
    r = np.asarray(r, dtype=np.float64)
    return pref * bessel_k_many(g.order, lam * r)


def defect_derivatives(g: DefectFunction, r):
    """(G, G', G'') at radius r, scalar or array.

    The second derivative is assembled from the order recurrence
    ``K_nu'' = (K_{nu-2} + 2 K_nu + K_{nu+2}) / 4`` with the ladder
    reduced to the base orders alpha and 1 - alpha.  That route is
    independent of the defining ODE, so the residual built from it is a
    genuine consistency check rather than an identity.
    """
    a = g.order.alpha
    lam = g.scale
    scalar = np.ndim(r) == 0
    rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
    z = lam * rr
    ka = bessel_k_many(g.order, z)
    kb = bessel_k_many(1.0 - a, z)  # = K_{alpha - 1}
    kp1 = kb + (2.0 * a / z) * ka  # K_{alpha + 1}
    kp2 = ka + (2.0 * (a + 1.0) / z) * kp1  # K_{alpha + 2}
    km2 = ka + (2.0 * (1.0 - a) / z) * kb  # K_{alpha - 2}
    kprime = -kb - (a / z) * ka
    ksecond = 0.25 * (km2 + 2.0 * ka + kp2)
    G = lam**a * ka
    G1 = lam ** (a + 1.0) * kprime
    G2 = lam ** (a + 2.0) * ksecond
    if scalar:
        return float(G[0]), float(G1[0]), float(G2[0])
    return G, G1, G2


def ode_residual(g: DefectFunction, r):
    """Residual of ``-G'' - G'/r + (alpha^2/r^2 + lambda^2) G`` at r."""
    a = g.order.alpha
    lam = g.scale
    rr = np.asarray(r, dtype=np.float64)
    G, G1, G2 = defect_derivatives(g, rr)
    res = -G2 - G1 / rr + (a * a / rr**2 + lam * lam) * G
    if np.ndim(r) == 0:
        return float(res)
    return res


def l2_norm_sq(g: DefectFunction) -> float:
    """Closed form ``alpha c_alpha lambda^(2 alpha - 2)`` for ``<G, G>``."""
    a = g.order.alpha
    return a * c_alpha(g.order) * g.scale ** (2.0 * a - 2.0)


def cross_gram(order: Order | float, lam1: float, lam2: float) -> float:
    """Closed form for ``<G_{lam1}, G_{lam2}>`` at distinct scales.

    ``c_alpha (lam1^{2a} - lam2^{2a}) / (lam1^2 - lam2^2)``; the
    numerator and denominator always carry the same sign, so the value
    is positive.  Coinciding scales are rejected; use
    :func:`l2_norm_sq` for the diagonal.
    """
    a = _alpha(order)
    l1 = float(lam1)
    l2 = float(lam2)
    if l1 <= 0.0 or l2 <= 0.0:
        raise ValueError("defect scales must be positive")
    if l1 == l2:
        raise ValueError("coinciding scales: use l2_norm_sq for the diagonal")
    return c_alpha(order) * (l1 ** (2 * a) - l2 ** (2 * a)) / (l1 * l1 - l2 * l2)


def radial_quadrature(
    integrand,
    decay_rate: float,
    rel_tol: float = 1e-10,
    r_split: float = 0.1,
    u_min: float = -45.0,
) -> tuple[float, float]:
    """Adaptive integral of ``integrand(r)`` over (0, oo).

    Splits at ``r_split`` with the substitution ``r = exp(u)`` on the
    inner piece, which turns power singularities ``r^p`` (p > -1) into
    smooth exponentials; truncates at ``R = 40 / decay_rate`` and folds
    a tail estimate ``|f(R)| / decay_rate`` into the returned error.
    ``u_min`` is the log-radius floor; integrands with slowly convergent
    origin mass (p close to -1) need it pushed toward the exp underflow
    edge.

    Returns ``(value, abs_error_estimate)``.
    """
    if decay_rate <= 0.0:
        raise ValueError("decay_rate must be positive")
    R = 40.0 / decay_rate
    split = min(r_split, 0.5 * R)
    inner, ierr = integrate.quad(
        lambda u: integrand(math.exp(u)) * math.exp(u),
        u_min,
        math.log(split),
        epsabs=1e-300,
        epsrel=rel_tol,
        limit=300,
    )
    outer, oerr = integrate.quad(
        integrand,
        split,
        R,
        epsabs=1e-300,
        epsrel=rel_tol,
        limit=300,
    )
    tail = abs(integrand(R)) / decay_rate
    return inner + outer, ierr + oerr + tail


def gram_quadrature(
    order: Order | float,
    lam1: float,
    lam2: float,
    rel_tol: float = 1e-11,
) -> tuple[float, float]:
    """Numerical ``2 pi int_0^oo r G_{lam1} G_{lam2} dr`` with error estimate.

    Quadrature twin of :func:`cross_gram` / :func:`l2_norm_sq`; the two
    routes share no code beyond the Bessel kernels.  Validated for
    ``alpha`` in [0.05, 0.95]; closer to the endpoints the ``r^(1-2a)``
    origin mass converges too slowly for the truncated log substitution.
    """
    order = order if isinstance(order, Order) else Order(float(order))
    g1 = DefectFunction(order, float(lam1))
    g2 = DefectFunction(order, float(lam2))

    def integrand(r: float) -> float:
        # (r * G1) * G2 stays finite near the origin where G1 * G2 alone
        # would overflow (G ~ r^-alpha, and r here can reach exp(u_min)).
        return 2.0 * math.pi * ((r * eval_defect(g1, r)) * eval_defect(g2, r))

    return radial_quadrature(
        integrand,
        decay_rate=min(g1.scale, g2.scale),
        rel_tol=rel_tol,
        r_split=0.1 / max(g1.scale, g2.scale, 1.0),
        u_min=-700.0,
    )


def asymptotic_coefficients(g: DefectFunction) -> AsymptoticCoefficients:
    """Coefficients of the small-r expansion of G_lambda.

    ``G = singular r^-alpha + regular r^alpha + O(r^(2 - alpha))`` with

        singular = 2^(alpha-1) Gamma(alpha)          (scale independent),
        regular  = -Gamma(1-alpha) lambda^(2 alpha) / (2^(1+alpha) alpha).

    The scale-independent singular coefficient is why differences of
    defect elements at two scales are regular, and the regular
    coefficient feeds the boundary-condition checks.
    """
    a = g.order.alpha
    lam = g.scale
    singular = 2.0 ** (a - 1.0) * gamma(a)
    regular = -gamma(1.0 - a) * lam ** (2.0 * a) / (2.0 ** (1.0 + a) * a)
    return AsymptoticCoefficients(singular=singular, regular=regular)
