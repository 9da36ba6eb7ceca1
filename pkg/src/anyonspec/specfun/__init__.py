"""Special functions for fractional order, with tracked error bounds.

Everything downstream (defect elements, quadratic forms, spectra) reduces
to Gamma(x) on (0, 2] and the modified Bessel function K_alpha with
alpha strictly between 0 and 1.  Both are implemented here from scratch
with explicit evaluation regimes and conservative absolute error bounds,
backed by compiled kernels when available.

Orders are wrapped in :class:`Order`, which confines alpha to the open
unit interval and clamps it to the numerically supported window
``[1e-3, 1 - 1e-3]`` (a warning reports the clamp).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._backend import BACKEND, kernels

__all__ = [
    "ALPHA_MIN",
    "ALPHA_MAX",
    "Order",
    "OrderClampedWarning",
    "EvalResult",
    "backend_name",
    "gamma",
    "bessel_i",
    "bessel_k",
    "bessel_k_half_order",
    "bessel_k_many",
    "bessel_k_prime",
]

ALPHA_MIN = 1e-3
ALPHA_MAX = 1.0 - 1e-3

_REGIME_NAMES = ("series", "quadrature", "asymptotic", "closed_form")


class OrderClampedWarning(UserWarning):
    """Raised as a warning when alpha is clamped to the supported window."""


@dataclass(frozen=True)
class Order:
    """Statistics parameter alpha in (0, 1).

    Values inside (0, 1) but outside ``[ALPHA_MIN, ALPHA_MAX]`` are
    clamped to the window boundary; the requested value is kept in
    ``requested_alpha`` and a :class:`OrderClampedWarning` is emitted.
    Values outside (0, 1) are rejected outright: the endpoints are the
    bosonic and fermionic points, where the defect construction
    degenerates.
    """

    alpha: float
    requested_alpha: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not 0.0 < a < 1.0 or a != a:
            raise ValueError(f"order must lie strictly in (0, 1), got {a}")
        object.__setattr__(self, "requested_alpha", a)
        clamped = min(max(a, ALPHA_MIN), ALPHA_MAX)
        if clamped != a:
            warnings.warn(
                f"alpha={a} clamped to supported window "
                f"[{ALPHA_MIN}, {ALPHA_MAX}]",
                OrderClampedWarning,
                stacklevel=2,
            )
        object.__setattr__(self, "alpha", clamped)


@dataclass(frozen=True)
class EvalResult:
    """A function value with its evaluation regime and error bound.

    ``abs_error_bound`` is an a posteriori absolute bound; ``regime`` is
    one of ``series``, ``quadrature``, ``asymptotic``, ``closed_form``.
    """

    value: float
    abs_error_bound: float
    regime: str


def backend_name() -> str:
    """Name of the active kernel backend, ``cython`` or ``python``."""
    return BACKEND


def _as_order(order: Order | float) -> Order:
    return order if isinstance(order, Order) else Order(float(order))


def gamma(x: float) -> float:
    """Gamma(x) on the interval (0, 2].

    Relative accuracy is better than 1e-13 across the domain; arguments
    outside (0, 2] raise ``ValueError`` (the library never needs them,
    larger arguments follow from the recurrence).
    """
    x = float(x)
    if not 0.0 < x <= 2.0:
        raise ValueError(f"gamma domain is (0, 2], got {x}")
    return kernels.gamma_pos(x)


def bessel_k(order: Order | float, x: float) -> EvalResult:
    """K_alpha(x) for x > 0 with regime tag and absolute error bound.

    For x beyond roughly 740 the value underflows; the result is then a
    tagged zero in the ``asymptotic`` regime whose error bound covers
    the dropped magnitude.
    """
    a = _as_order(order).alpha
    v, e, r = kernels.besselk_eval(a, float(x))
    return EvalResult(v, e, _REGIME_NAMES[r])


def bessel_k_prime(order: Order | float, x: float) -> EvalResult:
    """d/dx K_alpha(x) via ``K_a' = -K_{1-a} - (a/x) K_a``.

    The identity uses ``K_{a-1} = K_{1-a}``, keeping both evaluations
    inside the supported order window.
    """
    a = _as_order(order).alpha
    x = float(x)
    k1, e1, r1 = kernels.besselk_eval(1.0 - a, x)
    k0, e0, _ = kernels.besselk_eval(a, x)
    value = -k1 - (a / x) * k0
    err = e1 + (a / x) * e0 + 2e-16 * (abs(k1) + (a / x) * abs(k0))
    return EvalResult(value, err, _REGIME_NAMES[r1])


def bessel_k_half_order(x: float) -> EvalResult:
    """The alpha = 1/2 closed form ``sqrt(pi/(2x)) exp(-x)``.

    Reference point for branch-agreement checks; the general evaluator
    never dispatches to it, so comparisons against this function are
    meaningful.
    """
    import math

    x = float(x)
    if x <= 0.0:
        raise ValueError(f"besselk requires x > 0, got {x}")
    value = math.sqrt(0.5 * math.pi / x) * math.exp(-x)
    return EvalResult(value, 4e-16 * value, "closed_form")


def bessel_k_many(order: Order | float, xs: np.ndarray) -> np.ndarray:
    """K_alpha on an array of positive abscissae (values only).

    The fast path for quadrature rules; error bounds are skipped.
    """
    a = _as_order(order).alpha
    return kernels.besselk_many(a, np.asarray(xs, dtype=np.float64))


def bessel_i(nu: float, x: float) -> float:
    """I_nu(x) by ascending series (no cancellation, all terms positive).

    Supports nu > -1 and moderate x; used internally by the K series
    branch and externally for Wronskian cross-checks.
    """
    return kernels.besseli(float(nu), float(x))
