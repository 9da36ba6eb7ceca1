"""Radial trial basis tests.

The basis functions are normalized generalized Laguerre modes
``phi_i(r) = C_i r^nu L_i^(2 nu + 1)(r / s) exp(-r / (2 s))`` on the
measure ``r dr``; orthonormality, derivative consistency, the
centrifugal form block and the defect overlaps are each checked against
an independent quadrature.
"""

import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import roots_genlaguerre

from anyonspec.basis import RadialBasis
from anyonspec.defect import DefectFunction, eval_defect
from anyonspec.potentials import finite_well, gaussian, tabulated
from anyonspec.specfun import Order

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _numeric_gram(basis: RadialBasis) -> np.ndarray:
    """Gram matrix on the r dr measure by an exact Gauss rule.

    In t = r / scale the integrand is t^(2 nu + 1) e^-t times a
    polynomial, so Gauss-Laguerre with weight exponent 2 nu + 1 and
    enough nodes integrates it exactly.
    """
    t, w = roots_genlaguerre(2 * basis.size + 8, 2.0 * basis.nu + 1.0)
    r = basis.scale * t
    F = basis.functions(r)
    # Divide the weight the rule carries out of each factor; what is
    # left of phi_i is C_i scale^nu L_i(t), a polynomial.
    core = F * np.exp(0.5 * t) / t**basis.nu
    return (core * w) @ core.T * basis.scale**2


@pytest.mark.parametrize("alpha, size, scale", [(0.5, 6, 1.0), (0.3, 5, 0.6)])
def test_orthonormality(alpha, size, scale):
    basis = RadialBasis(Order(alpha), size, scale)
    G = _numeric_gram(basis)
    assert np.allclose(G, np.eye(size), atol=1e-12)


def test_minimum_size_enforced():
    with pytest.raises(ValueError):
        RadialBasis(Order(0.5), 1, 1.0)


def test_positive_scale_enforced():
    with pytest.raises(ValueError):
        RadialBasis(Order(0.5), 4, 0.0)


def test_nu_defaults_to_alpha_and_can_be_overridden():
    basis = RadialBasis(Order(0.3), 4, 1.0)
    assert basis.nu == 0.3
    sector = RadialBasis(Order(0.3), 4, 1.0, nu=2.3)
    assert sector.nu == 2.3


# ---------------------------------------------------------------------------
# pointwise consistency


def test_derivatives_match_finite_differences():
    basis = RadialBasis(Order(0.4), 5, 0.8)
    r = np.geomspace(0.05, 6.0, 30)
    h = 1e-6 * r
    F = basis.functions(r)
    D1 = basis.derivatives(r)
    D2 = basis.second_derivatives(r)
    Fp = basis.functions(r + h)
    Fm = basis.functions(r - h)
    assert np.allclose(D1, (Fp - Fm) / (2.0 * h), rtol=2e-7, atol=1e-9)
    h = 1e-4 * r
    Fp = basis.functions(r + h)
    Fm = basis.functions(r - h)
    assert np.allclose(D2, (Fp - 2.0 * F + Fm) / h**2, rtol=1e-4, atol=1e-7)


def test_boundary_coefficients_give_leading_power():
    basis = RadialBasis(Order(0.5), 4, 1.3)
    d = basis.boundary_coefficients()
    r = 1e-9
    vals = basis.functions(np.array([r]))[:, 0]
    assert np.allclose(vals / r**basis.nu, d, rtol=1e-6)


# ---------------------------------------------------------------------------
# form block against scalar quadrature


@pytest.mark.parametrize("alpha, scale, nu", [(0.5, 0.5, None), (0.3, 1.0, 2.3)])
def test_form_block_entries_match_quadrature(alpha, scale, nu):
    order = Order(alpha)
    basis = RadialBasis(order, 3, scale, nu=nu)
    nu_c = alpha if nu is None else nu
    F = basis.form_block()

    def entry(i, j):
        def integrand(r):
            rr = np.array([r])
            di = basis.derivatives(rr)[i, 0]
            dj = basis.derivatives(rr)[j, 0]
            fi = basis.functions(rr)[i, 0]
            fj = basis.functions(rr)[j, 0]
            return (di * dj + nu_c**2 * fi * fj / r**2) * r

        val, _ = integrate.quad(integrand, 0.0, 90.0 * basis.scale, limit=200)
        return val

    for i in range(3):
        for j in range(i, 3):
            assert F[i, j] == pytest.approx(entry(i, j), rel=1e-9, abs=1e-11)
    assert np.allclose(F, F.T)


def test_form_block_is_positive_definite():
    basis = RadialBasis(Order(0.7), 8, 1.0)
    w = np.linalg.eigvalsh(basis.form_block())
    assert np.all(w > 0.0)


# ---------------------------------------------------------------------------
# potential blocks


def test_well_block_matches_quadrature():
    basis = RadialBasis(Order(0.5), 3, 1.0)
    spec = finite_well(depth=2.0, radius=1.5)
    V = basis.potential_block(spec)

    def entry(i, j):
        def integrand(r):
            rr = np.array([r])
            return -2.0 * basis.functions(rr)[i, 0] * basis.functions(rr)[j, 0] * r

        val, _ = integrate.quad(integrand, 0.0, 1.5, limit=100)
        return val

    for i in range(3):
        for j in range(i, 3):
            assert V[i, j] == pytest.approx(entry(i, j), rel=1e-10, abs=1e-13)


def test_gaussian_block_matches_quadrature():
    basis = RadialBasis(Order(0.3), 3, 0.7)
    spec = gaussian(amplitude=-1.0, width=0.8)
    V = basis.potential_block(spec)

    def entry(i, j):
        def integrand(r):
            rr = np.array([r])
            v = -1.0 * math.exp(-((r / 0.8) ** 2))
            return v * basis.functions(rr)[i, 0] * basis.functions(rr)[j, 0] * r

        val, _ = integrate.quad(integrand, 0.0, 60.0 * basis.scale, limit=200)
        return val

    for i in range(3):
        for j in range(i, 3):
            assert V[i, j] == pytest.approx(entry(i, j), rel=1e-9, abs=1e-12)


def test_tabulated_block_uses_segments():
    basis = RadialBasis(Order(0.5), 2, 1.0)
    spec = tabulated([0.0, 1.0, 2.0], [-1.0, -0.5, 0.0])
    V = basis.potential_block(spec)
    assert V.shape == (2, 2)
    assert V[0, 0] < 0.0


# ---------------------------------------------------------------------------
# defect overlaps


def test_defect_overlaps_closed_form_half_order():
    # At alpha = 1/2 the coefficient-convention defect reduces to
    # pi sqrt(2) e^(-lam r) / sqrt(r) ... checked against the analytic
    # overlap with phi_0 = C_0 sqrt(r) e^(-r / (2 s)).
    order = Order(0.5)
    s = 0.5
    lam = 1.0
    basis = RadialBasis(order, 2, s)
    got = basis.defect_overlaps(lam)
    C0 = basis.norms()[0]
    # int r phi_0 g dr with g = sqrt(2 pi) lam^(1/2) K_{1/2}(lam r)
    #                        = pi e^(-lam r) / sqrt(r) * sqrt(2 pi) / pi ...
    pref = SQRT_TWO_PI * math.sqrt(math.pi / 2.0)
    expected0 = C0 * pref / (lam + 0.5 / s) ** 2
    assert got[0] == pytest.approx(expected0, rel=1e-10)


@pytest.mark.parametrize("alpha, lam, s", [(0.3, 0.9, 1.0), (0.7, 2.0, 0.4)])
def test_defect_overlaps_match_brute_quadrature(alpha, lam, s):
    order = Order(alpha)
    basis = RadialBasis(order, 3, s)
    g = DefectFunction(order, lam)
    got = basis.defect_overlaps(lam)

    def brute(i):
        def integrand(r):
            rr = np.array([r])
            return (
                SQRT_TWO_PI
                * eval_defect(g, r)
                * basis.functions(rr)[i, 0]
                * r
            )

        val, _ = integrate.quad(
            integrand, 0.0, 80.0 / min(lam, 1.0 / s), limit=300, points=[0.1]
        )
        return val

    for i in range(3):
        assert got[i] == pytest.approx(brute(i), rel=1e-8)
