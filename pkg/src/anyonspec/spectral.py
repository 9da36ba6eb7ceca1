"""Rayleigh-Ritz spectra of the extension Hamiltonians.

The s-wave trial space is a singularity-adapted Laguerre basis enriched
by the defect ray ``g_lambda``, so a trial state is
``psi = sum_i c_i phi_i + q g_lambda``.  All matrix blocks against the
basis are semi-analytic (exact Gauss rules or closed Gram forms); only
the overlaps ``<phi_i, g_lambda>`` need adaptive quadrature.  The
resulting generalized symmetric-definite problem ``A x = E M x`` is
solved densely; sizes stay tiny.

For beta < 0 the free problem has the single bound state

    E_0 = -(|beta| / c_alpha)^(1/alpha) = -lambda_bar^2,
    lambda_bar = (|beta| / c_alpha)^(1/(2 alpha)),

with eigenfunction proportional to ``g_lambda_bar``.  The default
decomposition scale targets exactly lambda_bar in that regime, which
puts the exact eigenfunction inside the trial space; any other positive
scale is admissible and convergence in the basis size is then
variational from above.

Ritz values at or above zero approximate no eigenvalue; they sample the
essential spectrum and are labelled as discretized continuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate
from scipy.linalg import cholesky, eigh, LinAlgError

from .basis import RadialBasis
from .defect import DefectFunction, c_alpha, defect_derivatives
from .forms import BetaLike, SectorState, as_extension_parameter
from .potentials import PotentialSpec, eval_potential, quadrature_breakpoints, zero
from .specfun import Order, gamma
from .specfun._backend import kernels

__all__ = [
    "ChargeCondition",
    "BoundaryFit",
    "SpectralResult",
    "assemble_swave",
    "boundary_fit",
    "closed_form_ground_energy",
    "default_lambda",
    "default_scale",
    "eigenfunction_residual",
    "extract_charge_condition",
    "interacting_charge_term",
    "lambda_bar",
    "solve_sector",
]

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def lambda_bar(order: Order | float, beta: float) -> float:
    """The distinguished scale ``(|beta| / c_alpha)^(1/(2 alpha))``, beta < 0."""
    order = _as_order(order)
    beta = float(beta)
    if beta >= 0.0:
        raise ValueError("lambda_bar is defined for beta < 0")
    a = order.alpha
    ratio = abs(beta) / c_alpha(order)
    try:
        return math.exp(math.log(ratio) / (2.0 * a))
    except OverflowError:
        return math.inf


def closed_form_ground_energy(order: Order | float, beta: float) -> float:
    """Bound-state energy ``-(|beta| / c_alpha)^(1/alpha)`` for beta < 0.

    Overflows toward ``-inf`` gracefully for extreme parameter values
    (small alpha with large |beta| exponentiates hard).
    """
    order = _as_order(order)
    beta = float(beta)
    if beta >= 0.0:
        raise ValueError(
            "the free realization has a bound state only for beta < 0"
        )
    a = order.alpha
    ratio = abs(beta) / c_alpha(order)
    try:
        return -math.exp(math.log(ratio) / a)
    except OverflowError:
        return -math.inf


def default_lambda(order: Order | float, beta: BetaLike) -> float:
    """The automatic decomposition scale.

    ``lambda_bar`` when beta < 0 (the bound-state regime, where the
    defect ray at that scale is the exact free eigenfunction), else 1.
    """
    ext = as_extension_parameter(beta)
    if ext.is_friedrichs or ext.beta >= 0.0:
        return 1.0
    lb = lambda_bar(order, ext.beta)
    return lb if math.isfinite(lb) and lb > 0.0 else 1.0


def default_scale(order: Order | float, beta: BetaLike) -> float:
    """The automatic basis length scale, ``1 / default_lambda``."""
    lam = default_lambda(order, beta)
    s = 1.0 / lam
    return s if math.isfinite(s) and s > 0.0 else 1.0


@dataclass
class SpectralResult:
    """Output of :func:`solve_sector`.

    ``eigenvalues`` holds the lowest Ritz values (at most five);
    ``vectors`` their M-orthonormal coordinate columns.  On the s wave
    with finite beta the last coordinate of each column is its defect
    charge, exposed in ``charge`` (ground state) and ``charges``.
    ``residuals`` carries named diagnostics, ``continuum`` flags Ritz
    values at or above zero, and ``closed_form_reference`` is set
    whenever the run has the free bound-state closed form to compare
    against.
    """

    sector: int
    eigenvalues: np.ndarray
    vectors: np.ndarray
    ground_vector: np.ndarray
    charge: float | None
    charges: np.ndarray | None
    lambda_used: float
    basis: RadialBasis
    residuals: dict[str, float]
    closed_form_reference: float | None
    converged: bool
    continuum: tuple[bool, ...]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def regular_state(self, index: int = 0) -> SectorState:
        """The regular (basis) part of the chosen Ritz vector."""
        n = self.basis.size
        return SectorState.from_basis(self.sector, self.basis, self.vectors[:n, index])


def _as_order(order: Order | float) -> Order:
    return order if isinstance(order, Order) else Order(float(order))


def assemble_swave(
    order: Order | float,
    beta: BetaLike,
    potential: PotentialSpec,
    basis: RadialBasis,
    lam: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness and Gram matrices of the enriched s-wave trial space.

    With N basis functions the matrices are (N+1) x (N+1), charge
    coordinate last; the Friedrichs parameter drops the charge row.  The
    Gram matrix is checked for positive definiteness (it degrades only
    when the defect ray is nearly captured by the polynomial sector,
    which does not happen at practical sizes).
    """
    order = _as_order(order)
    ext = as_extension_parameter(beta)
    a = order.alpha
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"decomposition scale must be positive, got {lam}")
    F = basis.form_block()
    if not potential.is_zero:
        F = F + basis.potential_block(potential)
    n = basis.size
    if ext.is_friedrichs:
        return F, np.eye(n)
    ca = c_alpha(order)
    s = basis.defect_overlaps(lam)
    n_g = a * ca * lam ** (2.0 * a - 2.0)
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = F
    A[:n, n] = A[n, :n] = -(lam * lam) * s
    A[n, n] = ext.beta + ca * lam ** (2.0 * a) - lam * lam * n_g
    M = np.eye(n + 1)
    M[:n, n] = M[n, :n] = s
    M[n, n] = n_g
    try:
        cholesky(M, lower=True)
    except LinAlgError as exc:
        raise ValueError(
            "Gram matrix lost positive definiteness; the defect ray is "
            "numerically dependent on the basis (raise the scale contrast "
            "or lower the basis size)"
        ) from exc
    return A, M


def _solve_dense(A: np.ndarray, M: np.ndarray, n_keep: int):
    w, X = eigh(A, M)
    keep = min(n_keep, w.size)
    w = w[:keep]
    X = X[:, :keep]
    # deterministic sign: largest-magnitude coordinate positive
    for j in range(keep):
        i = int(np.argmax(np.abs(X[:, j])))
        if X[i, j] < 0.0:
            X[:, j] = -X[:, j]
    return w, X


def solve_sector(
    order: Order | float,
    beta: BetaLike,
    potential: PotentialSpec | None = None,
    basis: RadialBasis | None = None,
    lam: float | None = None,
    sector: int = 0,
    n_keep: int = 5,
    check_convergence: bool = True,
    tolerance: float = 1e-6,
) -> SpectralResult:
    """Lowest Ritz states of one angular sector.

    Sector 0 uses the enriched space (finite beta) or the bare basis
    (Friedrichs); sectors k != 0 are essentially self-adjoint, the
    boundary parameter never enters, and the basis exponent switches to
    ``|2k + alpha|``.  ``lam = None`` applies :func:`default_lambda`.
    Convergence is flagged by re-solving at twice the basis size and
    requiring ``|E0(2N) - E0(N)| <= max(1e-8, tolerance |E0|)``.
    """
    order = _as_order(order)
    ext = as_extension_parameter(beta)
    potential = zero() if potential is None else potential
    potential.v0  # validate assumptions up front
    if basis is None:
        # Nonzero sectors never see beta, so their default basis must not
        # either: a beta-dependent scale would make identical operators
        # discretize differently.
        scale = default_scale(order, ext) if sector == 0 else 1.0
        basis = RadialBasis(order, 32, scale)
    lam = default_lambda(order, ext) if lam is None else float(lam)

    if sector != 0:
        nu = abs(2 * sector + order.alpha)
        sector_basis = RadialBasis(order, basis.size, basis.scale, nu=nu)
        F = sector_basis.form_block()
        if not potential.is_zero:
            F = F + sector_basis.potential_block(potential)
        w, X = _solve_dense(F, np.eye(sector_basis.size), n_keep)
        result = SpectralResult(
            sector=sector,
            eigenvalues=w,
            vectors=X,
            ground_vector=X[:, 0],
            charge=None,
            charges=None,
            lambda_used=lam,
            basis=sector_basis,
            residuals={},
            closed_form_reference=None,
            converged=True,
            continuum=tuple(bool(v >= 0.0) for v in w),
        )
        result.residuals["ground_state_form_residual"] = eigenfunction_residual(
            result, ext, potential
        )
        if check_convergence:
            _flag_convergence(result, order, ext, potential, lam, tolerance)
        return result

    A, M = assemble_swave(order, ext, potential, basis, lam)
    w, X = _solve_dense(A, M, n_keep)
    friedrichs = ext.is_friedrichs
    charges = None if friedrichs else X[-1, :].copy()
    reference = None
    if potential.is_zero and not friedrichs and ext.beta < 0.0:
        reference = closed_form_ground_energy(order, ext.beta)
    result = SpectralResult(
        sector=0,
        eigenvalues=w,
        vectors=X,
        ground_vector=X[:, 0],
        charge=None if friedrichs else float(charges[0]),
        charges=charges,
        lambda_used=lam,
        basis=basis,
        residuals={},
        closed_form_reference=reference,
        converged=True,
        continuum=tuple(bool(v >= 0.0) for v in w),
    )
    result.residuals["ground_state_form_residual"] = eigenfunction_residual(
        result, ext, potential
    )
    if check_convergence:
        _flag_convergence(result, order, ext, potential, lam, tolerance)
    return result


def _flag_convergence(
    result: SpectralResult,
    order: Order,
    ext,
    potential: PotentialSpec,
    lam: float,
    tolerance: float,
) -> None:
    basis = result.basis
    if result.sector != 0:
        doubled = RadialBasis(order, 2 * basis.size, basis.scale, nu=basis.nu)
        F = doubled.form_block()
        if not potential.is_zero:
            F = F + doubled.potential_block(potential)
        w2, _ = _solve_dense(F, np.eye(doubled.size), 1)
    else:
        doubled = RadialBasis(order, 2 * basis.size, basis.scale)
        A2, M2 = assemble_swave(order, ext, potential, doubled, lam)
        w2, _ = _solve_dense(A2, M2, 1)
    e0 = result.ground_energy
    e0_doubled = float(w2[0])
    delta = abs(e0_doubled - e0)
    result.residuals["e0_doubling_delta"] = delta
    edge = -max(1e-8, tolerance)
    if e0 >= edge and e0_doubled >= edge:
        # Both resolutions agree that nothing lies below the continuum
        # edge; the Ritz value itself only tracks how finely the basis
        # tiles the continuum, so the doubling delta is not an error.
        result.converged = True
    else:
        result.converged = delta <= max(1e-8, tolerance * abs(e0))


# -- boundary behavior -------------------------------------------------


@dataclass(frozen=True)
class BoundaryFit:
    """Least-squares small-r model ``singular r^-alpha + regular r^alpha``.

    ``exponent`` is the unconstrained log-log slope over the window and
    lands near ``-alpha`` for charge-dominated states, near ``+alpha``
    for regular ones.
    """

    exponent: float
    singular_coeff: float
    regular_coeff: float
    window: tuple[float, float]


@dataclass(frozen=True)
class ChargeCondition:
    """Observed charge against the boundary-condition prediction.

    ``q_formula`` applies the printed rule
    ``q = -2^alpha alpha Gamma(alpha) d / (beta + c_alpha lambda^(2 alpha))``
    to the fitted regular coefficient d; ``ratio`` is the observed to
    predicted quotient.  The interesting content is that the ratio is
    scale independent; its constant value fixes the normalization
    conventions hidden in the printed rule (see the README note).  At
    ``lambda = lambda_bar`` the denominator vanishes, the rule
    degenerates and ``degenerate`` is set: there the regular coefficient
    itself must vanish while the charge stays order one.
    """

    q_observed: float
    q_formula: float
    ratio: float
    d_fitted: float
    d_direct: float
    degenerate: bool
    window: tuple[float, float]


def _fit_window(basis: RadialBasis, window: tuple[float, float]) -> np.ndarray:
    lo, hi = window
    return np.geomspace(lo * basis.scale, hi * basis.scale, 48)


def boundary_fit(
    result: SpectralResult,
    index: int = 0,
    window: tuple[float, float] = (1e-4, 1e-2),
) -> BoundaryFit:
    """Boundary behavior of a Ritz state on ``[lo, hi] * scale``."""
    basis = result.basis
    order = basis.order
    a = order.alpha
    r = _fit_window(basis, window)
    n = basis.size
    c = result.vectors[:n, index]
    psi = c @ basis.functions(r)
    if result.charges is not None:
        q = float(result.vectors[-1, index])
        g = DefectFunction(order, result.lambda_used)
        G, _, _ = defect_derivatives(g, r)
        psi = psi + q * SQRT_TWO_PI * G
    mask = np.abs(psi) > 0.0
    slope = np.polyfit(np.log(r[mask]), np.log(np.abs(psi[mask])), 1)[0]
    design = np.stack([r**-a, r**a], axis=1)
    coeffs, *_ = np.linalg.lstsq(design, psi, rcond=None)
    return BoundaryFit(
        exponent=float(slope),
        singular_coeff=float(coeffs[0]),
        regular_coeff=float(coeffs[1]),
        window=(float(r[0]), float(r[-1])),
    )


def extract_charge_condition(
    result: SpectralResult,
    beta: BetaLike,
    index: int = 0,
    window: tuple[float, float] = (1e-4, 1e-2),
) -> ChargeCondition:
    """Fit the regular coefficient and compare the charge to the printed rule."""
    ext = as_extension_parameter(beta)
    if ext.is_friedrichs or result.charges is None:
        raise ValueError("charge conditions concern the finite-beta s-wave states")
    basis = result.basis
    order = basis.order
    a = order.alpha
    lam = result.lambda_used
    n = basis.size
    c = result.vectors[:n, index]
    q_obs = float(result.vectors[-1, index])
    r = _fit_window(basis, window)
    phi = c @ basis.functions(r)
    d_fit = float(np.dot(phi, r**a) / np.dot(r**a, r**a))
    d_direct = float(c @ basis.boundary_coefficients())
    ca = c_alpha(order)
    denom = ext.beta + ca * lam ** (2.0 * a)
    degenerate = abs(denom) <= 1e-8 * (abs(ext.beta) + ca * lam ** (2.0 * a))
    if degenerate:
        q_formula = math.nan
        ratio = math.nan
    else:
        q_formula = -(2.0**a) * a * gamma(a) * d_fit / denom
        ratio = q_obs / q_formula if q_formula != 0.0 else math.inf
    return ChargeCondition(
        q_observed=q_obs,
        q_formula=q_formula,
        ratio=ratio,
        d_fitted=d_fit,
        d_direct=d_direct,
        degenerate=degenerate,
        window=(float(r[0]), float(r[-1])),
    )


# -- interacting coupling and residuals --------------------------------


def interacting_charge_term(
    order: Order | float,
    lam: float,
    phi,
    potential: PotentialSpec,
    rel_tol: float = 1e-10,
) -> float:
    """The cross term ``<g_lambda, V phi>`` of the interacting form.

    ``phi`` may be a callable r -> value or a basis-represented
    :class:`SectorState`.  The integrand is regular at the origin
    (``r^(1-alpha) V r^alpha`` against bounded V).
    """
    order = _as_order(order)
    a = order.alpha
    lam = float(lam)
    if isinstance(phi, SectorState):
        if phi.representation != "basis":
            raise ValueError("grid states: evaluate the overlap against samples")
        basis = phi.basis
        coeff = phi.coefficients

        def phi_at(r: float) -> float:
            return float(coeff @ basis.functions(np.asarray([r]))[:, 0])

        decay = lam + 0.5 / basis.scale
    else:
        phi_at = phi
        decay = lam

    pref = SQRT_TWO_PI * lam**a

    def integrand(r: float) -> float:
        V = eval_potential(potential, r)
        if V == 0.0:
            return 0.0
        return r * pref * kernels.besselk_eval(a, lam * r)[0] * V * phi_at(r)

    R = 60.0 / decay
    pts = [p for p in quadrature_breakpoints(potential) if 0.0 < p < R]
    value, _ = integrate.quad(
        integrand,
        0.0,
        R,
        points=pts or None,
        epsabs=1e-300,
        epsrel=rel_tol,
        limit=300,
    )
    return value


def eigenfunction_residual(
    result: SpectralResult,
    beta: BetaLike,
    potential: PotentialSpec | None = None,
    index: int = 0,
    window: tuple[float, float] = (0.05, 10.0),
    n_nodes: int = 160,
) -> float:
    """Relative strong-form residual of a Ritz state away from the origin.

    Evaluates ``-psi'' - psi'/r + (nu_c^2/r^2) psi + V phi - E psi`` on a
    logarithmic grid over ``window`` (the potential weights the regular
    part only) and returns the ``L^2(r dr)`` norm relative to the state.
    """
    potential = zero() if potential is None else potential
    basis = result.basis
    order = basis.order
    E = float(result.eigenvalues[index])
    k = result.sector
    nu_c = 2 * k + order.alpha if k == 0 else basis.nu
    r = np.geomspace(window[0], window[1], n_nodes)
    n = basis.size
    c = result.vectors[:n, index]
    phi = c @ basis.functions(r)
    dphi = c @ basis.derivatives(r)
    d2phi = c @ basis.second_derivatives(r)
    psi, dpsi, d2psi = phi, dphi, d2phi
    if result.charges is not None:
        q = float(result.vectors[-1, index])
        g = DefectFunction(order, result.lambda_used)
        G, G1, G2 = defect_derivatives(g, r)
        psi = phi + q * SQRT_TWO_PI * G
        dpsi = dphi + q * SQRT_TWO_PI * G1
        d2psi = d2phi + q * SQRT_TWO_PI * G2
    V = eval_potential(potential, r)
    res = -d2psi - dpsi / r + (nu_c * nu_c) / r**2 * psi + V * phi - E * psi
    num = np.trapezoid(r * res**2, r)
    den = np.trapezoid(r * psi**2, r)
    return float(math.sqrt(num / den)) if den > 0.0 else math.inf
