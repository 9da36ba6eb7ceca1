"""Radial potential catalogue with assumption checking.

The interacting forms admit potentials ``V = V_+ - V_-`` whose negative
part is bounded (``V0 = sup V_-`` enters every lower bound) and whose
positive part is locally square integrable and bounded on a window
``[0, epsilon)`` at the origin.  :func:`validate` enforces exactly that
and computes ``V0``: exactly for the analytic kinds, by grid supremum
for tabulated data.

Kinds
-----
``zero``           no interaction; solvers skip the potential blocks
                   entirely, so results match the free problem bitwise.
``finite_well``    ``V = -depth`` on ``[0, radius)``, zero outside.
``gaussian``       ``V = amplitude exp(-(r/width)^2)``.
``power_barrier``  ``V = coeff r^exponent`` on ``[support_min, oo)``
                   with exponent in (-1, 0); unbounded at the origin
                   unless the support stays away from it.
``tabulated``      piecewise linear through sample nodes; constant
                   continuation beyond the last radius only when the
                   table ends at zero.

The CLI mini-language is parsed by :func:`parse_potential`:
``zero``, ``well:depth=<f>,radius=<f>``, ``gauss:amp=<f>,width=<f>``,
``table:<path>`` (two-column CSV ``r,V`` with one header line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

__all__ = [
    "AssumptionViolation",
    "PotentialSpec",
    "eval_potential",
    "finite_well",
    "from_table_file",
    "gaussian",
    "parse_potential",
    "power_barrier",
    "quadrature_breakpoints",
    "tabulated",
    "validate",
    "zero",
]

KINDS = ("zero", "finite_well", "gaussian", "power_barrier", "tabulated")


class AssumptionViolation(ValueError):
    """The potential fails the standing assumptions of the form theory."""


@dataclass(frozen=True)
class PotentialSpec:
    """A radial potential of one of the supported kinds.

    Use the factory functions rather than the constructor; parameters
    not used by ``kind`` keep their defaults.  ``epsilon`` is the width
    of the origin window on which ``V_+`` must stay bounded.
    """

    kind: str
    depth: float = 0.0
    radius: float = 0.0
    amplitude: float = 0.0
    width: float = 1.0
    coeff: float = 0.0
    exponent: float = 0.0
    support_min: float = 0.0
    table_r: tuple[float, ...] = field(default=(), repr=False)
    table_v: tuple[float, ...] = field(default=(), repr=False)
    epsilon: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def v0(self) -> float:
        """``sup V_-`` after validation (cached)."""
        cached = self.__dict__.get("_v0")
        if cached is None:
            cached = validate(self)
            self.__dict__["_v0"] = cached
        return cached


def zero() -> PotentialSpec:
    """The trivial potential."""
    return PotentialSpec(kind="zero")


def finite_well(depth: float, radius: float, epsilon: float = 0.1) -> PotentialSpec:
    """Square well ``-depth`` on ``[0, radius)``; depth > 0 is attractive."""
    if radius <= 0.0:
        raise ValueError("well radius must be positive")
    return PotentialSpec(
        kind="finite_well", depth=float(depth), radius=float(radius), epsilon=epsilon
    )


def gaussian(amplitude: float, width: float, epsilon: float = 0.1) -> PotentialSpec:
    """``amplitude exp(-(r/width)^2)``; negative amplitude is attractive."""
    if width <= 0.0:
        raise ValueError("gaussian width must be positive")
    return PotentialSpec(
        kind="gaussian", amplitude=float(amplitude), width=float(width), epsilon=epsilon
    )


def power_barrier(
    coeff: float,
    exponent: float,
    support_min: float = 0.0,
    epsilon: float = 0.1,
) -> PotentialSpec:
    """``coeff r^exponent`` on ``[support_min, oo)``, exponent in (-1, 0)."""
    if coeff <= 0.0:
        raise ValueError("power barrier coefficient must be positive")
    if not -1.0 < exponent < 0.0:
        raise ValueError(f"power barrier exponent must lie in (-1, 0), got {exponent}")
    if support_min < 0.0:
        raise ValueError("support_min must be nonnegative")
    return PotentialSpec(
        kind="power_barrier",
        coeff=float(coeff),
        exponent=float(exponent),
        support_min=float(support_min),
        epsilon=epsilon,
    )


def tabulated(r, v, epsilon: float = 0.1) -> PotentialSpec:
    """Piecewise-linear potential through the sample nodes (r, v).

    Radii must be nonnegative, strictly increasing and finite; the
    ``r = 0`` node is optional (the first value extends constantly to
    the origin).
    """
    r = np.asarray(r, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if r.ndim != 1 or r.shape != v.shape or r.size < 2:
        raise ValueError("tabulated potential needs matching 1d arrays, >= 2 nodes")
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
        raise ValueError("tabulated potential nodes must be finite")
    if r[0] < 0.0 or np.any(np.diff(r) <= 0.0):
        raise ValueError("tabulated radii must be nonnegative and strictly increasing")
    return PotentialSpec(
        kind="tabulated",
        table_r=tuple(float(x) for x in r),
        table_v=tuple(float(x) for x in v),
        epsilon=epsilon,
    )


def from_table_file(path: str | Path, epsilon: float = 0.1) -> PotentialSpec:
    """Load a tabulated potential from two-column CSV ``r,V`` (one header line)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns r,V")
    return tabulated(data[:, 0], data[:, 1], epsilon=epsilon)


def validate(spec: PotentialSpec) -> float:
    """Check the standing assumptions and return ``V0 = sup V_-``.

    Raises :class:`AssumptionViolation` listing every failed clause.
    ``V_-`` must be essentially bounded; ``V_+`` must be locally square
    integrable and bounded on ``[0, epsilon)``.
    """
    failures: list[str] = []
    v0 = 0.0
    if spec.kind == "zero":
        v0 = 0.0
    elif spec.kind == "finite_well":
        v0 = max(spec.depth, 0.0)
    elif spec.kind == "gaussian":
        v0 = max(-spec.amplitude, 0.0)
    elif spec.kind == "power_barrier":
        v0 = 0.0
        if spec.support_min == 0.0:
            failures.append("V+ not in L^inf([0, eps)): r^exponent unbounded at 0")
            if spec.exponent <= -0.5:
                failures.append(
                    "V+ not in L^2_loc: exponent <= -1/2 with support touching 0"
                )
    elif spec.kind == "tabulated":
        v0 = max(0.0, -min(spec.table_v))
    if failures:
        raise AssumptionViolation("; ".join(failures))
    return v0


def eval_potential(spec: PotentialSpec, r):
    """V(r) at a nonnegative radius or array of radii."""
    scalar = np.ndim(r) == 0
    rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
    if spec.kind == "zero":
        out = np.zeros_like(rr)
    elif spec.kind == "finite_well":
        out = np.where(rr < spec.radius, -spec.depth, 0.0)
    elif spec.kind == "gaussian":
        out = spec.amplitude * np.exp(-((rr / spec.width) ** 2))
    elif spec.kind == "power_barrier":
        with np.errstate(divide="ignore"):
            out = np.where(
                rr >= spec.support_min, spec.coeff * rr**spec.exponent, 0.0
            )
    else:
        tr = np.asarray(spec.table_r)
        tv = np.asarray(spec.table_v)
        if tv[-1] != 0.0 and np.any(rr > tr[-1]):
            raise ValueError(
                "tabulated potential queried beyond the last node; constant "
                "continuation is only defined when the table ends at zero"
            )
        out = np.interp(rr, tr, tv)
    if scalar:
        return float(out[0])
    return out


def quadrature_breakpoints(spec: PotentialSpec) -> list[float]:
    """Radii where V or its slope jumps; quadratures split panels there."""
    if spec.kind == "finite_well":
        return [spec.radius]
    if spec.kind == "power_barrier" and spec.support_min > 0.0:
        return [spec.support_min]
    if spec.kind == "tabulated":
        return [float(x) for x in spec.table_r if x > 0.0]
    return []


def _parse_kv(body: str, mapping: dict[str, str], what: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in body.split(","):
        if "=" not in item:
            raise ValueError(f"bad {what} parameter {item!r}, expected key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in mapping:
            raise ValueError(
                f"unknown {what} parameter {key!r}, expected {sorted(mapping)}"
            )
        try:
            out[mapping[key]] = float(raw)
        except ValueError as exc:
            raise ValueError(f"bad numeric value for {key!r}: {raw!r}") from exc
    if len(out) != len(mapping):
        missing = sorted(set(mapping) - {k for k in mapping if mapping[k] in out})
        raise ValueError(f"missing {what} parameter(s): {missing}")
    return out


def parse_potential(text: str) -> PotentialSpec:
    """Parse the CLI potential mini-language.

    ``zero`` | ``well:depth=<f>,radius=<f>`` | ``gauss:amp=<f>,width=<f>``
    | ``table:<path>``.
    """
    text = text.strip()
    if text == "zero":
        return zero()
    head, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"unrecognized potential {text!r}")
    if head == "well":
        kv = _parse_kv(body, {"depth": "depth", "radius": "radius"}, "well")
        return finite_well(**kv)
    if head == "gauss":
        kv = _parse_kv(body, {"amp": "amplitude", "width": "width"}, "gauss")
        return gaussian(**kv)
    if head == "table":
        return from_table_file(body)
    raise ValueError(f"unrecognized potential kind {head!r}")
