"""Command-line interface.

Five subcommands cover the library surface:

``specfun``
    Evaluate the modified Bessel kernel ``K_a(x)`` (or its derivative)
    together with a certified error bound and the evaluation regime.
``form-eval``
    Evaluate the quadratic form on a state read from a small text file.
``spectrum``
    Solve one angular sector and emit a structured result record.
``sweep``
    Scan ``(alpha, beta)`` grids and stream one CSV row per pair.
``verify``
    Run the numerical self-check suites and print a fixed-format report.

Exit codes: 0 success, 1 verification failure, 2 domain or configuration
error, 3 convergence failure.  All randomness is seeded, so identical
configurations reproduce identical output bytes (wall time excepted).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__, verify
from .defect import DefectFunction
from .forms import (
    FormDecomposition,
    SectorState,
    as_extension_parameter,
    interacting_form,
    lambda_invariance_check,
    state_norm_sq,
    _coeff_defect,
)
from .potentials import parse_potential
from .specfun import Order, bessel_k, bessel_k_prime
from .spectral import RadialBasis, SpectralResult, default_scale, solve_sector

__all__ = [
    "EXIT_CONFIG",
    "EXIT_CONVERGENCE",
    "EXIT_OK",
    "EXIT_VERIFY",
    "RunConfig",
    "SCHEMA_VERSION",
    "SWEEP_COLUMNS",
    "build_record",
    "main",
    "read_state_file",
]

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3

SCHEMA_VERSION = "1"
SWEEP_COLUMNS = "alpha,beta,E0,E0_closed_form,q_abs,lambda_used,residual,converged"


class ConfigError(ValueError):
    """A run configuration failed validation before any computation."""


# ---------------------------------------------------------------------------
# configuration


@dataclasses.dataclass
class RunConfig:
    """Validated bundle of run parameters shared by spectrum and sweep.

    ``beta`` is a float or the string ``"friedrichs"``; ``basis_scale``
    and ``lam`` are floats or the string ``"auto"``.
    """

    alpha: float = 0.5
    beta: float | str = -1.0
    potential: str = "zero"
    basis_size: int = 32
    basis_scale: float | str = "auto"
    lam: float | str = "auto"
    rmax: float = 40.0
    tolerance: float = 1e-6
    output_format: str = "json"
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(
                f"alpha must lie strictly in (0, 1), got {self.alpha}"
            )
        if isinstance(self.beta, str) and self.beta != "friedrichs":
            raise ConfigError(
                f"beta must be a real number or 'friedrichs', got {self.beta!r}"
            )
        if self.basis_size < 2:
            raise ConfigError(f"basis_size must be at least 2, got {self.basis_size}")
        for name in ("basis_scale", "lam"):
            val = getattr(self, name)
            if isinstance(val, str):
                if val != "auto":
                    raise ConfigError(
                        f"{name} must be a positive real or 'auto', got {val!r}"
                    )
            elif not val > 0.0:
                raise ConfigError(f"{name} must be positive, got {val}")
        if not self.rmax > 0.0:
            raise ConfigError(f"rmax must be positive, got {self.rmax}")
        if not self.tolerance > 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(
                f"output_format must be 'json' or 'csv', got {self.output_format!r}"
            )
        parse_potential(self.potential).v0  # assumption check up front

    def echo(self) -> dict:
        """The config as a plain JSON-ready mapping (key ``lambda``)."""
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "potential": self.potential,
            "basis_size": self.basis_size,
            "basis_scale": self.basis_scale,
            "lambda": self.lam,
            "rmax": self.rmax,
            "tolerance": self.tolerance,
            "output_format": self.output_format,
            "seed": self.seed,
        }

    def content_hash(self) -> str:
        payload = json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a real number, got {raw!r}") from None


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None


def _parse_beta(key: str, raw: str) -> float | str:
    if raw.strip().lower() == "friedrichs":
        return "friedrichs"
    return _parse_float(key, raw)


def _parse_auto_float(key: str, raw: str) -> float | str:
    if raw.strip().lower() == "auto":
        return "auto"
    return _parse_float(key, raw)


def _parse_str(key: str, raw: str) -> str:
    return raw


_FIELD_PARSERS = {
    "alpha": _parse_float,
    "beta": _parse_beta,
    "potential": _parse_str,
    "basis_size": _parse_int,
    "basis_scale": _parse_auto_float,
    "lambda": _parse_auto_float,
    "rmax": _parse_float,
    "tolerance": _parse_float,
    "output_format": _parse_str,
    "seed": _parse_int,
}
_DEST = {key: ("lam" if key == "lambda" else key) for key in _FIELD_PARSERS}


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"{path}:{lineno}: expected key=value, got {stripped!r}"
                )
            key, _, value = stripped.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge a key=value config file with flags; flags win."""
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        file_kv = _read_config_file(args.config)
        unknown = sorted(set(file_kv) - set(_FIELD_PARSERS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        raw.update(file_kv)
    for key, dest in _DEST.items():
        flag_val = getattr(args, dest, None)
        if flag_val is not None:
            raw[key] = flag_val
    kwargs = {
        _DEST[key]: _FIELD_PARSERS[key](key, str(value))
        for key, value in raw.items()
    }
    cfg = RunConfig(**kwargs)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# shared solver plumbing


def _sector_result(cfg: RunConfig, sector: int) -> SpectralResult:
    order = Order(cfg.alpha)
    ext = as_extension_parameter(cfg.beta)
    potential = parse_potential(cfg.potential)
    if cfg.basis_scale == "auto":
        scale = default_scale(order, ext) if sector == 0 else 1.0
    else:
        scale = float(cfg.basis_scale)
    basis = RadialBasis(order, cfg.basis_size, scale)
    lam = None if cfg.lam == "auto" else float(cfg.lam)
    return solve_sector(
        order,
        ext,
        potential,
        basis=basis,
        lam=lam,
        sector=sector,
        tolerance=cfg.tolerance,
    )


def _identity_checks(cfg: RunConfig, res: SpectralResult) -> list[dict]:
    checks = []

    def add(name: str, measured: float, bound: float) -> None:
        checks.append(
            {
                "name": name,
                "measured": float(measured),
                "bound": float(bound),
                "passed": bool(measured <= bound),
            }
        )

    bound_state = res.continuum and not res.continuum[0]
    form_res = res.residuals.get("ground_state_form_residual")
    if form_res is not None and bound_state:
        # Only bound states solve the eigenvalue equation pointwise; a
        # continuum-edge Ritz value has no residual to certify.
        add("ground_state_form_residual", form_res, 1e-4)
    doubling = res.residuals.get("e0_doubling_delta")
    if doubling is not None and bound_state:
        add(
            "basis_doubling_delta",
            doubling,
            max(1e-8, cfg.tolerance * abs(res.ground_energy)),
        )
    if res.closed_form_reference is not None and res.closed_form_reference != 0.0:
        add(
            "closed_form_agreement",
            abs(res.ground_energy / res.closed_form_reference - 1.0),
            1e-6,
        )
    return checks


def build_record(
    cfg: RunConfig,
    res: SpectralResult,
    extra: list[SpectralResult] | None = None,
    wall_time: float = 0.0,
) -> dict:
    """Assemble the versioned JSON result record for one spectrum run."""
    record = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": cfg.echo(),
        "config_hash": cfg.content_hash(),
        "sector": res.sector,
        "eigenvalues": [float(w) for w in res.eigenvalues],
        "continuum": [bool(f) for f in res.continuum],
        "charge": None if res.charge is None else float(res.charge),
        "charges": None
        if res.charges is None
        else [float(q) for q in res.charges],
        "lambda_used": float(res.lambda_used),
        "closed_form_reference": None
        if res.closed_form_reference is None
        else float(res.closed_form_reference),
        "converged": bool(res.converged),
        "residuals": {k: float(v) for k, v in res.residuals.items()},
        "identity_checks": _identity_checks(cfg, res),
        "wall_time": float(wall_time),
    }
    if extra:
        record["extra_sectors"] = [
            {
                "sector": r.sector,
                "eigenvalues": [float(w) for w in r.eigenvalues],
                "converged": bool(r.converged),
                "residuals": {k: float(v) for k, v in r.residuals.items()},
            }
            for r in extra
        ]
    return record


def _format_cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _result_row(alpha: float, beta: float | str, res: SpectralResult) -> str:
    fields = [
        repr(float(alpha)),
        beta if isinstance(beta, str) else repr(float(beta)),
        _format_cell(res.ground_energy),
        _format_cell(res.closed_form_reference),
        _format_cell(None if res.charge is None else abs(res.charge)),
        _format_cell(res.lambda_used),
        _format_cell(res.residuals.get("ground_state_form_residual")),
        "true" if res.converged else "false",
    ]
    return ",".join(fields)


def _failed_row(alpha: float, beta: float | str) -> str:
    beta_txt = beta if isinstance(beta, str) else repr(float(beta))
    return f"{float(alpha)!r},{beta_txt},,,,,,false"


# ---------------------------------------------------------------------------
# subcommands


def cmd_specfun(args: argparse.Namespace) -> int:
    order = Order(args.alpha)
    if not args.x > 0.0:
        raise ConfigError(f"x must be positive, got {args.x}")
    res = bessel_k_prime(order, args.x) if args.prime else bessel_k(order, args.x)
    if args.json:
        payload = {
            "order": order.alpha,
            "x": args.x,
            "derivative": bool(args.prime),
            "value": res.value,
            "abs_error_bound": res.abs_error_bound,
            "regime": res.regime,
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(repr(res.value))
        print(f"abs_error_bound={res.abs_error_bound:.3e} regime={res.regime}")
    return EXIT_OK


def read_state_file(path: str) -> tuple[float, float, float, np.ndarray, np.ndarray]:
    """Parse a state file into ``(alpha, q, lam, r, psi)``.

    Format: a header line ``alpha=<f> q=<f> lambda=<f>``, a column line
    ``r,psi0``, then comma-separated samples of the full state psi.
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            fields = dict(item.split("=", 1) for item in header.split())
            alpha = float(fields["alpha"])
            q = float(fields["q"])
            lam = float(fields["lambda"])
        except (KeyError, ValueError):
            raise ConfigError(
                f"{path}: first line must read 'alpha=<f> q=<f> lambda=<f>', "
                f"got {header!r}"
            ) from None
        columns = fh.readline().strip().replace(" ", "")
        if columns != "r,psi0":
            raise ConfigError(f"{path}: second line must be 'r,psi0', got {columns!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ConfigError(f"{path}: expected two columns, got {data.shape[1]}")
    return alpha, q, lam, data[:, 0], data[:, 1]


def cmd_form_eval(args: argparse.Namespace) -> int:
    alpha, q, lam, r, psi = read_state_file(args.state)
    order = Order(alpha)
    ext = as_extension_parameter(args.beta)
    potential = parse_potential(args.potential)
    # The file stores the full state; the regular part is what remains
    # after removing the defect contribution at the nodes.
    phi = psi - q * _coeff_defect(order, lam, r)
    decomp = FormDecomposition(order, SectorState.from_grid(0, r, phi), q, lam)
    value = interacting_form(decomp, ext, potential)
    diagnostics = {
        "form_value": value,
        "alpha": order.alpha,
        "beta": "friedrichs" if ext.is_friedrichs else ext.beta,
        "charge": q,
        "lambda": lam,
        "n_nodes": int(r.size),
        "potential": args.potential,
        "regular_norm_sq": state_norm_sq(decomp.regular_part),
    }
    if q != 0.0:
        diagnostics["lambda_invariance"] = lambda_invariance_check(
            decomp, ext, 1.5 * lam
        )
    if args.json:
        print(json.dumps(diagnostics, sort_keys=True, indent=2))
    else:
        for key in sorted(diagnostics):
            print(f"{key}={diagnostics[key]}")
    return EXIT_OK


def _parse_sectors(raw: str) -> list[int]:
    try:
        sectors = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError(f"sectors must be comma-separated integers, got {raw!r}")
    return sectors


def cmd_spectrum(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    sectors = _parse_sectors(args.sectors) if args.sectors else [0]
    if 0 not in sectors:
        sectors = [0] + sectors
    start = time.perf_counter()
    results = {k: _sector_result(cfg, k) for k in sectors}
    wall = time.perf_counter() - start
    main_res = results[0]
    extra = [results[k] for k in sectors if k != 0]
    if cfg.output_format == "csv":
        print(SWEEP_COLUMNS)
        print(_result_row(cfg.alpha, cfg.beta, main_res))
    else:
        record = build_record(cfg, main_res, extra, wall_time=wall)
        print(json.dumps(record, sort_keys=True, indent=2))
    if not all(r.converged for r in results.values()):
        return EXIT_CONVERGENCE
    return EXIT_OK


def _parse_grid(key: str, raw: str) -> list[float]:
    """A grid is ``lo:hi:n`` (inclusive linspace) or a comma list."""
    raw = raw.strip()
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{key} must be lo:hi:n or a comma list, got {raw!r}")
        lo = _parse_float(key, parts[0])
        hi = _parse_float(key, parts[1])
        n = _parse_int(key, parts[2])
        if n < 1:
            raise ConfigError(f"{key} needs at least one point, got n={n}")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return [_parse_float(key, tok) for tok in raw.split(",") if tok.strip() != ""]


def _sweep_cell(task: tuple[RunConfig, float, float]) -> str:
    cfg, alpha, beta = task
    try:
        cell = dataclasses.replace(cfg, alpha=alpha, beta=beta)
        cell.validate()
        return _result_row(alpha, beta, _sector_result(cell, 0))
    except Exception:
        return _failed_row(alpha, beta)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    alphas = _parse_grid("alpha-grid", args.alpha_grid)
    betas = _parse_grid("beta-grid", args.beta_grid)
    tasks = [(cfg, a, b) for a in alphas for b in betas]

    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_sweep_cell, tasks, chunksize=1))
    else:
        rows = [_sweep_cell(task) for task in tasks]

    stream = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        print(SWEEP_COLUMNS, file=stream)
        for row in rows:
            print(row, file=stream)
    finally:
        if stream is not sys.stdout:
            stream.close()

    failed = sum(1 for row in rows if row.endswith(",false"))
    if rows and failed == len(rows):
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    checks = verify.run_suite(args.suite, seed=args.seed)
    print(verify.format_report(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--alpha", help="statistics parameter in (0, 1)")
    sub.add_argument("--beta", help="extension parameter, or 'friedrichs'")
    sub.add_argument("--potential", help="potential spec, e.g. well:depth=1,radius=1")
    sub.add_argument("--basis-size", dest="basis_size", help="regular basis dimension")
    sub.add_argument(
        "--basis-scale", dest="basis_scale", help="basis length scale or 'auto'"
    )
    sub.add_argument(
        "--lambda", dest="lam", help="decomposition scale lambda or 'auto'"
    )
    sub.add_argument("--rmax", help="radial truncation for grid states")
    sub.add_argument("--tolerance", help="convergence tolerance on E0")
    sub.add_argument(
        "--output-format",
        dest="output_format",
        choices=("json", "csv"),
        help="record format",
    )
    sub.add_argument("--seed", help="seed echoed into the record")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anyonspec",
        description="Self-adjoint two-anyon Hamiltonians: spectra, forms, checks.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("specfun", help="evaluate the Bessel kernel K_a(x)")
    p.add_argument("--alpha", type=float, required=True, help="order in (0, 1)")
    p.add_argument("--x", type=float, required=True, help="argument, x > 0")
    p.add_argument("--prime", action="store_true", help="evaluate d/dx K_a(x)")
    p.add_argument("--json", action="store_true", help="emit a JSON object")
    p.set_defaults(func=cmd_specfun)

    p = sub.add_parser("form-eval", help="evaluate the quadratic form on a state file")
    p.add_argument("--state", required=True, help="state file (see README)")
    p.add_argument("--beta", required=True, help="extension parameter or 'friedrichs'")
    p.add_argument("--potential", default="zero", help="potential spec")
    p.add_argument("--json", action="store_true", help="emit a JSON object")
    p.set_defaults(func=cmd_form_eval)

    p = sub.add_parser("spectrum", help="solve one angular sector")
    _add_config_flags(p)
    p.add_argument(
        "--sectors",
        help="extra angular sectors as a comma list, e.g. 1,-1 (sector 0 always runs)",
    )
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="scan (alpha, beta) grids, stream CSV")
    _add_config_flags(p)
    p.add_argument(
        "--alpha-grid",
        dest="alpha_grid",
        required=True,
        help="lo:hi:n or comma list",
    )
    p.add_argument(
        "--beta-grid", dest="beta_grid", required=True, help="lo:hi:n or comma list"
    )
    p.add_argument("--workers", type=int, default=1, help="parallel row workers")
    p.add_argument("--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the numerical self-check suites")
    p.add_argument(
        "--suite",
        choices=("identities", "forms", "spectrum", "all"),
        default="all",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # Order guards, potential assumptions, config and file errors all
        # surface here as one structured line on stderr.
        payload = {"error": {"exit_code": EXIT_CONFIG, "message": str(exc)}}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
