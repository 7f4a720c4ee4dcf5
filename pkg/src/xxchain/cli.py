"""Command-line front end: deterministic CSV/JSON emission for every study.

Flags (plus an optional key=value config file) are assembled into a single
validated RunConfig, then each subcommand maps onto one library call and
writes either CSV rows or a JSON report.  All numeric output uses 12
significant digits and runs are byte-identical on rerun (there is no
randomness anywhere in the package).

Exit codes: 0 success, 2 usage or chain-parameter error, 1 computation error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from .chain import (
    ChainSpec,
    build_hamiltonian,
    load_chain_config,
    mirror_impurities,
    single_impurity,
    validate_spec,
    with_alpha,
)
from .dynamics import SeriesKind, time_series
from .errors import XXChainError
from .measures import c12_sweep, ipr_of_rows
from .oracle import oracle_check
from .protocols import (
    default_alpha_grid,
    fidelity_landscape,
    optimize_alpha,
    scaling_sweep,
)
from .spectral import classify_band, eigendecompose


class UsageError(Exception):
    """Bad flag combination or malformed flag value."""


_KIND_FLAGS = {
    "ipr": SeriesKind.IPR,
    "fidelity": SeriesKind.FIDELITY,
    "amplitude": SeriesKind.TRANSFER_AMPLITUDE,
    "concurrence": SeriesKind.CONCURRENCE_AN,
}


@dataclass(frozen=True)
class RunConfig:
    """One fully-validated run: chain parameters, grids, output routing."""

    subcommand: str
    template: ChainSpec | None = None
    alphas: np.ndarray | None = None
    times: np.ndarray | None = None
    states: tuple[int, int] | None = None
    kind: SeriesKind | None = None
    state_index: int | None = None
    n_list: tuple[int, ...] | None = None
    n_max: int | None = None
    out: str | None = None
    fmt: str = "csv"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _round12(value: float) -> float:
    return float(format(float(value), ".12g"))


def _json_ready(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {field.name: _json_ready(getattr(obj, field.name)) for field in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(item) for item in obj]
    if isinstance(obj, (float, np.floating)):
        return _round12(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def emit_csv(rows, schema, out_path=None) -> None:
    """Write header + rows, newline-terminated, locale-independent."""
    lines = [",".join(schema)]
    for row in rows:
        lines.append(",".join(_fmt(value) for value in row))
    _write_text("\n".join(lines) + "\n", out_path)


def emit_json(payload, out_path=None) -> None:
    _write_text(json.dumps(_json_ready(payload), indent=2) + "\n", out_path)


def _write_text(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _parse_range(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{flag} expects lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(part) for part in parts)
    except ValueError:
        raise UsageError(f"{flag} expects numeric lo:hi:step, got {text!r}") from None
    if step <= 0.0:
        raise UsageError(f"{flag} step must be positive, got {step}")
    if hi < lo:
        raise UsageError(f"{flag} needs hi >= lo, got {text!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _parse_states(text: str, n_sites: int) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"--states expects lo:hi, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--states expects integer lo:hi, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"--states needs 1 <= lo <= hi, got {text!r}")
    if hi > n_sites:
        raise UsageError(f"--states upper bound {hi} exceeds n={n_sites}")
    return lo, hi


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise UsageError(f"--n-list expects comma-separated integers, got {text!r}") from None
    if not values:
        raise UsageError("--n-list must name at least one chain length")
    return values


def _chain_template(args, *, sweep_default_impurity: bool) -> ChainSpec:
    """Assemble the chain parameters from config file and flags; flags win.

    Parameter problems surface as UsageError (exit 2) with the underlying
    error class named in the message.
    """
    try:
        base = load_chain_config(args.config) if getattr(args, "config", None) else None
    except (OSError, ValueError) as error:
        raise UsageError(f"--config: {error}") from error
    n = args.n if args.n is not None else (base.n_sites if base else None)
    if n is None:
        raise UsageError("--n is required (or a --config file providing n_sites)")
    exchange_j = args.j if args.j is not None else (base.exchange_j if base else -1.0)
    field_h = args.h if args.h is not None else (base.field_h if base else 0.0)

    alpha = getattr(args, "alpha", None)
    mirror = bool(getattr(args, "mirror", False))
    try:
        if mirror or alpha is not None:
            strength = alpha if alpha is not None else 1.0
            maker = mirror_impurities if mirror else single_impurity
            spec = maker(n, strength, exchange_j=exchange_j, field_h=field_h)
        elif base is not None and base.impurities:
            spec = ChainSpec(n, exchange_j, field_h, base.impurities)
        elif sweep_default_impurity:
            spec = single_impurity(n, 1.0, exchange_j=exchange_j, field_h=field_h)
        else:
            spec = ChainSpec(n, exchange_j, field_h)
        return validate_spec(spec)
    except XXChainError as error:
        raise UsageError(f"{type(error).__name__}: {error}") from error


def _sweep_alphas(args) -> np.ndarray:
    if args.alpha_range is not None and args.alpha is not None:
        raise UsageError("use either --alpha or --alpha-range, not both")
    if args.alpha_range is not None:
        return _parse_range(args.alpha_range, "--alpha-range")
    if args.alpha is not None:
        return np.array([float(args.alpha)])
    raise UsageError("--alpha or --alpha-range is required")


def assemble_config(args) -> RunConfig:
    """Validate flags and build the RunConfig for one subcommand run."""
    command = args.command
    out = getattr(args, "out", None)
    fmt = getattr(args, "format", "csv")

    if command in ("spectrum", "ipr-sweep", "concurrence-sweep"):
        template = _chain_template(args, sweep_default_impurity=True)
        states = None
        if command != "spectrum":
            default = (1, template.n_sites)
            if command == "concurrence-sweep":
                default = (2, max(template.n_sites // 2, 2))
            states = (
                _parse_states(args.states, template.n_sites) if args.states else default
            )
        return RunConfig(
            subcommand=command, template=template, alphas=_sweep_alphas(args),
            states=states, out=out, fmt=fmt,
        )

    if command == "eigenvector":
        template = _chain_template(args, sweep_default_impurity=False)
        if not 1 <= args.state <= template.n_sites:
            raise UsageError(f"--state must be in 1..{template.n_sites}, got {args.state}")
        return RunConfig(
            subcommand=command, template=template, state_index=args.state, out=out, fmt=fmt
        )

    if command == "evolve":
        template = _chain_template(args, sweep_default_impurity=False)
        if args.t_range is not None and args.t_max is not None:
            raise UsageError("use either --t-range or --t-max, not both")
        if args.t_range is not None:
            times = _parse_range(args.t_range, "--t-range")
        elif args.t_max is not None:
            if args.t_max < 0:
                raise UsageError("--t-max must be non-negative")
            times = _parse_range(f"0:{args.t_max}:{args.dt}", "--t-max/--dt")
        else:
            raise UsageError("--t-range or --t-max is required")
        return RunConfig(
            subcommand=command, template=template, times=times,
            kind=_KIND_FLAGS[args.kind], out=out, fmt=fmt,
        )

    if command == "landscape":
        template = _chain_template(args, sweep_default_impurity=False)
        if args.alpha_range is None or args.t_range is None:
            raise UsageError("landscape requires --alpha-range and --t-range")
        return RunConfig(
            subcommand=command, template=template,
            alphas=_parse_range(args.alpha_range, "--alpha-range"),
            times=_parse_range(args.t_range, "--t-range"), out=out, fmt=fmt,
        )

    if command == "optimize":
        template = _chain_template(args, sweep_default_impurity=False)
        alphas = (
            _parse_range(args.alpha_range, "--alpha-range")
            if args.alpha_range is not None
            else default_alpha_grid()
        )
        return RunConfig(subcommand=command, template=template, alphas=alphas, out=out, fmt=fmt)

    if command == "scaling":
        n_list = _parse_n_list(args.n_list)
        for n in n_list:
            if n % 2 != 0:
                raise UsageError(f"--n-list lengths must be even, got {n}")
        # carrier for the shared couplings; lengths come from n_list
        template = ChainSpec(
            n_list[0],
            args.j if args.j is not None else -1.0,
            args.h if args.h is not None else 0.0,
        )
        alphas = (
            _parse_range(args.alpha_range, "--alpha-range")
            if args.alpha_range is not None
            else default_alpha_grid()
        )
        return RunConfig(
            subcommand=command, template=template, alphas=alphas, n_list=n_list,
            out=out, fmt=fmt,
        )

    return RunConfig(subcommand=command, n_max=args.n_max, out=out)


def _cmd_spectrum(cfg: RunConfig) -> int:
    rows = []
    for alpha in cfg.alphas:
        spec = with_alpha(cfg.template, float(alpha))
        dec = eigendecompose(build_hamiltonian(spec))
        labels = classify_band(dec, spec.exchange_j).labels
        for j in range(dec.n_sites):
            rows.append((float(alpha), j + 1, float(dec.energies[j]), labels[j].value))
    _emit_rows(rows, ["alpha", "j", "energy", "label"], cfg)
    return 0


def _cmd_ipr_sweep(cfg: RunConfig) -> int:
    lo, hi = cfg.states
    rows = []
    for alpha in cfg.alphas:
        dec = eigendecompose(build_hamiltonian(with_alpha(cfg.template, float(alpha))))
        values = ipr_of_rows(dec.vectors)
        for j in range(lo, hi + 1):
            rows.append((float(alpha), j, float(values[j - 1])))
    _emit_rows(rows, ["alpha", "j", "value"], cfg)
    return 0


def _cmd_concurrence_sweep(cfg: RunConfig) -> int:
    lo, hi = cfg.states
    rows = c12_sweep(cfg.template, cfg.alphas, range(lo, hi + 1))
    _emit_rows(rows, ["alpha", "j", "value"], cfg)
    return 0


def _cmd_eigenvector(cfg: RunConfig) -> int:
    dec = eigendecompose(build_hamiltonian(cfg.template))
    vector = dec.vectors[cfg.state_index - 1]
    rows = [(site + 1, float(vector[site])) for site in range(dec.n_sites)]
    _emit_rows(rows, ["site", "amplitude"], cfg)
    return 0


def _cmd_evolve(cfg: RunConfig) -> int:
    series = time_series(eigendecompose(build_hamiltonian(cfg.template)), cfg.kind, cfg.times)
    if cfg.kind is SeriesKind.TRANSFER_AMPLITUDE:
        rows = [(t, float(v.real), float(v.imag)) for t, v in zip(series.times, series.values)]
        _emit_rows(rows, ["t", "re", "im"], cfg)
    else:
        rows = list(zip(series.times, series.values))
        _emit_rows(rows, ["t", "value"], cfg)
    return 0


def _cmd_landscape(cfg: RunConfig) -> int:
    grid = fidelity_landscape(
        cfg.template.n_sites, cfg.alphas, cfg.times,
        exchange_j=cfg.template.exchange_j, field_h=cfg.template.field_h,
    )
    rows = []
    for row, alpha in enumerate(grid.alphas):
        for col, t in enumerate(grid.times):
            rows.append((float(alpha), float(t), float(grid.fidelities[row, col])))
    _emit_rows(rows, ["alpha", "t", "fidelity"], cfg)
    return 0


def _cmd_optimize(cfg: RunConfig) -> int:
    report = optimize_alpha(
        cfg.template.n_sites, cfg.alphas,
        exchange_j=cfg.template.exchange_j, field_h=cfg.template.field_h,
    )
    _emit_report(report, cfg)
    return 0


def _cmd_scaling(cfg: RunConfig) -> int:
    result = scaling_sweep(
        cfg.n_list, cfg.alphas,
        exchange_j=cfg.template.exchange_j, field_h=cfg.template.field_h,
    )
    _emit_report(result, cfg)
    return 0


def _cmd_oracle_check(cfg: RunConfig) -> int:
    results = oracle_check(n_values=range(2, cfg.n_max + 1))
    lines = ["  n  block_dev       amplitude_dev   concurrence_dev  status"]
    for item in results:
        lines.append(
            f"{item.n_sites:>3}  {_fmt(item.block_dev):<15} {_fmt(item.amplitude_dev):<15} "
            f"{_fmt(item.concurrence_dev):<16} {'pass' if item.passed else 'FAIL'}"
        )
    _write_text("\n".join(lines) + "\n", cfg.out)
    return 0 if all(item.passed for item in results) else 1


def _emit_rows(rows, schema, cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        payload = [dict(zip(schema, row)) for row in rows]
        emit_json(payload, cfg.out)
    else:
        emit_csv(rows, schema, cfg.out)


def _emit_report(report, cfg: RunConfig) -> None:
    if cfg.fmt == "csv":
        raise UsageError("reports are emitted as JSON; drop --format csv")
    emit_json(report, cfg.out)


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "ipr-sweep": _cmd_ipr_sweep,
    "concurrence-sweep": _cmd_concurrence_sweep,
    "eigenvector": _cmd_eigenvector,
    "evolve": _cmd_evolve,
    "landscape": _cmd_landscape,
    "optimize": _cmd_optimize,
    "scaling": _cmd_scaling,
    "oracle-check": _cmd_oracle_check,
}


def _add_chain_flags(parser: argparse.ArgumentParser, *, alpha: bool = True) -> None:
    parser.add_argument("--n", type=int, default=None, help="number of chain sites")
    parser.add_argument("--j", type=float, default=None, help="exchange coupling J (default -1)")
    parser.add_argument("--h", type=float, default=None, help="uniform field h (default 0)")
    parser.add_argument("--config", default=None, help="key=value chain config file; flags override")
    if alpha:
        parser.add_argument("--alpha", type=float, default=None, help="impurity strength")
        parser.add_argument("--mirror", action="store_true", help="impurities on both edge bonds")


def _add_output_flags(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument(
        "--format", choices=("csv", "json"), default=default_format, help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xxchain",
        description="One-excitation studies of an XX chain with edge-bond impurities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and band labels over an alpha grid")
    _add_chain_flags(p)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step")
    _add_output_flags(p, "csv")

    p = sub.add_parser("ipr-sweep", help="eigenstate IPR over an alpha grid")
    _add_chain_flags(p)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step")
    p.add_argument("--states", default=None, help="1-based eigenstate range lo:hi (default 1:N)")
    _add_output_flags(p, "csv")

    p = sub.add_parser("concurrence-sweep", help="first-bond concurrence over an alpha grid")
    _add_chain_flags(p)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step")
    p.add_argument("--states", default=None, help="1-based eigenstate range lo:hi (default 2:N/2)")
    _add_output_flags(p, "csv")

    p = sub.add_parser("eigenvector", help="site amplitudes of one eigenstate")
    _add_chain_flags(p)
    p.add_argument("--state", type=int, required=True, help="1-based eigenstate index")
    _add_output_flags(p, "csv")

    p = sub.add_parser("evolve", help="time series of IPR, fidelity, amplitude or concurrence")
    _add_chain_flags(p)
    p.add_argument("--kind", choices=sorted(_KIND_FLAGS), default="fidelity")
    p.add_argument("--t-range", default=None, help="time grid lo:hi:step")
    p.add_argument("--t-max", type=float, default=None, help="evolve over [0, t-max]")
    p.add_argument("--dt", type=float, default=0.05, help="time step for --t-max (default 0.05)")
    _add_output_flags(p, "csv")

    p = sub.add_parser("landscape", help="fidelity F(alpha, t) for the mirror chain")
    _add_chain_flags(p, alpha=False)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step")
    p.add_argument("--t-range", default=None, help="time grid lo:hi:step")
    p.add_argument("--seedless", action="store_true", help="no-op; runs are deterministic")
    _add_output_flags(p, "csv")

    p = sub.add_parser("optimize", help="best mirror-impurity strength for one chain length")
    _add_chain_flags(p, alpha=False)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step (default 0.3:1.0:0.01)")
    p.add_argument("--seedless", action="store_true", help="no-op; runs are deterministic")
    _add_output_flags(p, "json")

    p = sub.add_parser("scaling", help="optimize several chain lengths and fit t_tr vs N")
    p.add_argument("--n-list", required=True, help="comma-separated even chain lengths")
    p.add_argument("--j", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--alpha-range", default=None, help="alpha grid lo:hi:step (default 0.3:1.0:0.01)")
    p.add_argument("--seedless", action="store_true", help="no-op; runs are deterministic")
    _add_output_flags(p, "json")

    p = sub.add_parser("oracle-check", help="sector vs full-Hilbert-space equivalence table")
    p.add_argument("--n-max", type=int, default=8, help="largest chain length to check (default 8)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_info:
        return int(exit_info.code or 0)
    try:
        cfg = assemble_config(args)
    except UsageError as error:
        print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[cfg.subcommand](cfg)
    except UsageError as error:
        print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
        return 2
    except (XXChainError, ValueError, OSError) as error:
        print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
