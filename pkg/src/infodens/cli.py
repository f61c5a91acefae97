"""Command-line entry point.

    infodens gaussian --sigma 1.0
    infodens spectrum --system nucleus --n 16
    infodens density  --system cluster --n 20 --out-prefix na20
    infodens measures --system bosons --n 1000 --format json
    infodens scan     --system cluster --n 2,8,20 --out scan.csv --jobs 4
    infodens fit      --in scan.csv --column S_E --model linear

Exit codes: 0 success, 1 input/config error, 2 solver failure.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import SYSTEMS, RunConfig, load_config
from .errors import InfodensError, InputError, SolverError
from .measures import GaussianSpec, MeasureSet, measure_set, onicescu_1d
from .scaling import (CONVENTIONS, DEFAULT_N, MODELS, REFERENCE_SLOPES, fit, figure_series,
                      scan, setup_from_config, system_density)
from .numerics import RadialGrid
from .spectrum import find_spectrum

SCAN_COLUMNS = ("system", "N") + MeasureSet.FIELDS


def fmt(x) -> str:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return f"{float(x):.9g}"
    return str(x)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infodens", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"infodens {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="flat key = value config file (default: $INFODENS_CONFIG)")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key; repeatable")
        sp.add_argument("--system", choices=SYSTEMS)
        sp.add_argument("--n", help="particle number(s), comma separated")
        sp.add_argument("--format", choices=("csv", "json"))

    g = sub.add_parser("gaussian", help="1-D information energy of a Gaussian")
    g.add_argument("--sigma", type=float, required=True)
    g.add_argument("--mu", type=float, default=0.0)

    s = sub.add_parser("spectrum", help="single-particle level table")
    common(s)
    s.add_argument("--out")

    d = sub.add_parser("density", help="write rho(r) and n(k) two-column CSVs")
    common(d)
    d.add_argument("--out-prefix", required=True)

    m = sub.add_parser("measures", help="one MeasureSet row")
    common(m)
    m.add_argument("--out")

    sc = sub.add_parser("scan", help="MeasureSets over an N list")
    common(sc)
    sc.add_argument("--out")
    sc.add_argument("--jobs", type=int)
    sc.add_argument("--figures", metavar="DIR", help="also write per-figure (N, value) CSVs")

    f = sub.add_parser("fit", help="fit a scaling law to a scan CSV column")
    f.add_argument("--in", dest="infile", required=True)
    f.add_argument("--column", default="S_E")
    f.add_argument("--model", choices=MODELS, default="linear")
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--out")
    return p


def _config(args) -> RunConfig:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise InputError("cli.run", f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v
    if args.system:
        overrides["system.kind"] = args.system
    if args.n:
        overrides["scan.n"] = args.n
    if getattr(args, "format", None):
        overrides["output.format"] = args.format
    if getattr(args, "jobs", None):
        overrides["jobs"] = str(args.jobs)
    return load_config(args.config, overrides)


def _n_values(cfg: RunConfig, single: bool):
    values = cfg.n_values or DEFAULT_N[cfg.system]
    if single and len(values) != 1:
        raise InputError("cli.run", "this subcommand takes exactly one --n value")
    return values


def resolved_items(cfg: RunConfig) -> dict:
    """Parameters after system defaults are applied."""
    setup = setup_from_config(cfg)
    out = {}
    if setup.spec is not None:
        out.update({f"resolved.{k}": v for k, v in setup.spec.to_dict().items()})
        out["resolved.degeneracy"] = f"{setup.g}(2l+1)"
    else:
        out["resolved.a_s_over_b"] = setup.a_s_over_b
        out["resolved.omega"] = setup.omega
    out.update({"resolved.r_max": setup.r_max, "resolved.n_points": setup.n_points,
                "resolved.k_max": setup.k_max, "resolved.k_points": setup.k_points})
    return out


# scheduling only; left out of output headers so --jobs never changes a file
_NOT_ECHOED = ("jobs",)


def _echoed(cfg: RunConfig) -> list[tuple[str, object]]:
    return [(k, v) for k, v in cfg.items() if k not in _NOT_ECHOED]


def header_lines(cfg: RunConfig | None, extra: dict | None = None) -> list[str]:
    lines = [f"# infodens {__version__}"]
    if cfg is not None:
        lines += [f"# {k} = {fmt(v) if v is not None else 'default'}" for k, v in _echoed(cfg)]
        lines += [f"# {k} = {fmt(v)}" for k, v in resolved_items(cfg).items()]
    for k, v in (extra or {}).items():
        lines.append(f"# {k} = {fmt(v)}")
    lines += [f"# convention: {c}" for c in CONVENTIONS]
    return lines


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], columns: tuple, rows) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _json(header_cfg: RunConfig | None, payload) -> str:
    meta = {"version": __version__, "conventions": list(CONVENTIONS)}
    if header_cfg is not None:
        meta["config"] = dict(_echoed(header_cfg))
        meta["resolved"] = resolved_items(header_cfg)
    return json.dumps({"metadata": meta, "data": payload}, indent=2, sort_keys=True,
                      default=float) + "\n"


def cmd_gaussian(args) -> None:
    g = GaussianSpec(args.mu, args.sigma)
    _, rho, dx = g.sample()
    print(f"E = {fmt(onicescu_1d(rho, dx))}")
    print(f"closed_form = {fmt(g.information_energy())}")


def cmd_spectrum(args) -> None:
    cfg = _config(args)
    if cfg.system == "bosons":
        raise InputError("cli.spectrum", "the boson system has no single-particle ladder")
    (N,) = _n_values(cfg, single=True)
    setup = setup_from_config(cfg)
    grid = RadialGrid(setup.r_max, setup.n_points)
    result = find_spectrum(setup.spec, N, grid, setup.l_max, setup.max_states_per_l)
    rows = [(o.l, o.n_r, o.energy, setup.g * (2 * o.l + 1)) for o in result.orbitals]
    _emit(_csv(header_lines(cfg, {"N": N}), ("l", "n_r", "energy", "degeneracy"), rows), args.out)


def cmd_density(args) -> None:
    cfg = _config(args)
    (N,) = _n_values(cfg, single=True)
    pair, info = system_density(setup_from_config(cfg), N)
    extra = {"N": N, "r_max_used": info["r_max"]}
    prefix = args.out_prefix
    _emit(_csv(header_lines(cfg, extra), ("r", "rho"), zip(pair.rho.r, pair.rho.values)),
          f"{prefix}_r.csv")
    _emit(_csv(header_lines(cfg, extra), ("k", "n"), zip(pair.nk.r, pair.nk.values)),
          f"{prefix}_k.csv")


def cmd_measures(args) -> None:
    cfg = _config(args)
    (N,) = _n_values(cfg, single=True)
    pair, _ = system_density(setup_from_config(cfg), N)
    m = measure_set(pair)
    if cfg.output_format == "json":
        _emit(_json(cfg, {"system": cfg.system, "N": N, **m.as_dict()}), args.out)
    else:
        row = (cfg.system, N) + tuple(getattr(m, f) for f in MeasureSet.FIELDS)
        _emit(_csv(header_lines(cfg), SCAN_COLUMNS, [row]), args.out)


def cmd_scan(args) -> None:
    cfg = _config(args)
    n_values = _n_values(cfg, single=False)
    result = scan(setup_from_config(cfg), n_values, jobs=cfg.jobs)
    rows = [(cfg.system, N) + tuple(getattr(m, f) for f in MeasureSet.FIELDS)
            for N, m in result.rows]
    if cfg.output_format == "json":
        _emit(_json(cfg, [dict(zip(SCAN_COLUMNS, r)) for r in rows]), args.out)
    else:
        _emit(_csv(header_lines(cfg), SCAN_COLUMNS, rows), args.out)
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, series in figure_series(result).items():
            column = "S_E" if name in ("fig1", "fig3") else "S_I"
            _emit(_csv(header_lines(cfg), ("N", column), series),
                  str(outdir / f"{name}_{cfg.system}.csv"))


def read_scan_csv(path: str) -> tuple[str | None, list[dict]]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError("cli.fit", f"cannot read {path}: {exc}") from None
    body = [ln for ln in lines if ln.strip() and not ln.startswith("#")]
    if not body:
        raise InputError("cli.fit", f"{path} holds no data")
    columns = body[0].split(",")
    rows = [dict(zip(columns, ln.split(","))) for ln in body[1:]]
    system = rows[0].get("system") if rows else None
    return system, rows


def cmd_fit(args) -> None:
    system, rows = read_scan_csv(args.infile)
    if not rows or args.column not in rows[0] or "N" not in rows[0]:
        raise InputError("cli.fit", f"column {args.column!r} or N missing in {args.infile}")
    try:
        points = [(float(r["N"]), float(r[args.column])) for r in rows]
    except ValueError as exc:
        raise InputError("cli.fit", f"non-numeric entry in {args.infile}: {exc}") from None
    res = fit(args.model, points)
    out = {"model": res.model, "column": args.column, **res.coefficients,
           "r_squared": res.r_squared}
    if res.model == "linear" and args.column == "S_E" and system in REFERENCE_SLOPES:
        out["ratio_to_reference_slope"] = res.coefficients["c"] / REFERENCE_SLOPES[system]
    if args.format == "json":
        _emit(_json(None, {**out, "residuals": list(res.residuals)}), args.out)
    else:
        extra = {"input": args.infile}
        _emit(_csv(header_lines(None, extra), tuple(out), [tuple(out.values())]), args.out)


COMMANDS = {"gaussian": cmd_gaussian, "spectrum": cmd_spectrum, "density": cmd_density,
            "measures": cmd_measures, "scan": cmd_scan, "fit": cmd_fit}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except InfodensError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
