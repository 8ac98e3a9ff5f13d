"""Batch front-end: declare fields and cases in a TOML file, run verification
suites, and emit CSV or JSON reports.

The config format is strict: unknown keys anywhere are hard errors, since a
silent typo (say, "scal" for "scale") would invalidate the mathematical
claims of a run. Identical config and seed produce byte-identical output.

Exit codes: 0 when every admissible case produced a finite (or vacuous)
ratio, 2 when any right-hand side diverged, 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigError, DivergentRhs, GrowthLabError, InadmissiblePQ, NonIntegrable
from .exponents import Exponent, admissible_interval
from .fields import FIELD_REGISTRY, make_field
from .grids import Domain, PolarGrid
from .hardy import ok_criterion_ex
from .norms import Scale
from .polynomials import PiStrategy
from .verify import CSV_COLUMNS, InequalityCase, Report, scaling_experiment, verify_case

__all__ = ["main", "load_config", "SuiteConfig"]

_GRID_KEYS = {"r_max", "panels", "points_per_panel", "angular_factor", "seed", "r_min"}
_OUTPUT_KEYS = {"format", "path"}
_FIELD_KEYS = {"name", "label", "params"}
_CASE_KEYS = {"N", "k", "j", "s", "p", "q", "scale", "domain", "strategy", "x0", "rho"}
_SCAN_KEYS = {"param", "values"}
_TOP_KEYS = {"grid", "output", "fields", "cases", "scan"}


@dataclass
class SuiteConfig:
    fields: list[dict]
    cases: list[InequalityCase]
    grid: dict = dc_field(default_factory=dict)
    output: dict = dc_field(default_factory=dict)
    scan: dict = dc_field(default_factory=dict)


def _check_keys(table: dict, allowed: set, where: str):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_case(raw: dict, index: int) -> InequalityCase:
    where = f"cases[{index}]"
    _check_keys(raw, _CASE_KEYS, where)
    for key in ("N", "k", "j", "s", "p", "q"):
        if key not in raw:
            raise ConfigError(f"{where}: missing required key '{key}'")
    strategy_kind = raw.get("strategy", "auto")
    if strategy_kind == "auto":
        strategy = PiStrategy.auto()
    elif strategy_kind == "ball":
        strategy = PiStrategy.ball(raw.get("x0"), float(raw.get("rho", 1.0)))
    elif strategy_kind == "taylor":
        strategy = PiStrategy.taylor(raw.get("x0"))
    else:
        raise ConfigError(f"{where}: unknown strategy '{strategy_kind}'")
    try:
        return InequalityCase(
            dim=int(raw["N"]),
            k=int(raw["k"]),
            j=int(raw["j"]),
            s=float(raw["s"]),
            p=Exponent(raw["p"]),
            q=Exponent(raw["q"]),
            scale=Scale(raw.get("scale", "shifted")),
            domain=Domain(raw.get("domain", "full")),
            strategy=strategy,
        )
    except (GrowthLabError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def load_config(path: str | Path) -> SuiteConfig:
    """Parse and validate a suite configuration; raises ConfigError."""
    try:
        data = tomllib.loads(Path(path).read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    _check_keys(data, _TOP_KEYS, "top level")

    grid = dict(data.get("grid", {}))
    _check_keys(grid, _GRID_KEYS, "[grid]")
    output = dict(data.get("output", {}))
    _check_keys(output, _OUTPUT_KEYS, "[output]")
    if output.get("format", "csv") not in ("csv", "json"):
        raise ConfigError("[output].format must be 'csv' or 'json'")
    scan = dict(data.get("scan", {}))
    _check_keys(scan, _SCAN_KEYS, "[scan]")

    raw_fields = data.get("fields", [])
    if not raw_fields:
        raise ConfigError("config declares no [[fields]]")
    fields = []
    for i, raw in enumerate(raw_fields):
        where = f"fields[{i}]"
        _check_keys(raw, _FIELD_KEYS, where)
        name = raw.get("name")
        if name not in FIELD_REGISTRY:
            known = ", ".join(sorted(FIELD_REGISTRY))
            raise ConfigError(f"{where}: unknown field family '{name}' (known: {known})")
        fields.append({
            "name": name,
            "label": raw.get("label", name),
            "params": dict(raw.get("params", {})),
        })

    raw_cases = data.get("cases", [])
    if not raw_cases:
        raise ConfigError("config declares no [[cases]]")
    cases = [_parse_case(raw, i) for i, raw in enumerate(raw_cases)]
    return SuiteConfig(fields=fields, cases=cases, grid=grid, output=output, scan=scan)


def _build_grid(case: InequalityCase, overrides: dict, seed: int | None) -> PolarGrid:
    kwargs = dict(overrides)
    if seed is not None:
        kwargs["seed"] = seed
    return PolarGrid.build(case.dim, domain=case.domain, **kwargs)


def _instantiate(spec: dict, dim: int):
    try:
        u = make_field(spec["name"], dim, **spec["params"])
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"field '{spec['label']}': {exc}") from exc
    u.name = spec["label"]
    return u


def _run_one(spec: dict, case: InequalityCase, grid: PolarGrid) -> Report:
    u = _instantiate(spec, case.dim)
    try:
        return verify_case(u, case, grid)
    except (DivergentRhs, NonIntegrable) as exc:
        return Report(case=case, field_name=spec["label"], lhs=math.nan, rhs=math.inf,
                      ratio=None, verdict="divergent-rhs", diagnostics={"error": str(exc)})


def _emit(reports: list[Report], fmt: str, path: str | None, extra_cols=None) -> str:
    if fmt == "json":
        payload = {"reports": [r.to_json_dict() for r in reports]}
        if extra_cols:
            for rep, extras in zip(payload["reports"], extra_cols):
                rep.update(extras)
        text = json.dumps(payload, indent=2, allow_nan=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = list(CSV_COLUMNS)
        if extra_cols:
            header = list(extra_cols[0].keys()) + header
        writer.writerow(header)
        for i, rep in enumerate(reports):
            row = rep.csv_row()
            if extra_cols:
                row = [repr(v) if isinstance(v, float) else str(v)
                       for v in extra_cols[i].values()] + row
            writer.writerow(row)
        text = buf.getvalue()
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _exit_code(reports: list[Report]) -> int:
    return 2 if any(r.verdict == "divergent-rhs" for r in reports) else 0


def cmd_verify(args) -> int:
    config = load_config(args.config)
    fmt = args.format or config.output.get("format", "csv")
    path = args.out or config.output.get("path")
    jobs = max(1, args.jobs)

    tasks = [(spec, case) for case in config.cases for spec in config.fields]
    grids = {}
    for _, case in tasks:
        key = (case.dim, case.domain)
        if key not in grids:
            grids[key] = _build_grid(case, config.grid, args.seed)

    def run(task):
        spec, case = task
        return _run_one(spec, case, grids[(case.dim, case.domain)])

    if jobs == 1:
        reports = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run, tasks))
    _emit(reports, fmt, path)
    return _exit_code(reports)


def _scan_values(args, config: SuiteConfig) -> list[float]:
    if args.range:
        try:
            lo, hi, count = args.range.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError as exc:
            raise ConfigError(f"--range must be 'start:stop:count', got '{args.range}'") from exc
        if count < 2:
            raise ConfigError("--range needs at least 2 points")
        return [lo + (hi - lo) * i / (count - 1) for i in range(count)]
    values = config.scan.get("values")
    if not values:
        raise ConfigError("no scan values: pass --range or set [scan].values")
    return [float(v) for v in values]


def cmd_scan(args) -> int:
    config = load_config(args.config)
    param = args.param or config.scan.get("param")
    if param not in ("s", "q", "lambda"):
        raise ConfigError("scan parameter must be one of: s, q, lambda")
    values = _scan_values(args, config)
    fmt = args.format or config.output.get("format", "csv")
    path = args.out or config.output.get("path")

    reports: list[Report] = []
    extras: list[dict] = []
    for case in config.cases:
        grid = _build_grid(case, config.grid, args.seed)
        for spec in config.fields:
            for value in values:
                if param == "lambda":
                    u = _instantiate(spec, case.dim)
                    try:
                        reps = scaling_experiment(u, case, [value], grid)
                        rep = reps[0]
                        rep.field_name = spec["label"]
                    except (DivergentRhs, NonIntegrable) as exc:
                        rep = Report(case=case, field_name=spec["label"], lhs=math.nan,
                                     rhs=math.inf, ratio=None, verdict="divergent-rhs",
                                     diagnostics={"error": str(exc)})
                else:
                    try:
                        swapped = replace(case, **{("s" if param == "s" else "q"):
                                                   (value if param == "s" else Exponent(value))})
                    except InadmissiblePQ:
                        rep = Report(case=case, field_name=spec["label"], lhs=math.nan,
                                     rhs=math.nan, ratio=None, verdict="q-outside-interval")
                        reports.append(rep)
                        extras.append({"param": param, "value": value})
                        continue
                    except GrowthLabError as exc:
                        raise ConfigError(f"scan value {value}: {exc}") from exc
                    rep = _run_one(spec, swapped, grid)
                reports.append(rep)
                extras.append({"param": param, "value": value})
    _emit(reports, fmt, path, extras)
    return _exit_code(reports)


def cmd_criterion(args) -> int:
    q = Exponent(args.q)
    sup, verdict, (xi, a_vals, b_vals) = ok_criterion_ex(args.s, args.p, q, args.N)
    interval = admissible_interval(1, Exponent(args.p), args.N)
    member = interval.contains(q)
    out = sys.stdout
    out.write("xi,A,B,AB\n")
    step = max(1, len(xi) // 24)
    for i in range(0, len(xi), step):
        out.write(f"{xi[i]:.6e},{a_vals[i]:.6e},{b_vals[i]:.6e},{a_vals[i] * b_vals[i]:.6e}\n")
    out.write(f"sup_estimate,{sup!r}\n")
    out.write(f"verdict,{verdict}\n")
    out.write(f"interval,{interval}\n")
    out.write(f"q_in_interval,{member}\n")
    out.write(f"agreement,{(verdict == 'finite') == member}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthlab",
        description="Numerical verification of weighted growth-transfer inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML suite configuration")
    common.add_argument("--jobs", type=int, default=1, help="worker pool size")
    common.add_argument("--seed", type=int, default=None, help="sphere Monte Carlo seed")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    p_verify = sub.add_parser("verify", parents=[common], help="run all (field, case) pairs")
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("scan", parents=[common], help="sweep one parameter")
    p_scan.add_argument("--param", choices=("s", "q", "lambda"), default=None)
    p_scan.add_argument("--range", default=None, help="start:stop:count")
    p_scan.set_defaults(func=cmd_scan)

    p_crit = sub.add_parser("criterion", help="print the two-weight A*B profile")
    p_crit.add_argument("--s", type=float, required=True)
    p_crit.add_argument("--p", type=float, required=True)
    p_crit.add_argument("--q", required=True)
    p_crit.add_argument("--N", type=int, required=True)
    p_crit.set_defaults(func=cmd_criterion)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
