"""Config-driven command line: single runs, parameter sweeps, self-check.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 failed self-check, 2 configuration error, 3 numerical guard.
"""

from __future__ import annotations

import argparse
import copy
import csv
import itertools
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import __version__
from .absorption import AbsorptionAmplitudes, InitialStateKind, Scenario
from .checks import run_all_checks
from .errors import OutOfRangeError, SimulationError
from .recoil import GaussianRecoilModel, RecoilOverlaps, gaussian_recoil_overlap
from .report import REPORT_FIELDS, evaluate_scenario

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

OUTPUT_FORMATS = ("table", "csv", "json-lines")
#: accepted load-time residual of |absorb|^2 + |stay|^2 from 1; accepted
#: pairs are rescaled exactly onto the unit circle before use
CONFIG_NORM_TOLERANCE = 1e-9


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field."""


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}")


def _expect_mapping(value: Any, path: str) -> Mapping:
    if not isinstance(value, Mapping):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _check_keys(data: Mapping, allowed: set[str], path: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        _fail(path, f"unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    return float(value)


def _amplitude(value: Any, path: str, allow_auto: bool) -> complex | str:
    if allow_auto and value == "auto":
        return "auto"
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            _fail(path, "complex amplitude must be a [re, im] pair")
        return complex(_number(value[0], path), _number(value[1], path))
    return complex(_number(value, path))


def _amplitude_pair(
    scen: Mapping, absorb_key: str, stay_key: str
) -> tuple[complex, complex]:
    prefix = "scenario."
    absorb = _amplitude(scen[absorb_key], prefix + absorb_key, allow_auto=False)
    stay = _amplitude(scen[stay_key], prefix + stay_key, allow_auto=True)
    if stay == "auto":
        if abs(absorb) > 1.0:
            _fail(prefix + absorb_key, f"|{absorb_key}| must be <= 1 when {stay_key} is auto")
        stay = complex(np.sqrt(1.0 - abs(absorb) ** 2))
    total = abs(absorb) ** 2 + abs(stay) ** 2
    if abs(total - 1.0) > CONFIG_NORM_TOLERANCE:
        _fail(
            f"{prefix}{absorb_key}/{prefix}{stay_key}",
            f"|{absorb_key}|^2 + |{stay_key}|^2 = 1 violated (got {total!r})",
        )
    scale = np.sqrt(total)
    return absorb / scale, stay / scale


def _parse_overlaps(data: Any) -> RecoilOverlaps:
    overlaps = _expect_mapping(data, "scenario.overlaps")
    keys = set(overlaps)
    if keys == {"a", "c"}:
        try:
            return RecoilOverlaps.from_scalars(
                _number(overlaps["a"], "scenario.overlaps.a"),
                _number(overlaps["c"], "scenario.overlaps.c"),
            )
        except OutOfRangeError as exc:
            _fail("scenario.overlaps", str(exc))
    if keys == {"sigma_x", "k_recoil"}:
        try:
            model = GaussianRecoilModel(
                sigma_x=_number(overlaps["sigma_x"], "scenario.overlaps.sigma_x"),
                k_recoil=_number(overlaps["k_recoil"], "scenario.overlaps.k_recoil"),
            )
        except ValueError as exc:
            _fail("scenario.overlaps", str(exc))
        overlap = gaussian_recoil_overlap(model)
        return RecoilOverlaps.from_scalars(overlap, overlap)
    _fail(
        "scenario.overlaps",
        "give exactly one overlap form: {a, c} or {sigma_x, k_recoil}",
    )


def _parse_scenario(data: Any) -> Scenario:
    scen = _expect_mapping(data, "scenario")
    _check_keys(scen, {"kind", "alpha", "beta", "gamma", "delta", "overlaps"}, "scenario")
    for key in ("kind", "alpha", "beta", "gamma", "delta", "overlaps"):
        if key not in scen:
            _fail("scenario", f"missing required key {key!r}")
    try:
        kind = InitialStateKind(scen["kind"])
    except ValueError:
        _fail(
            "scenario.kind",
            f"{scen['kind']!r} is not one of {[k.value for k in InitialStateKind]}",
        )
    alpha, beta = _amplitude_pair(scen, "alpha", "beta")
    gamma, delta = _amplitude_pair(scen, "gamma", "delta")
    return Scenario(
        kind=kind,
        amplitudes=AbsorptionAmplitudes(alpha=alpha, beta=beta, gamma=gamma, delta=delta),
        overlaps=_parse_overlaps(scen["overlaps"]),
    )


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    output: str = "table"
    product_tolerance: float = 1e-8

    @classmethod
    def from_dict(cls, data: Any) -> "RunConfig":
        config = _expect_mapping(data, "config")
        _check_keys(config, {"scenario", "output", "product_tolerance"}, "config")
        if "scenario" not in config:
            _fail("config", "missing required key 'scenario'")
        output = config.get("output", "table")
        if output not in OUTPUT_FORMATS:
            _fail("output", f"{output!r} is not one of {list(OUTPUT_FORMATS)}")
        tolerance = config.get("product_tolerance", 1e-8)
        tolerance = _number(tolerance, "product_tolerance")
        if not 0.0 < tolerance < 1.0:
            _fail("product_tolerance", f"must lie in (0, 1), got {tolerance!r}")
        return cls(
            scenario=_parse_scenario(config["scenario"]),
            output=output,
            product_tolerance=tolerance,
        )


@dataclass(frozen=True)
class SweepAxis:
    path: str
    start: float
    stop: float
    count: int


@dataclass(frozen=True)
class SweepConfig:
    base_raw: dict
    base: RunConfig
    axes: tuple[SweepAxis, ...]

    @classmethod
    def from_dict(cls, data: Any) -> "SweepConfig":
        config = _expect_mapping(data, "config")
        _check_keys(config, {"base", "axes"}, "config")
        for key in ("base", "axes"):
            if key not in config:
                _fail("config", f"missing required key {key!r}")
        base_raw = _expect_mapping(config["base"], "base")
        base = RunConfig.from_dict(base_raw)
        axes_raw = config["axes"]
        if not isinstance(axes_raw, list) or not axes_raw:
            _fail("axes", "expected a non-empty list of axis objects")
        axes = []
        for index, axis_data in enumerate(axes_raw):
            where = f"axes[{index}]"
            axis = _expect_mapping(axis_data, where)
            _check_keys(axis, {"path", "start", "stop", "count"}, where)
            for key in ("path", "start", "stop", "count"):
                if key not in axis:
                    _fail(where, f"missing required key {key!r}")
            path = axis["path"]
            if not isinstance(path, str) or not path:
                _fail(f"{where}.path", "expected a non-empty dotted path string")
            count = axis["count"]
            if isinstance(count, bool) or not isinstance(count, int) or count < 2:
                _fail(f"{where}.count", f"count must be an integer >= 2, got {count!r}")
            _resolve_leaf(base_raw, path, where)
            axes.append(
                SweepAxis(
                    path=path,
                    start=_number(axis["start"], f"{where}.start"),
                    stop=_number(axis["stop"], f"{where}.stop"),
                    count=count,
                )
            )
        return cls(base_raw=dict(base_raw), base=base, axes=tuple(axes))


def _resolve_leaf(base: Mapping, path: str, where: str) -> None:
    node: Any = base
    for part in path.split("."):
        if not isinstance(node, Mapping) or part not in node:
            _fail(f"{where}.path", f"{path!r} does not exist in the base config")
        node = node[part]


def _set_leaf(data: dict, path: str, value: float) -> None:
    parts = path.split(".")
    node = data
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


def _load_config(path_text: str) -> Any:
    path = Path(path_text)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


# ---------------------------------------------------------------------------
# output


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_csv(records: list[dict], coordinate_names: Sequence[str], out) -> None:
    out.write(f"# pairabsorb {__version__} scenario-report/v1\n")
    writer = csv.writer(out, lineterminator="\n")
    header = list(coordinate_names) + list(REPORT_FIELDS) + ["error"]
    writer.writerow(header)
    for record in records:
        coords = record.get("coordinates", {})
        row = [_cell(coords.get(name)) for name in coordinate_names]
        if record["record"] == "error":
            row += [""] * len(REPORT_FIELDS) + [record["message"]]
        else:
            row += [_cell(record[field]) for field in REPORT_FIELDS] + [""]
        writer.writerow(row)


def _emit_json_lines(records: list[dict], out) -> None:
    meta = {
        "record": "meta",
        "format": "scenario-report/v1",
        "tool": "pairabsorb",
        "version": __version__,
    }
    out.write(json.dumps(meta, separators=(",", ":")) + "\n")
    for record in records:
        out.write(json.dumps(record, separators=(",", ":")) + "\n")


def _emit_table(records: list[dict], coordinate_names: Sequence[str], out) -> None:
    def fmt(value: Any) -> str:
        if value is None:
            return "-"
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return f"{value:.12g}"
        return str(value)

    if not coordinate_names and len(records) == 1 and records[0]["record"] == "scenario":
        record = records[0]
        width = max(len(field) for field in REPORT_FIELDS)
        for field in REPORT_FIELDS:
            out.write(f"{field:<{width}}  {fmt(record[field])}\n")
        return
    header = list(coordinate_names) + list(REPORT_FIELDS) + ["error"]
    rows = []
    for record in records:
        coords = record.get("coordinates", {})
        row = [fmt(coords.get(name)) for name in coordinate_names]
        if record["record"] == "error":
            row += ["-"] * len(REPORT_FIELDS) + [record["message"]]
        else:
            row += [fmt(record[field]) for field in REPORT_FIELDS] + ["-"]
        rows.append(row)
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _emit(records: list[dict], output: str, coordinate_names: Sequence[str] = ()) -> None:
    if output == "csv":
        _emit_csv(records, coordinate_names, sys.stdout)
    elif output == "json-lines":
        _emit_json_lines(records, sys.stdout)
    else:
        _emit_table(records, coordinate_names, sys.stdout)


# ---------------------------------------------------------------------------
# subcommands


def _effective(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.output:
        config = replace(config, output=args.output)
    if args.tolerance is not None:
        if not 0.0 < args.tolerance < 1.0:
            raise ConfigError(f"--tolerance: must lie in (0, 1), got {args.tolerance!r}")
        config = replace(config, product_tolerance=args.tolerance)
    return config


def _cmd_run(args: argparse.Namespace) -> int:
    config = _effective(RunConfig.from_dict(_load_config(args.config)), args)
    report = evaluate_scenario(config.scenario, product_tol=config.product_tolerance)
    if report.beyond_linear_regime and not args.quiet:
        print(
            "note: excitation probability exceeds the low-intensity bound; "
            "outcome counting is advisory there",
            file=sys.stderr,
        )
    _emit([report.to_record()], config.output)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    sweep = SweepConfig.from_dict(_load_config(args.config))
    config = _effective(sweep.base, args)
    grids = [np.linspace(axis.start, axis.stop, axis.count) for axis in sweep.axes]
    names = [axis.path for axis in sweep.axes]
    records = []
    failures = 0
    for values in itertools.product(*grids):
        coordinates = {name: float(v) for name, v in zip(names, values)}
        point = copy.deepcopy(sweep.base_raw)
        for name, value in coordinates.items():
            _set_leaf(point, name, value)
        try:
            point_config = RunConfig.from_dict(point)
            report = evaluate_scenario(
                point_config.scenario, product_tol=config.product_tolerance
            )
            records.append(report.to_record(coordinates=coordinates))
        except (ConfigError, SimulationError) as exc:
            failures += 1
            records.append(
                {"record": "error", "coordinates": coordinates, "message": str(exc)}
            )
    _emit(records, config.output, coordinate_names=names)
    if failures and not args.quiet:
        print(f"note: {failures} of {len(records)} sweep points failed", file=sys.stderr)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    results = run_all_checks()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.name}: {result.measured} (expected {result.expected})")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairabsorb",
        description="Two-atom absorption and hyperentanglement simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, needs_config in (
        ("run", _cmd_run, True),
        ("sweep", _cmd_sweep, True),
        ("check", _cmd_check, False),
    ):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("config", help="path to a JSON config file")
            p.add_argument("--output", choices=OUTPUT_FORMATS, default=None)
            p.add_argument(
                "--tolerance",
                type=float,
                default=None,
                help="override the product-test tolerance",
            )
        p.add_argument("--quiet", action="store_true", help="suppress stderr notes")
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
