"""Command-line front end: verification suites, grid BVP runs, plot tables.

Exit codes: 0 all asserted checks hold, 1 an asserted check failed,
2 invalid configuration, 3 internal numerical failure (named in the message).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import __version__
from . import bvp as bvp_mod
from .geometry import ExponentContext
from .serialize import dump_report, fmt, load_report, write_csv
from .suites import CheckFailure, SUITE_NAMES, run_checks


class ConfigError(ValueError):
    """Invalid or inconsistent configuration document."""


@dataclass
class SuiteConfig:
    suite: str
    seed: int = 1
    dims: list = field(default_factory=lambda: [4, 6, 8])
    p_values: list = field(default_factory=lambda: [2.0, 2.5])
    tolerances: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    out: str = "."

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a table of settings")
        suite = data.get("suite")
        if suite not in SUITE_NAMES:
            raise ConfigError(f"suite must be one of {SUITE_NAMES}, got {suite!r}")
        seed = data.get("seed", 1)
        if not isinstance(seed, int) or seed <= 0:
            raise ConfigError("seed must be a positive integer")
        dims = list(data.get("dims", [4, 6, 8]))
        if not dims or any(not isinstance(n, int) or n <= 0 for n in dims):
            raise ConfigError("dims must be positive integers")
        p_values = [float(p) for p in data.get("p_values", [2.0, 2.5])]
        if any(not 1.0 < p < math.inf for p in p_values):
            raise ConfigError("every exponent p must lie in (1, inf)")
        tolerances = dict(data.get("tolerances", {}))
        counts = {k: int(v) for k, v in dict(data.get("counts", {})).items()}
        if any(v <= 0 for v in counts.values()):
            raise ConfigError("battery counts must be positive")
        return cls(suite=suite, seed=seed, dims=dims, p_values=p_values,
                   tolerances=tolerances, counts=counts, out=data.get("out", "."))

    def echo(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "dims": self.dims,
            "p_values": [fmt(p) for p in self.p_values],
            "tolerances": {k: fmt(v) for k, v in sorted(self.tolerances.items())},
            "counts": dict(sorted(self.counts.items())),
        }


def load_config(path: str) -> dict:
    file_path = Path(path)
    if not file_path.exists():
        raise ConfigError(f"config file not found: {path}")
    if file_path.suffix == ".toml":
        return tomllib.loads(file_path.read_text())
    if file_path.suffix == ".json":
        return json.loads(file_path.read_text())
    raise ConfigError("config files must end in .toml or .json")


def run_suite(config: SuiteConfig, out_dir: Path) -> dict:
    """Execute the named battery and write the report plus any CSV tables."""
    records, series = run_checks(config)
    summary = {
        "total": len(records),
        "asserted": sum(1 for r in records if r["asserted"]),
        "passed": sum(1 for r in records if r["asserted"] and r["holds"]),
        "failed": sum(1 for r in records if r["asserted"] and not r["holds"]),
        "report_only": sum(1 for r in records if not r["asserted"]),
    }
    report = {
        "suite": config.suite,
        "tool_version": __version__,
        "config": config.echo(),
        "records": records,
        "summary": summary,
        "series": series,
        "sign_convention": "resolvent work places the parameter as (Q + lambda)",
        "notes": [
            "geometry constants (B-condition, R-bounds) are sampled estimates "
            "over the supplied systems only",
        ],
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    dump_report(report, out_dir / "report.json")
    for kind, table in series.items():
        write_csv(out_dir / f"{config.suite}_{kind}.csv", table["header"], table["rows"])
    return report


def _scalar_coefficient(spec) -> object:
    if isinstance(spec, (int, float)):
        return lambda x, v=complex(spec): v
    kind = spec.get("kind", "constant")
    if kind == "constant":
        value = spec["value"]
        v = complex(value[0], value[1]) if isinstance(value, list) else complex(value)
        return lambda x, v=v: v
    if kind == "rotated":
        magnitude = float(spec.get("magnitude", 1.0))
        angle = float(spec.get("angle", 0.0))
        return lambda x, m=magnitude, t=angle: -m * np.exp(1j * t)
    if kind == "tabulated":
        nodes = np.asarray(spec["nodes"], dtype=float)
        values = np.asarray(spec["values"], dtype=float)
        if nodes.size != values.size or nodes.size < 2:
            raise ConfigError("tabulated coefficients need matching nodes/values")
        return lambda x, n=nodes, v=values: complex(np.interp(x, n, v))
    raise ConfigError(f"unknown scalar coefficient kind {kind!r}")


def _matrix_coefficient(spec, d: int) -> object:
    if isinstance(spec, (int, float)):
        return lambda x, v=complex(spec): v * np.eye(d, dtype=complex)
    kind = spec.get("kind", "constant")
    if kind == "constant":
        value = complex(spec.get("value", 0.0))
        return lambda x, v=value: v * np.eye(d, dtype=complex)
    if kind == "affine":
        base = complex(spec.get("value", 1.0))
        slope = complex(spec.get("slope", 0.0))
        return lambda x, b=base, s=slope: (b + s * x) * np.eye(d, dtype=complex)
    if kind == "diag_power":
        nu = float(spec.get("nu", 1.0))
        scale = float(spec.get("scale", 1.0))
        ladder = scale * np.arange(1.0, d + 1.0) ** (1.0 / nu)
        return lambda x, l=ladder: np.diag(l).astype(complex)
    if kind == "tabulated":
        nodes = np.asarray(spec["nodes"], dtype=float)
        values = np.asarray(spec["values"], dtype=float)
        if nodes.size != values.size or nodes.size < 2:
            raise ConfigError("tabulated coefficients need matching nodes/values")
        return lambda x, n=nodes, v=values: float(np.interp(x, n, v)) * np.eye(d, dtype=complex)
    raise ConfigError(f"unknown matrix coefficient kind {kind!r}")


def _conditions(spec) -> tuple:
    if spec in (None, "dirichlet"):
        return bvp_mod.dirichlet_conditions()
    if spec == "neumann":
        return bvp_mod.neumann_conditions()
    if isinstance(spec, dict) and spec.get("kind") == "nonlocal":
        delta = float(spec.get("delta", 0.0))
        point = float(spec.get("point", 0.5))
        first = bvp_mod.BoundaryFunctional(
            0, (1.0,), (0.0,), (bvp_mod.InteriorTerm(point, (-delta,)),))
        second = bvp_mod.BoundaryFunctional(0, (0.0,), (1.0,))
        return (first, second)
    raise ConfigError(f"unknown boundary condition spec {spec!r}")


def build_problem(model: dict) -> bvp_mod.BvpProblem:
    try:
        d = int(model.get("d", 1))
        p = float(model.get("p", 2.0))
        problem = bvp_mod.BvpProblem(
            a=_scalar_coefficient(model.get("a", -1.0)),
            A_fn=_matrix_coefficient(model.get("A", 1.0), d),
            B_fn=_matrix_coefficient(model.get("B", 0.0), d),
            conditions=_conditions(model.get("conditions", "dirichlet")),
            weight_exponent=float(model.get("gamma", 0.0)),
            context=ExponentContext(p),
            d=d,
            length=float(model.get("length", 1.0)),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model: {exc}") from exc
    return problem


def run_bvp_experiment(model: dict, grid, out_dir: Path, seed: int = 1) -> dict:
    problem = build_problem(model)
    bvp_mod.validate_problem(problem)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    errors = []
    target = None
    for n in grid:
        op = bvp_mod.discretize(problem, n)
        eigenvalues = np.sort_complex(np.linalg.eigvals(op.matrix))
        write_csv(out_dir / f"spectrum_n{n}.csv", ["re", "im", "multiplicity"],
                  [[fmt(ev.real), fmt(ev.imag), "1"] for ev in eigenvalues])
        lowest = eigenvalues[np.argsort(eigenvalues.real)[0]]
        rows.append({"n": n, "lowest_re": fmt(lowest.real), "lowest_im": fmt(lowest.imag)})
        if problem.d == 1 and abs(problem.a(0.5) + 1.0) < 1e-12:
            a_val = complex(problem.A_fn(0.5)[0, 0])
            target = math.pi ** 2 / problem.length ** 2 + a_val.real
            errors.append(abs(lowest.real - target))
    report = {
        "tool_version": __version__,
        "model": model,
        "grid": list(grid),
        "seed": seed,
        "lowest_eigenvalues": rows,
        "sign_convention": "resolvent work places the parameter as (Q + lambda)",
    }
    if target is not None and len(errors) >= 2:
        steps = [1.0 / (n + 1) for n in grid]
        slope = float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
        report["reference_value"] = fmt(target)
        report["observed_order"] = fmt(slope)
    dump_report(report, out_dir / "bvp_report.json")
    return report


PLOT_KINDS = ("snumbers", "rayscan", "spectrum", "coercive")


def emit_plot_data(report: dict, kind: str, out_dir: Path) -> Path:
    if kind not in PLOT_KINDS:
        raise ConfigError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    series = report.get("series", {})
    if kind not in series:
        raise ConfigError(f"report has no {kind!r} series")
    table = series[kind]
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{kind}.csv"
    write_csv(path, table["header"], table["rows"])
    return path


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rootspan",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--config", default=None)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--out", default=".")

    bvp_parser = sub.add_parser("bvp", help="grid BVP experiments")
    bvp_sub = bvp_parser.add_subparsers(dest="bvp_command", required=True)
    bvp_run = bvp_sub.add_parser("run")
    bvp_run.add_argument("--config", required=True)
    bvp_run.add_argument("--n", default="16,32,64",
                         help="comma-separated interior grid sizes")
    bvp_run.add_argument("--out", default=".")

    plot = sub.add_parser("plot", help="emit plot-ready CSV from a report")
    plot.add_argument("--report", required=True)
    plot.add_argument("--kind", required=True)
    plot.add_argument("--out", default=".")

    matrix = sub.add_parser("matrix", help="single-matrix report from a CSV file")
    matrix.add_argument("--csv", required=True,
                        help="square matrix, rows of alternating re,im columns")
    matrix.add_argument("--p", type=float, default=2.0)
    matrix.add_argument("--out", default=".")
    return parser


def run_matrix_report(csv_path: str, p: float, out_dir: Path) -> dict:
    from .schatten import OperatorMatrix, lp_operator_norm_bounds, weyl_check

    try:
        context = ExponentContext(p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        operator = OperatorMatrix.from_csv(csv_path, context)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read matrix CSV: {exc}") from exc
    weyl = weyl_check(operator)
    bracket = lp_operator_norm_bounds(operator)
    eigenvalues = np.linalg.eigvals(operator.entries)
    report = {
        "tool_version": __version__,
        "n": operator.n,
        "p": fmt(p),
        "weyl": {"lhs": fmt(weyl.lhs), "rhs": fmt(weyl.rhs), "holds": weyl.holds},
        "operator_norm_bracket": {"lower": fmt(bracket.lower), "upper": fmt(bracket.upper)},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    dump_report(report, out_dir / "matrix_report.json")
    write_csv(out_dir / "matrix_spectrum.csv", ["re", "im", "multiplicity"],
              [[fmt(ev.real), fmt(ev.imag), "1"] for ev in np.sort_complex(eigenvalues)])
    return report


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            data = load_config(args.config) if args.config else {}
            data.setdefault("suite", args.suite)
            if data["suite"] != args.suite:
                raise ConfigError("config suite does not match the command line")
            if args.seed is not None:
                data["seed"] = args.seed
            config = SuiteConfig.from_dict(data)
            try:
                report = run_suite(config, Path(args.out))
            except ConfigError:
                raise
            except CheckFailure as exc:
                print(f"numerical failure in {exc.check_name}: {exc}", file=sys.stderr)
                return 3
            except Exception as exc:  # failure outside any single check
                print(f"numerical failure in suite {config.suite}: {exc}",
                      file=sys.stderr)
                return 3
            failed = [r["name"] for r in report["records"]
                      if r["asserted"] and not r["holds"]]
            for record in report["records"]:
                status = "PASS" if record["holds"] else "FAIL"
                tag = "" if record["asserted"] else " (report-only)"
                print(f"{status} {record['name']}{tag}")
            if failed:
                print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
                return 1
            return 0
        if args.command == "bvp":
            model = load_config(args.config)
            try:
                grid = [int(x) for x in str(args.n).split(",") if x]
            except ValueError as exc:
                raise ConfigError(f"bad grid list {args.n!r}") from exc
            if not grid or any(n < 8 for n in grid):
                raise ConfigError("grid sizes must be at least 8")
            try:
                run_bvp_experiment(model, grid, Path(args.out))
            except ConfigError:
                raise
            except Exception as exc:
                print(f"numerical failure in bvp run: {exc}", file=sys.stderr)
                return 3
            return 0
        if args.command == "plot":
            report = load_report(args.report)
            path = emit_plot_data(report, args.kind, Path(args.out))
            print(str(path))
            return 0
        if args.command == "matrix":
            try:
                report = run_matrix_report(args.csv, args.p, Path(args.out))
            except ConfigError:
                raise
            except Exception as exc:
                print(f"numerical failure in matrix report: {exc}", file=sys.stderr)
                return 3
            print("PASS weyl" if report["weyl"]["holds"] else "FAIL weyl")
            return 0 if report["weyl"]["holds"] else 1
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable command")


def entrypoint() -> None:
    sys.exit(main())
