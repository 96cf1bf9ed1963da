"""Command-line front end.

    polymult <command> --input SYSTEM.json [options]

Exit codes: 0 success, 1 inadmissible system, 2 numerical failure,
3 resource limit, 4 I/O or parse error.  Errors print one line
``polymult: error: <code>: <reason>`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from . import _io
from .distribution import DEFAULT_POINT_CAP, build_pmf, sample
from .errors import (
    DomainError,
    InadmissibleSystemError,
    NearSingularError,
    NoConvergenceError,
    NotConvergedError,
    ParseError,
    PolymultError,
    ResourceLimitError,
)
from .geometry import enumerate_points, load_system, validate
from .harness import metrics_to_csv, metrics_to_records, sweep
from .limit import limit_gaussian, ratio_rows_to_csv, ratio_sweep
from .potential import make_context, minimize

COMMANDS = ("validate", "points", "pmf", "minimize", "limit", "ratio", "converge", "sample")
DEFAULT_FORMAT = {
    "validate": "json",
    "points": "csv",
    "pmf": "csv",
    "minimize": "json",
    "limit": "json",
    "ratio": "csv",
    "converge": "csv",
    "sample": "csv",
}

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_RESOURCE, EXIT_IO = 0, 1, 2, 3, 4


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    k: int = 1
    ks: tuple = (1,)
    c: float = 0.1
    x: Optional[tuple] = None
    seed: int = 0
    count: int = 1000
    output_path: Optional[str] = None
    format: Optional[str] = None
    point_cap: int = DEFAULT_POINT_CAP

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError(f"unknown command {self.command!r}")
        if not 0 < self.c < 1 / 6:
            raise ParseError(f"--c must lie in (0, 1/6), got {self.c}")
        if self.k < 1 or any(k < 1 for k in self.ks):
            raise ParseError("levels k must be >= 1")
        if self.count < 1:
            raise ParseError("--count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ParseError("--seed must be a 64-bit unsigned integer")
        if self.point_cap < 1:
            raise ParseError("--point-cap must be >= 1")


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polymult", description="Polyhedral multinomial distributions and their Gaussian limits.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="system JSON file")
    parser.add_argument("--k", type=int, default=1, help="scaling level")
    parser.add_argument("--ks", type=_int_list, default=None, help="comma-separated levels (ratio, converge)")
    parser.add_argument("--c", type=float, default=0.1, help="window exponent in (0, 1/6) for ratio")
    parser.add_argument("--x", type=_float_list, default=None, help="L-coordinates for ratio")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=1000)
    parser.add_argument("--output", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--point-cap", type=int, default=DEFAULT_POINT_CAP)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.verbose:
        logging.basicConfig(level=logging.INFO)
    ks = ns.ks if ns.ks is not None else (ns.k,)
    return RunConfig(
        command=ns.command,
        input_path=ns.input,
        k=ns.k,
        ks=ks,
        c=ns.c,
        x=ns.x,
        seed=ns.seed,
        count=ns.count,
        output_path=ns.output,
        format=ns.format,
        point_cap=ns.point_cap,
    )


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _points_output(points: np.ndarray, fmt: str) -> str:
    if fmt == "json":
        return _io.dumps({"points": points.tolist()})
    header = [f"x_{j + 1}" for j in range(points.shape[1])]
    return _rows_csv(header, points.tolist())


def _default_x(ctx, g):
    """Unit Q-norm vector along the first basis direction."""
    x = np.zeros(ctx.dim)
    if ctx.dim:
        x[0] = 1.0 / np.sqrt(g.Q[0, 0])
    return x


def execute(cfg: RunConfig) -> tuple:
    """Run one command; returns ``(exit_code, text)``."""
    fmt = cfg.format or DEFAULT_FORMAT[cfg.command]
    system = load_system(cfg.input_path)

    if cfg.command == "validate":
        report = validate(system)
        code = EXIT_OK if report.admissible else EXIT_INVALID
        if fmt == "csv":
            fields = ["admissible", "sum_zero", "compact", "all_touching", "nonempty"]
            return code, _rows_csv(fields, [[str(getattr(report, f)).lower() for f in fields]])
        return code, _io.dumps(report.to_json())

    if cfg.command == "points":
        return EXIT_OK, _points_output(enumerate_points(system, cfg.k), fmt)

    if cfg.command == "pmf":
        pmf = build_pmf(system, cfg.k, point_cap=cfg.point_cap)
        if fmt == "json":
            return EXIT_OK, _io.dumps(
                {
                    "k": pmf.k,
                    "normalizer": str(pmf.normalizer),
                    "points": pmf.points.tolist(),
                    "weights": [str(w) for w in pmf.weights],
                    "prob": pmf.probabilities().tolist(),
                }
            )
        return EXIT_OK, pmf.to_csv()

    if cfg.command == "sample":
        pmf = build_pmf(system, cfg.k, point_cap=cfg.point_cap)
        return EXIT_OK, _points_output(sample(pmf, cfg.seed, cfg.count), fmt)

    if cfg.command == "converge":
        rows = sweep(system, cfg.ks, point_cap=cfg.point_cap)
        if fmt == "json":
            return EXIT_OK, _io.dumps(metrics_to_records(rows))
        return EXIT_OK, metrics_to_csv(rows)

    ctx = make_context(system)
    m = minimize(ctx, raise_on_failure=True)
    if cfg.command == "minimize":
        report = m.to_json()
        if fmt == "csv":
            return EXIT_OK, _rows_csv(
                ["m", "residual", "iterations", "converged"],
                [[";".join(_io.fmt_float(t) for t in report["m"]), _io.fmt_float(m.residual), m.iterations, "true"]],
            )
        return EXIT_OK, _io.dumps(report)

    g = limit_gaussian(ctx, m)
    if cfg.command == "limit":
        return EXIT_OK, _io.dumps(g.to_json())

    # ratio
    x = np.asarray(cfg.x, dtype=float) if cfg.x is not None else _default_x(ctx, g)
    if x.shape != (ctx.dim,):
        raise ParseError(f"--x needs {ctx.dim} L-coordinates, got {x.size}")
    rows = ratio_sweep(ctx, m, cfg.ks, x, c=cfg.c)
    if fmt == "json":
        return EXIT_OK, _io.dumps([asdict(row) for row in rows])
    return EXIT_OK, ratio_rows_to_csv(rows)


def _fail(code: int, kind: str, message: str) -> int:
    reason = " ".join(str(message).split())
    print(f"polymult: error: {kind}: {reason}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        code, text = execute(cfg)
    except _ArgumentError as exc:
        return _fail(EXIT_IO, "parse-error", exc)
    except InadmissibleSystemError as exc:
        return _fail(EXIT_INVALID, exc.code, exc)
    except (NoConvergenceError, NotConvergedError, NearSingularError, DomainError) as exc:
        return _fail(EXIT_NUMERIC, exc.code, exc)
    except ResourceLimitError as exc:
        return _fail(EXIT_RESOURCE, exc.code, exc)
    except ParseError as exc:
        return _fail(EXIT_IO, exc.code, exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io-error", exc)
    except PolymultError as exc:
        return _fail(EXIT_NUMERIC, exc.code, exc)

    try:
        if cfg.output_path:
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, "io-error", exc)
    if code == EXIT_INVALID:
        print("polymult: error: inadmissible-system: validation failed", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
