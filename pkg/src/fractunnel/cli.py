"""``ftt`` command line: tunneling times, sweeps, peaks and self-validation.

Exit codes: 0 success, 1 bad arguments or parameters, 2 a validation
invariant failed.
"""
from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, fields

from .analysis import COLUMNS, PEAK_COLUMNS, PeakRow, evaluate_point, find_peak, peak_curve, sweep
from .chronometry import asymptote
from .errors import FractunnelError, MalformedLine, UnknownKey
from .tables import render, write_text
from .validation import validate_suite

SUBCOMMANDS = ("time", "sweep", "peak", "peaks", "asymptote", "validate")

# reference barrier doubles as the defaults
DEFAULTS = {"potential": 10.0, "energy": 9.0, "u": 1e-4, "tol": 1e-8, "format": "csv"}


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


CONVERTERS = {
    "alpha": float,
    "potential": float,
    "energy": float,
    "width": float,
    "u": float,
    "var": _choice("width", "alpha", "energy"),
    "from": float,
    "to": float,
    "steps": int,
    "bracket-lo": float,
    "bracket-hi": float,
    "tol": float,
    "out": str,
    "format": _choice("csv", "plain"),
}

_LINE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_-]*)\s*=\s*([^=\s](?:[^=]*[^=\s])?)\s*$")


class CliError(Exception):
    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


def parse_config(path):
    """Read ``key = value`` lines into a dict of converted values.

    ``#`` starts a comment; blank lines are skipped; keys are the long flag
    names (underscores accepted for hyphens).
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config_text(text)


def parse_config_text(text):
    params = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise MalformedLine(f"malformed config line {lineno}: {raw.strip()!r}", lineno)
        key, value = m.group(1).replace("_", "-"), m.group(2)
        if key not in CONVERTERS:
            raise UnknownKey(f"unknown config key {key!r} on line {lineno}", param=key)
        try:
            params[key] = CONVERTERS[key](value)
        except ValueError as exc:
            raise MalformedLine(f"bad value for {key!r} on line {lineno}: {exc}", lineno) from exc
    return params


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _flag_type(key):
    conv = CONVERTERS[key]

    def parse(text):
        try:
            return conv(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    parse.__name__ = key
    return parse


FLAGS = {
    "time": ("alpha", "potential", "energy", "width", "u"),
    "sweep": ("alpha", "potential", "energy", "width", "u", "var", "from", "to", "steps"),
    "peak": ("alpha", "potential", "energy", "u", "bracket-lo", "bracket-hi", "tol"),
    "peaks": ("potential", "energy", "u", "from", "to", "steps", "tol"),
    "asymptote": ("alpha", "potential", "energy", "u"),
    "validate": (),
}


def build_parser():
    parser = _Parser(prog="ftt", description="Tunneling time in space-fractional quantum mechanics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        for key in FLAGS[name]:
            p.add_argument(f"--{key}", dest=key, type=_flag_type(key), default=None)
        p.add_argument("--config", default=None, metavar="PATH")
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--format", dest="format", type=_flag_type("format"), default=None)
    return parser


def _effective(ns):
    params = dict(DEFAULTS)
    if ns.config is not None:
        params.update(parse_config(ns.config))
    for key in CONVERTERS:
        value = getattr(ns, key, None)
        if value is not None:
            params[key] = value
    return params


def _need(params, *keys):
    for key in keys:
        if params.get(key) is None:
            raise CliError(f"missing required parameter --{key}", param=key)
    return [params[k] for k in keys]


@dataclass(frozen=True)
class AsymptoteRow:
    alpha: float
    V: float
    E: float
    u: float
    tau1: float
    tau2: float
    slope: float
    tau2_literal: float


ASYMPTOTE_COLUMNS = tuple(f.name for f in fields(AsymptoteRow))


def _run(command, params):
    """Return (text, exit_code)."""
    fmt = params["format"]
    V, E, u = params["potential"], params["energy"], params["u"]
    if command == "time":
        alpha, b = _need(params, "alpha", "width")
        return render(COLUMNS, [evaluate_point(alpha, V, E, u, b)], fmt), 0
    if command == "sweep":
        var, start, stop, steps = _need(params, "var", "from", "to", "steps")
        fixed = dict(alpha=params.get("alpha"), V=V, E=E, u=u, b=params.get("width"))
        table = sweep(var, start, stop, steps, **fixed)
        return render(COLUMNS, table.rows, fmt), 0
    if command == "peak":
        (alpha,) = _need(params, "alpha")
        lo, hi = params.get("bracket-lo"), params.get("bracket-hi")
        bracket = None
        if lo is not None or hi is not None:
            lo, hi = _need(params, "bracket-lo", "bracket-hi")
            bracket = (lo, hi)
        p = find_peak(alpha, E, V, u, bracket=bracket, tol=params["tol"])
        row = PeakRow(alpha=float(alpha), V=V, E=E, u=u, b_max=p.b_max, tau_max=p.tau_max,
                      iterations=p.iterations)
        return render(PEAK_COLUMNS, [row], fmt), 0
    if command == "peaks":
        start, stop, steps = _need(params, "from", "to", "steps")
        return render(PEAK_COLUMNS, peak_curve(start, stop, steps, E, V, u, tol=params["tol"]), fmt), 0
    if command == "asymptote":
        (alpha,) = _need(params, "alpha")
        c = asymptote(alpha, E, V, u)
        row = AsymptoteRow(float(alpha), V, E, u, c.tau1, c.tau2, c.slope, c.tau2_literal)
        return render(ASYMPTOTE_COLUMNS, [row], fmt), 0
    report = validate_suite()
    return report.format(), 0 if report.passed else 2


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        ns = build_parser().parse_args(argv)
        params = _effective(ns)
        text, code = _run(ns.command, params)
        write_text(text, params.get("out"), stdout)
        return code
    except (CliError, FractunnelError) as exc:
        param = getattr(exc, "param", None)
        prefix = f"{param}: " if param else ""
        stderr.write(f"ftt: error: {prefix}{exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"ftt: error: {exc}\n")
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
