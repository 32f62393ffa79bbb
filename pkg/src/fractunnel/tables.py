"""Deterministic text rendering of result tables."""
from __future__ import annotations

import math
from dataclasses import astuple


def format_number(x) -> str:
    """Shortest decimal string that round-trips the binary64 value."""
    if isinstance(x, str):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines += [",".join(format_number(v) for v in astuple(r)) for r in rows]
    return "\n".join(lines) + "\n"


def render_plain(columns, rows) -> str:
    cells = [list(columns)] + [[format_number(v) for v in astuple(r)] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)


def render(columns, rows, fmt="csv") -> str:
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "plain":
        return render_plain(columns, rows)
    raise ValueError(f"unknown format {fmt!r}")


def write_text(text: str, destination=None, stream=None) -> int:
    """Write UTF-8 with LF endings; returns the byte count."""
    data = text.encode("utf-8")
    if destination is not None:
        with open(destination, "wb") as fh:
            fh.write(data)
    else:
        stream.write(text)
        stream.flush()
    return len(data)
