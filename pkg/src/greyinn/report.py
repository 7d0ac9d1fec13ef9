"""CSV, table and SVG output."""

import csv
import io
import json
import math
import os
from xml.sax.saxutils import escape

from .metrics import METRIC_NAMES


class SeriesFileError(ValueError):
    pass


def fmt(value):
    """Shortest decimal text that parses back to the same float."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return repr(float(value))


def read_series(path):
    """Read a ``label,value`` CSV with a header row. Returns (labels, values)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SeriesFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not rows:
        raise SeriesFileError(f"{path}: empty file")
    labels, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise SeriesFileError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            v = float(row[1])
        except ValueError:
            raise SeriesFileError(f"{path}:{lineno}: value {row[1]!r} is not a number") from None
        if not math.isfinite(v):
            raise SeriesFileError(f"{path}:{lineno}: value {row[1]!r} is not finite")
        labels.append(row[0].strip())
        values.append(v)
    if not values:
        raise SeriesFileError(f"{path}: no data rows")
    return labels, values


def continue_labels(labels, count):
    """Labels for ``count`` points following ``labels``."""
    try:
        ints = [int(s) for s in labels]
    except ValueError:
        return [f"{labels[-1]}+{h}" for h in range(1, count + 1)]
    step = ints[-1] - ints[-2] if len(ints) > 1 and ints[-1] != ints[-2] else 1
    return [str(ints[-1] + step * h) for h in range(1, count + 1)]


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_files(out_dir, files):
    """Write ``{name: text}`` into ``out_dir``; names must be plain file names."""
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        if os.path.basename(name) != name:
            raise ValueError(f"refusing to write outside the output directory: {name!r}")
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def manifest_text(d):
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def metrics_rows(evals):
    return [[name, *(ev.report.as_row()[m] for m in METRIC_NAMES)] for name, ev in evals]


def table(header, rows, color=True):
    """Aligned plain-text table; header in bold when ``color``."""
    cells = [list(header)] + [[v if isinstance(v, str) else f"{v:.6g}" for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for n, r in enumerate(cells):
        line = "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
        if n == 0 and color:
            line = f"\033[1m{line}\033[0m"
        lines.append(line.rstrip())
    return "\n".join(lines)


def use_color(stream):
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


PALETTE = ("#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd")


def svg_chart(series, title=""):
    """Line chart of ``[(name, xs, ys), ...]`` in an 800x480 viewport."""
    width, height = 800, 480
    left, right, top, bottom = 70, 160, 40, 50
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="#444"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="#444"/>',
    ]
    for i in range(5):
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{yv:.4g}</text>')
    for xv in sorted(set(xs_all)):
        out.append(f'<text x="{px(xv):.1f}" y="{top + ph + 16}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="10">{xv:g}</text>')
    for n, (name, xs, ys) in enumerate(series):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 16 * n + 8
        out.append(f'<rect x="{left + pw + 16}" y="{ly - 8}" width="12" height="3" fill="{color}"/>')
        out.append(f'<text x="{left + pw + 34}" y="{ly}" font-family="sans-serif" font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
