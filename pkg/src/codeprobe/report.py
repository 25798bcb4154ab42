"""Tables and plots for probe results.

Tables render one row per run label (plus the analytic Naive row) with one
column per task. Plots are hand-emitted SVG so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

from ._util import CodeProbeError
from .probe import ProbeEntry, ProbeResults
from .tasks import TASK_CLASS_COUNTS, TaskKind

TASK_ORDER = [TaskKind.LEN, TaskKind.AST, TaskKind.CPX, TaskKind.TYP]

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _cell_accuracy(results: ProbeResults, task: TaskKind, policy: str) -> float | None:
    entries = [e for e in results.entries if e.task == task]
    if not entries:
        return None
    top_size = max(e.train_size for e in entries)
    entries = [e for e in entries if e.train_size == top_size]
    if policy == "best-layer":
        return max(e.test_accuracy for e in entries)
    if policy == "last-layer":
        last = max(e.layer for e in entries)
        return [e for e in entries if e.layer == last][-1].test_accuracy
    raise CodeProbeError(f"unknown cell policy {policy!r}")


def emit_table(
    results_list: list[ProbeResults],
    run_labels: list[str],
    policy: str = "best-layer",
) -> tuple[str, str]:
    """Returns (markdown, csv) accuracy tables with a leading Naive row.
    Cells are test accuracy x100 to 2 decimals; missing tasks render as em-dash."""
    if len(results_list) != len(run_labels):
        raise CodeProbeError("one label per results set required")
    rows: list[tuple[str, list[str]]] = []
    naive = [f"{100.0 / TASK_CLASS_COUNTS[t]:.2f}" for t in TASK_ORDER]
    rows.append(("Naive", naive))
    for label, results in zip(run_labels, results_list):
        cells = []
        for task in TASK_ORDER:
            acc = _cell_accuracy(results, task, policy)
            cells.append("—" if acc is None else f"{100.0 * acc:.2f}")
        rows.append((label, cells))

    header = ["Model"] + [t.value for t in TASK_ORDER]
    md_lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for label, cells in rows:
        md_lines.append("| " + " | ".join([label] + cells) + " |")
    md_lines.append("")
    md_lines.append(f"Cell policy: {policy} (test accuracy x100)")
    markdown = "\n".join(md_lines) + "\n"

    csv_lines = [",".join(header)]
    for label, cells in rows:
        csv_lines.append(",".join([label] + cells))
    return markdown, "\n".join(csv_lines) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 60, 140, 30, 50  # margins; right margin holds the legend


def _sx(layer: float, max_layer: float) -> float:
    span = max(max_layer, 1)
    return _ML + (layer / span) * (_W - _ML - _MR)


def _sy(acc: float) -> float:
    return _MT + (1.0 - acc) * (_H - _MT - _MB)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _svg_frame(title: str, max_layer: int) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="20" font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes
    x0, y0, x1, y1 = _ML, _sy(0.0), _W - _MR, _sy(1.0)
    parts.append(
        f'<line x1="{x0}" y1="{_fmt(y0)}" x2="{x1}" y2="{_fmt(y0)}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{_fmt(y0)}" x2="{x0}" y2="{_fmt(y1)}" stroke="black"/>'
    )
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = _sy(tick)
        parts.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(y)}" x2="{x0}" y2="{_fmt(y)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(y + 4)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{tick:.2f}</text>'
        )
    for layer in range(max_layer + 1):
        x = _sx(layer, max_layer)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y0)}" x2="{_fmt(x)}" y2="{_fmt(y0 + 4)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y0 + 18)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{layer}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.2f}" y="{_H - 10}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">layer</text>'
    )
    parts.append(
        f'<text x="16" y="{(_sy(0.0) + _sy(1.0)) / 2:.2f}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_sy(0.0) + _sy(1.0)) / 2:.2f})">accuracy</text>'
    )
    return parts


def _series_svg(
    parts: list[str],
    series: list[tuple[str, list[tuple[int, float]]]],
    max_layer: int,
) -> None:
    for k, (name, points) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{_fmt(_sx(l, max_layer))},{_fmt(_sy(a))}" for l, a in points)
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        for l, a in points:
            parts.append(
                f'<circle cx="{_fmt(_sx(l, max_layer))}" cy="{_fmt(_sy(a))}" r="2.5" '
                f'fill="{color}"/>'
            )
        ly = _MT + 16 + 18 * k
        lx = _W - _MR + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" font-size="11">{name}</text>'
        )


def _series_points(entries: list[ProbeEntry]) -> list[tuple[int, float]]:
    by_layer: dict[int, float] = {}
    for e in entries:
        by_layer[e.layer] = e.test_accuracy
    return sorted(by_layer.items())


def emit_layer_plot(
    results_list: list[ProbeResults], run_labels: list[str], task: TaskKind
) -> str:
    """Accuracy-by-layer SVG, one polyline per run."""
    series: list[tuple[str, list[tuple[int, float]]]] = []
    for label, results in zip(run_labels, results_list):
        entries = [e for e in results.entries if e.task == task]
        if not entries:
            continue
        top_size = max(e.train_size for e in entries)
        pts = _series_points([e for e in entries if e.train_size == top_size])
        if len(pts) >= 2:
            series.append((label, pts))
    if not series:
        raise CodeProbeError(f"no layer results for task {task.value}")
    max_layer = max(l for _, pts in series for l, _ in pts)
    parts = _svg_frame(f"{task.value}: accuracy by layer", max_layer)
    _series_svg(parts, series, max_layer)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_curve_plot(results: ProbeResults, task: TaskKind) -> tuple[str, list[str]]:
    """Accuracy-by-layer SVG with one series per train size.
    Returns (svg, warnings)."""
    entries = [e for e in results.entries if e.task == task]
    if not entries:
        raise CodeProbeError(f"no results for task {task.value}")
    sizes = sorted({e.train_size for e in entries})
    warnings: list[str] = []
    if len(sizes) < 2:
        warnings.append(f"{task.value}: only one train size present; single-series plot")
    series = [
        (f"n={size}", _series_points([e for e in entries if e.train_size == size]))
        for size in sizes
    ]
    max_layer = max(l for _, pts in series for l, _ in pts)
    parts = _svg_frame(f"{task.value}: accuracy by layer and sample size", max_layer)
    _series_svg(parts, series, max_layer)
    parts.append("</svg>")
    return "\n".join(parts) + "\n", warnings


def write_report(
    results_list: list[ProbeResults],
    run_labels: list[str],
    out_dir: str | Path,
    policy: str = "best-layer",
) -> list[Path]:
    """Write table.md, table.csv and per-task plots; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    markdown, csv_text = emit_table(results_list, run_labels, policy)
    for name, content in (("table.md", markdown), ("table.csv", csv_text)):
        p = out_dir / name
        p.write_text(content, encoding="utf-8")
        written.append(p)
    for task in TASK_ORDER:
        if any(e.task == task for r in results_list for e in r.entries):
            p = out_dir / f"layers_{task.value.lower()}.svg"
            p.write_text(emit_layer_plot(results_list, run_labels, task), encoding="utf-8")
            written.append(p)
    for label, results in zip(run_labels, results_list):
        for task in TASK_ORDER:
            entries = [e for e in results.entries if e.task == task]
            if len({e.train_size for e in entries}) >= 2:
                svg, _ = emit_curve_plot(results, task)
                p = out_dir / f"curves_{task.value.lower()}.svg"
                p.write_text(svg, encoding="utf-8")
                written.append(p)
    return written
