"""CSV and SVG-heatmap emitters.

All numeric output uses 9 significant digits with '.' as the decimal
separator regardless of locale, so files are byte-stable golden
artifacts for a given seed and config.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .trajectory import ContactEvent, EnsembleResult


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def emit_csv(result: EnsembleResult, path) -> None:
    """Write `t,n_1,...,n_L,se_1,...,se_L`, one row per recorded time."""
    L = result.mean_density.shape[1]
    lines = [
        "t,"
        + ",".join(f"n_{i + 1}" for i in range(L))
        + ","
        + ",".join(f"se_{i + 1}" for i in range(L))
    ]
    for t, dens, se in zip(result.times, result.mean_density, result.stderr):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in dens] + [_fmt(v) for v in se]))
    Path(path).write_text("\n".join(lines) + "\n")


def parse_density_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read back a density CSV as (times, mean, stderr)."""
    rows = [line.split(",") for line in Path(path).read_text().strip().splitlines()]
    header, body = rows[0], rows[1:]
    L = (len(header) - 1) // 2
    data = np.array([[float(v) for v in r] for r in body])
    return data[:, 0], data[:, 1 : 1 + L], data[:, 1 + L :]


def event_action(ev: ContactEvent) -> str:
    if ev.target == 1:
        return "inject" if ev.changed else "null_inject"
    return "remove" if ev.changed else "null_remove"


def emit_events_csv(events: list[ContactEvent], path) -> None:
    """Write `traj,step,site,action` (site 1-based)."""
    lines = ["traj,step,site,action"]
    for ev in events:
        lines.append(f"{ev.traj},{ev.step},{ev.q + 1},{event_action(ev)}")
    Path(path).write_text("\n".join(lines) + "\n")


def emit_heatmap(
    result: EnsembleResult, path, n_steps: int | None = None, cell: int = 12, margin: int = 30
) -> None:
    """Self-contained SVG raster of n_i(t).

    x = time, y = site (site 1 on top); grayscale from 0 = black to
    1 = white.  Effective injections are drawn as filled markers,
    effective removals as hollow ones.
    """
    times = result.times
    dens = result.mean_density
    T, L = dens.shape
    width = margin * 2 + T * cell
    height = margin * 2 + L * cell
    t_final = float(times[-1]) if times[-1] > 0 else 1.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="#888"/>',
    ]
    for row in range(T):
        x = margin + row * cell
        for site in range(L):
            y = margin + site * cell
            level = int(round(255 * min(max(dens[row, site], 0.0), 1.0)))
            color = f"#{level:02x}{level:02x}{level:02x}"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{color}"/>'
            )
    # event steps are trajectory steps 1..n_steps; map onto the T raster
    # columns (column 0 is t=0)
    if n_steps is None:
        n_steps = T - 1 if T > 1 else 1
    for ev in result.events:
        if not ev.changed:
            continue
        x = margin + (ev.step / n_steps) * ((T - 1) * cell) + cell / 2.0
        y = margin + ev.q * cell + cell / 2.0
        r = cell * 0.3
        if ev.target == 1:
            parts.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{r:.1f}" fill="#000" stroke="#fff" stroke-width="1"/>'
            )
        else:
            parts.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{r:.1f}" fill="none" stroke="#fff" stroke-width="1.5"/>'
            )
    # simple axis labels
    parts.append(
        f'<text x="{margin}" y="{margin - 8}" font-size="10" fill="#fff">t = 0 .. {_fmt(t_final)} (site 1 top)</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
