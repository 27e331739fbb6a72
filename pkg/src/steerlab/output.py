"""Locale-independent CSV/JSON/SVG writers.

Every float is written with 12 significant digits (``format(x, ".12g")``);
missing values are empty CSV fields and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

TRIAL_HEADER = ("trial_id", "seed", "c_rs", "c_re", "c_se", "cmi", "nu_max", "b_neg", "status")
SCAN_HEADER = ("P", "Q", "T", "psd", "min_eigenvalue", "omega_star", "cmi", "nu", "b_neg", "status", "domain_rank")


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else format(float(v), ".12g")
    return str(v)


def clean(obj):
    """Recursively convert numpy values and round floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if not math.isfinite(x) else float(format(x, ".12g"))
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(clean(obj), indent=2) + "\n", encoding="utf-8")
    return path


def write_csv(path, header: Sequence[str], rows: Iterable[dict]) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(row.get(k)) for k in header])
    return path


def write_trials_csv(records, path) -> Path:
    return write_csv(path, TRIAL_HEADER, (r.to_dict() for r in records))


def write_scan_csv(points, path) -> Path:
    return write_csv(path, SCAN_HEADER, (p.to_dict() for p in points))


def svg_scatter(xs, ys, path, xlabel: str = "x", ylabel: str = "y", title: str = "", size: int = 400) -> Path:
    """Minimal standalone SVG scatter plot: frame, axis labels, tick extremes, points."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    pad = 50
    inner = size - 2 * pad

    def span(v):
        if v.size == 0:
            return 0.0, 1.0
        lo, hi = float(v.min()), float(v.max())
        return (lo - 0.5, hi + 0.5) if hi - lo < 1e-12 else (lo, hi)

    (x0, x1), (y0, y1) = span(xs), span(ys)
    px = pad + (xs - x0) / (x1 - x0) * inner
    py = size - pad - (ys - y0) / (y1 - y0) * inner
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{pad}" y="{pad}" width="{inner}" height="{inner}" fill="none" stroke="black"/>',
        f'<text x="{size / 2}" y="{size - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="12" y="{size / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 12 {size / 2})">{escape(ylabel)}</text>',
        f'<text x="{pad}" y="{size - pad + 14}" font-size="10">{fmt(x0)}</text>',
        f'<text x="{size - pad}" y="{size - pad + 14}" text-anchor="end" font-size="10">{fmt(x1)}</text>',
        f'<text x="{pad - 4}" y="{size - pad}" text-anchor="end" font-size="10">{fmt(y0)}</text>',
        f'<text x="{pad - 4}" y="{pad + 10}" text-anchor="end" font-size="10">{fmt(y1)}</text>',
    ]
    if title:
        parts.append(f'<text x="{size / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    parts += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1.5"/>' for a, b in zip(px, py)]
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path


def write_projections(columns: dict[str, Sequence[float]], out_dir, stem: str) -> list[Path]:
    """One scatter per pair of columns (all pairwise 2-D projections)."""
    names = list(columns)
    paths = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = names[i], names[j]
            paths.append(svg_scatter(columns[a], columns[b], Path(out_dir) / f"{stem}_{a}_{b}.svg", a, b))
    return paths


def versions() -> dict:
    import scipy

    from . import __version__

    return {
        "steerlab": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def write_manifest(out_dir, command: str, config: dict, outputs: Sequence) -> Path:
    manifest = {
        "command": command,
        "config": config,
        "versions": versions(),
        "outputs": sorted(Path(p).name for p in outputs),
    }
    return write_json(manifest, Path(out_dir) / "manifest.json")
