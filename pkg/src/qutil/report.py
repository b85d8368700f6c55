"""CSV/JSON export and SVG heatmaps of per-qubit utilization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .architecture import ArchitectureSpec
from .errors import ConfigurationError, RenderError
from .generator import format_ratio, parse_ratio
from .sweep import Failure, GroupKey, GroupStats, SweepOutcome, UtilizationTable

CSV_HEADER = ("arch", "q", "d", "r", "O", "L", "qubit", "active_count", "total", "utilization")

# Five-stop sequential heat ramp, light (0.0) to dark red (1.0).
RAMP = ("#ffffb2", "#fecc5c", "#fd8d3c", "#f03b20", "#bd0026")


def table_to_csv(table: UtilizationTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for key in table.keys():
        stats = table[key]
        for qb, count in enumerate(stats.counts):
            util = count / stats.total if stats.total else 0.0
            w.writerow([key.arch, key.q, key.d, format_ratio(key.r), key.O, key.L, qb, count, stats.total, f"{util:.6f}"])
    return buf.getvalue()


def export_csv(table: UtilizationTable, path) -> Path:
    if not len(table):
        raise ConfigurationError("refusing to export an empty utilization table")
    path = Path(path)
    try:
        path.write_bytes(table_to_csv(table).encode())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def parse_csv(text: str) -> UtilizationTable:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ConfigurationError("not a utilization CSV (header mismatch)")
    counts: dict[GroupKey, dict[int, int]] = {}
    totals: dict[GroupKey, int] = {}
    for row in rows[1:]:
        arch, q, d, r, O, L, qb, count, total, _ = row
        key = GroupKey(arch, int(q), int(d), parse_ratio(r), int(O), L)
        counts.setdefault(key, {})[int(qb)] = int(count)
        totals[key] = int(total)
    groups = {}
    for key in sorted(counts):
        per = counts[key]
        groups[key] = GroupStats(tuple(per.get(i, 0) for i in range(max(per) + 1)), totals[key])
    return UtilizationTable(groups)


def read_csv(path) -> UtilizationTable:
    path = Path(path)
    try:
        return parse_csv(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def export_failures(failures: Sequence[Failure], path) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ordinal", "arch", "q", "d", "r", "O", "L", "gen_seed", "trans_seed", "error"])
    for f in failures:
        p = f.params
        w.writerow([f.ordinal, p.arch_ref, p.G.q, p.G.d, format_ratio(p.G.r), p.T.O, p.T.L, p.G.seed, p.T.seed, f.error])
    path = Path(path)
    path.write_text(buf.getvalue())
    return path


def write_outputs(outcome: SweepOutcome, out_dir) -> dict[str, Path]:
    """Write ``manifest.json``, ``utilization.csv`` and ``failures.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.json"
    manifest.write_text(json.dumps(outcome.manifest, indent=2, sort_keys=True) + "\n")
    return {
        "manifest": manifest,
        "utilization": export_csv(outcome.table, out / "utilization.csv"),
        "failures": export_failures(outcome.failures, out / "failures.csv"),
    }


# ---------------------------------------------------------------------------
# heatmaps


def _hex_to_rgb(h: str) -> tuple[int, int, int]:
    return int(h[1:3], 16), int(h[3:5], 16), int(h[5:7], 16)


def ramp_color(value: float) -> str:
    """Linear interpolation through :data:`RAMP`; ``value`` is clamped to [0, 1]."""
    v = min(1.0, max(0.0, float(value)))
    pos = v * (len(RAMP) - 1)
    i = min(int(pos), len(RAMP) - 2)
    t = pos - i
    a, b = _hex_to_rgb(RAMP[i]), _hex_to_rgb(RAMP[i + 1])
    rgb = [round(x + (y - x) * t) for x, y in zip(a, b)]
    return "#" + "".join(f"{c:02x}" for c in rgb)


def parse_filter(text: str) -> dict:
    """``q=6,d=20,r=1:1,O=2,L=sabre`` to a field dict (``arch=`` also accepted)."""
    out: dict = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        if not sep:
            raise ConfigurationError(f"filter term {part!r} is not name=value")
        if name in ("q", "d", "O"):
            out[name] = int(value)
        elif name == "r":
            out[name] = parse_ratio(value)
        elif name in ("L", "arch"):
            out[name] = value
        else:
            raise ConfigurationError(f"unknown filter field {name!r}")
    return out


@dataclass(frozen=True)
class HeatmapSpec:
    filters: dict
    scale: float = 60.0
    radius: float = 17.0
    title: str | None = None

    def resolve(self, table: UtilizationTable) -> GroupKey:
        keys = table.select(**self.filters)
        if len(keys) != 1:
            raise ConfigurationError(f"filter {self.filters} matches {len(keys)} groups; it must match exactly one")
        return keys[0]


def force_layout(arch: ArchitectureSpec) -> list[tuple[float, float]]:
    """Deterministic spring layout for maps that ship without coordinates."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(arch.n))
    g.add_edges_from(arch.coupling.edges)
    pos = nx.spring_layout(g, seed=0)
    return [(float(pos[q][0]) * arch.n ** 0.5 * 1.5, float(pos[q][1]) * arch.n ** 0.5 * 1.5) for q in range(arch.n)]


def heatmap_svg(
    values: Sequence[float],
    arch: ArchitectureSpec,
    title: str = "",
    scale: float = 60.0,
    radius: float = 17.0,
    coords: Sequence[tuple[float, float]] | None = None,
) -> str:
    coords = coords if coords is not None else arch.coupling.coords
    if coords is None:
        raise RenderError(
            f"architecture {arch.name!r} has no draw coordinates; rerun with --force-layout for a generic spring layout"
        )
    if len(values) != arch.n:
        raise RenderError(f"{len(values)} values for {arch.n} qubits")
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    margin = radius * 2
    x0, y0 = min(xs), min(ys)
    top = 40.0 if title else 10.0

    def px(q):
        return margin + (coords[q][0] - x0) * scale, top + margin + (coords[q][1] - y0) * scale

    width = margin * 2 + (max(xs) - x0) * scale
    plot_h = top + margin * 2 + (max(ys) - y0) * scale
    bar_h = 70.0
    height = plot_h + bar_h
    width = max(width, 320.0)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        f'<rect x="0" y="0" width="{width:.1f}" height="{height:.1f}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>'
        )
    parts.append('<g id="edges" stroke="#555555" stroke-width="3">')
    for a, b in arch.coupling.edges:
        (xa, ya), (xb, yb) = px(a), px(b)
        parts.append(f'<line x1="{xa:.1f}" y1="{ya:.1f}" x2="{xb:.1f}" y2="{yb:.1f}"/>')
    parts.append("</g>")
    parts.append('<g id="qubits" font-family="sans-serif" font-size="12" text-anchor="middle">')
    for q in range(arch.n):
        x, y = px(q)
        v = float(values[q])
        text_fill = "#ffffff" if v > 0.6 else "#000000"
        parts.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{radius:.1f}" fill="{ramp_color(v)}" stroke="#333333" '
            f'stroke-width="1.5" data-qubit="{q}" data-utilization="{v:.6f}"/>'
        )
        parts.append(f'<text x="{x:.1f}" y="{y + 4:.1f}" fill="{text_fill}">{q}</text>')
    parts.append("</g>")

    # color bar with tick labels
    bx, bw, by, bh = margin, width - 2 * margin, plot_h + 10, 16.0
    parts.append("<defs><linearGradient id=\"ramp\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">")
    for i, c in enumerate(RAMP):
        parts.append(f'<stop offset="{i / (len(RAMP) - 1):.2f}" stop-color="{c}"/>')
    parts.append("</linearGradient></defs>")
    parts.append('<g id="colorbar" font-family="sans-serif" font-size="11" text-anchor="middle">')
    parts.append(f'<rect x="{bx:.1f}" y="{by:.1f}" width="{bw:.1f}" height="{bh:.1f}" fill="url(#ramp)" stroke="#333333"/>')
    for i in range(5):
        t = i / 4
        x = bx + t * bw
        parts.append(f'<line x1="{x:.1f}" y1="{by + bh:.1f}" x2="{x:.1f}" y2="{by + bh + 4:.1f}" stroke="#333333"/>')
        parts.append(f'<text x="{x:.1f}" y="{by + bh + 16:.1f}">{t:.2f}</text>')
    parts.append(f'<text x="{bx + bw / 2:.1f}" y="{by + bh + 32:.1f}">average qubit utilization</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def group_title(key: GroupKey, stats: GroupStats) -> str:
    return f"{key.arch}  q={key.q} d={key.d} r={format_ratio(key.r)} O={key.O} L={key.L}  N={stats.total}"


def render_heatmap(
    table: UtilizationTable,
    spec: HeatmapSpec,
    arch: ArchitectureSpec,
    path,
    force: bool = False,
) -> Path:
    key = spec.resolve(table)
    stats = table[key]
    if len(stats.counts) != arch.n:
        raise RenderError(f"group has {len(stats.counts)} qubits but {arch.name} has {arch.n}")
    coords = None
    if arch.coupling.coords is None and force:
        coords = force_layout(arch)
    svg = heatmap_svg(
        stats.frequencies(),
        arch,
        spec.title if spec.title is not None else group_title(key, stats),
        spec.scale,
        spec.radius,
        coords,
    )
    path = Path(path)
    path.write_text(svg)
    return path


def render_architecture(arch: ArchitectureSpec, path, force: bool = False) -> Path:
    """Plain coupling-map drawing (every qubit at the zero color)."""
    coords = force_layout(arch) if arch.coupling.coords is None and force else None
    path = Path(path)
    path.write_text(heatmap_svg([0.0] * arch.n, arch, arch.name, coords=coords))
    return path
