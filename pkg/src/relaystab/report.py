"""CSV and SVG writers for region boundaries and sweeps."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, Sequence

from .regions import BoundaryPolyline, RegionKind

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 30, 40, 70

COLORS = {
    RegionKind.INNER: "#1f77b4",
    RegionKind.OUTER: "#d62728",
    RegionKind.NO_RELAY: "#2ca02c",
}
_FALLBACK_COLORS = ("#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def fmt(x: float) -> str:
    """Nine significant digits, the fixed CSV number format."""
    return format(float(x), ".9g")


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def polyline_csv(poly: BoundaryPolyline) -> str:
    return csv_text(("lambda1", "lambda2_max"), poly.points())


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _ticks(limit: float, count: int = 5) -> list[float]:
    step = limit / count
    return [i * step for i in range(count + 1)]


def overlay_svg(polys: Sequence[BoundaryPolyline], title: str = "") -> str:
    """One polyline per region on an 800x600 canvas.

    Both axes span ``[0, 1.1 * largest intercept]`` so every curve fits.
    """
    reach = max(max(float(p.lambda1[-1]), float(p.lambda2_max[0])) for p in polys)
    limit = 1.1 * reach if reach > 0 else 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + plot_w * x / limit

    def sy(y: float) -> float:
        return MARGIN_TOP + plot_h * (1.0 - y / limit)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{title}</text>'
        )
    x0, y0 = sx(0.0), sy(0.0)
    out.append(
        f'<path d="M{x0:.2f},{sy(limit):.2f} L{x0:.2f},{y0:.2f} L{sx(limit):.2f},{y0:.2f}" '
        'stroke="black" fill="none"/>'
    )
    for t in _ticks(limit):
        out.append(f'<line x1="{sx(t):.2f}" y1="{y0:.2f}" x2="{sx(t):.2f}" y2="{y0 + 5:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{sx(t):.2f}" y="{y0 + 20:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{t:.3f}</text>'
        )
        out.append(f'<line x1="{x0 - 5:.2f}" y1="{sy(t):.2f}" x2="{x0:.2f}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8:.2f}" y="{sy(t) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{t:.3f}</text>'
        )
    out.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
        'font-family="sans-serif" font-size="14">λ1 (packets/slot)</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:.1f})">λ2 (packets/slot)</text>'
    )

    spare = iter(_FALLBACK_COLORS)
    for k, poly in enumerate(polys):
        color = COLORS.get(poly.region) or next(spare)
        pts = poly.points() + [(float(poly.lambda1[-1]), 0.0)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2" '
            f'data-region="{poly.region.value}"/>'
        )
        ly = MARGIN_TOP + 20 + 20 * k
        lx = WIDTH - MARGIN_RIGHT - 150
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 38}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="13">{poly.region.value}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
