"""Static SVG output for networks and fluxes (2-d only).

Flux mass maps to stroke width, friction to gray level (black = free road,
light gray = friction close to the ambient cost).  Write-only; figures are
meant for quick inspection of fixtures and solver output.
"""
from __future__ import annotations

import math

from .flow import MassFlux
from .measures import DiscreteMeasure
from .network import StreetNetwork

_MARGIN = 0.15


def _bounds(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if not xs:
        return 0.0, 0.0, 1.0, 1.0
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    pad = _MARGIN * span
    return lo_x - pad, lo_y - pad, hi_x + pad, hi_y + pad


def render_svg(net: StreetNetwork | None = None,
               flux: MassFlux | None = None,
               mu_plus: DiscreteMeasure | None = None,
               mu_minus: DiscreteMeasure | None = None,
               size: int = 480) -> str:
    """Compose an SVG document from any subset of network, flux, measures."""
    points = []
    if net is not None:
        for s in net.segments:
            points += [s.p, s.q]
    if flux is not None:
        for e in flux.edges:
            points += [e.tail, e.head]
    for mu in (mu_plus, mu_minus):
        if mu is not None:
            points += list(mu.points)
    for p in points:
        if len(p) != 2:
            raise ValueError("SVG rendering supports 2-d geometry only")
    lo_x, lo_y, hi_x, hi_y = _bounds(points)
    span = max(hi_x - lo_x, hi_y - lo_y)
    scale = size / span

    def sx(x):
        return (x - lo_x) * scale

    def sy(y):
        return size - (y - lo_y) * scale  # SVG y grows downward

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if net is not None:
        a = net.a
        for s in net.segments:
            frac = 0.0 if not math.isfinite(a) or a == 0.0 else s.b / a
            gray = int(200 * min(1.0, max(0.0, frac)))
            lines.append(
                f'<line x1="{sx(s.p[0]):.2f}" y1="{sy(s.p[1]):.2f}" '
                f'x2="{sx(s.q[0]):.2f}" y2="{sy(s.q[1]):.2f}" '
                f'stroke="rgb({gray},{gray},{gray})" stroke-width="2.5"/>')
    if flux is not None:
        top = max((e.mass for e in flux.edges), default=1.0)
        for e in flux.edges:
            width = 1.0 + 5.0 * e.mass / top
            lines.append(
                f'<line x1="{sx(e.tail[0]):.2f}" y1="{sy(e.tail[1]):.2f}" '
                f'x2="{sx(e.head[0]):.2f}" y2="{sy(e.head[1]):.2f}" '
                f'stroke="steelblue" stroke-width="{width:.2f}" '
                f'stroke-linecap="round" opacity="0.8"/>')
    for mu, color in ((mu_plus, "black"), (mu_minus, "white")):
        if mu is None:
            continue
        for p, m in mu.atoms:
            r = 3.0 + 6.0 * m
            lines.append(
                f'<circle cx="{sx(p[0]):.2f}" cy="{sy(p[1]):.2f}" r="{r:.2f}" '
                f'fill="{color}" stroke="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
