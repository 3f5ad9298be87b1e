"""Static SVG 1.1 line charts and histograms, no plotting dependency."""

from __future__ import annotations

from typing import Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


class _Panel:
    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim = xlim
        lo, hi = ylim
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        self.ylim = (lo, hi)

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + (x - lo) / ((hi - lo) or 1.0) * self.w

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 + self.h - (y - lo) / (hi - lo) * self.h

    def axes(self, title, xlabel, ylabel) -> list[str]:
        out = [f'<rect x="{_fmt(self.x0)}" y="{_fmt(self.y0)}" width="{_fmt(self.w)}" height="{_fmt(self.h)}" '
               'fill="none" stroke="#333"/>',
               f'<text x="{_fmt(self.x0 + self.w / 2)}" y="{_fmt(self.y0 - 10)}" text-anchor="middle" '
               f'font-size="14">{_esc(title)}</text>',
               f'<text x="{_fmt(self.x0 + self.w / 2)}" y="{_fmt(self.y0 + self.h + 38)}" text-anchor="middle" '
               f'font-size="12">{_esc(xlabel)}</text>',
               f'<text x="{_fmt(self.x0 - 55)}" y="{_fmt(self.y0 + self.h / 2)}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 {_fmt(self.x0 - 55)} {_fmt(self.y0 + self.h / 2)})">{_esc(ylabel)}</text>']
        for v in _ticks(*self.ylim):
            y = self.py(v)
            out.append(f'<line x1="{_fmt(self.x0 - 4)}" y1="{_fmt(y)}" x2="{_fmt(self.x0)}" y2="{_fmt(y)}" stroke="#333"/>')
            out.append(f'<text x="{_fmt(self.x0 - 7)}" y="{_fmt(y + 4)}" text-anchor="end" font-size="10">{v:.3g}</text>')
        for v in _ticks(*self.xlim):
            x = self.px(v)
            out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(self.y0 + self.h)}" x2="{_fmt(x)}" '
                       f'y2="{_fmt(self.y0 + self.h + 4)}" stroke="#333"/>')
            out.append(f'<text x="{_fmt(x)}" y="{_fmt(self.y0 + self.h + 16)}" text-anchor="middle" '
                       f'font-size="10">{v:.4g}</text>')
        return out


def _document(width, height, body: list[str]) -> str:
    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="100%" height="100%" fill="white"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"


def line_panels(panels: Sequence[tuple[str, str, dict[str, tuple[Sequence[float], Sequence[float]]]]],
                xlabel: str = "tick") -> str:
    """Stack one line chart per ``(title, ylabel, {name: (xs, ys)})`` panel."""
    width, panel_h, gap = 860, 260, 90
    height = gap + len(panels) * (panel_h + gap)
    body = []
    for p_idx, (title, ylabel, series) in enumerate(panels):
        xs_all = [x for xs, _ in series.values() for x in xs]
        ys_all = [y for _, ys in series.values() for y in ys]
        xlim = (min(xs_all), max(xs_all)) if xs_all else (0.0, 1.0)
        ylim = (min(ys_all), max(ys_all)) if ys_all else (0.0, 1.0)
        panel = _Panel(90, gap + p_idx * (panel_h + gap), 560, panel_h, xlim, ylim)
        body += panel.axes(title, xlabel, ylabel)
        for s_idx, (name, (xs, ys)) in enumerate(series.items()):
            color = COLORS[s_idx % len(COLORS)]
            pts = " ".join(f"{_fmt(panel.px(x))},{_fmt(panel.py(y))}" for x, y in zip(xs, ys))
            body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
            ly = panel.y0 + 14 + 18 * s_idx
            body.append(f'<line x1="670" y1="{_fmt(ly)}" x2="695" y2="{_fmt(ly)}" stroke="{color}" stroke-width="2"/>')
            body.append(f'<text x="702" y="{_fmt(ly + 4)}" font-size="12">{_esc(name)}</text>')
    return _document(width, height, body)


def histogram(edges: Sequence[float], counts: Sequence[int], title: str, xlabel: str) -> str:
    width, height = 760, 460
    panel = _Panel(90, 60, 600, 320, (edges[0], edges[-1]), (0.0, max(max(counts), 1)))
    body = panel.axes(title, xlabel, "agents")
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        x0, x1 = panel.px(lo), panel.px(hi)
        y = panel.py(c)
        body.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y)}" width="{_fmt(x1 - x0)}" '
                    f'height="{_fmt(panel.y0 + panel.h - y)}" fill="{COLORS[3]}" stroke="white"/>')
    return _document(width, height, body)
