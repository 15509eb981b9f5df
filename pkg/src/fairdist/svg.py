"""Native SVG rendering of exported artifacts (no plotting toolkit).

Fixed 800x600 viewBox, linear scales, no timestamps: rendering the same
artifact twice yields byte-identical documents.  Histograms put the
undefined bucket as a separated red bar after the value axis.
"""
from __future__ import annotations

from fractions import Fraction

from .distribution import BinnedHistogram, Pmf, bin_histogram

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 30, 50, 60
PLOT_W = WIDTH - MARGIN_L - MARGIN_R
PLOT_H = HEIGHT - MARGIN_T - MARGIN_B

UNDEF_COLOR = "#d62728"
BAR_COLOR = "#4878a8"


def _num(x: float) -> str:
    text = f"{x:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{_escape(title)}</text>',
    ]


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _axis_frame() -> str:
    x0, y0 = MARGIN_L, MARGIN_T + PLOT_H
    return (
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + PLOT_W}" y2="{y0}" stroke="black"/>'
        f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>'
    )


def _tick_label(x: float, y: float, text: str, anchor: str = "middle") -> str:
    return (
        f'<text x="{_num(x)}" y="{_num(y)}" text-anchor="{anchor}" '
        f'font-family="sans-serif" font-size="12">{_escape(text)}</text>'
    )


def render_histogram(pmf: Pmf, title: str, bins: int = 41) -> str:
    """Binned histogram of an exact pmf plus the separated undefined bar."""
    if pmf.total == 0:
        raise ValueError("empty pmf: nothing to render")
    hist: BinnedHistogram = bin_histogram(pmf, bins)
    probs = [c / pmf.total for c in hist.counts]
    undef_prob = pmf.undefined_count / pmf.total
    top = max(probs + [undef_prob, 1e-12])
    slots = bins + 2  # one slot of gap, then the undefined bar
    slot_w = PLOT_W / slots
    base_y = MARGIN_T + PLOT_H
    parts = _header(title)
    parts.append(_axis_frame())
    for i, prob in enumerate(probs):
        h = PLOT_H * prob / top
        parts.append(
            f'<rect class="bar" x="{_num(MARGIN_L + i * slot_w)}" y="{_num(base_y - h)}" '
            f'width="{_num(slot_w)}" height="{_num(h)}" fill="{BAR_COLOR}"/>'
        )
    undef_x = MARGIN_L + (bins + 1) * slot_w
    undef_h = PLOT_H * undef_prob / top
    parts.append(
        f'<rect class="undefined-bar" x="{_num(undef_x)}" y="{_num(base_y - undef_h)}" '
        f'width="{_num(slot_w)}" height="{_num(undef_h)}" fill="{UNDEF_COLOR}"/>'
    )
    for value, frac in (("-1", 0.0), ("0", 0.5), ("1", 1.0)):
        parts.append(_tick_label(MARGIN_L + frac * bins * slot_w, base_y + 18, value))
    parts.append(_tick_label(undef_x + slot_w / 2, base_y + 18, "undef."))
    parts.append(_tick_label(MARGIN_L - 8, base_y + 4, "0", "end"))
    parts.append(_tick_label(MARGIN_L - 8, MARGIN_T + 4, _num(top), "end"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_curve(points: list[tuple[Fraction, Fraction | int]], title: str, x_label: str, y_label: str) -> str:
    """Line chart of a sweep: ratio on x, statistic on y."""
    if not points:
        raise ValueError("empty sweep: nothing to render")
    xs = [float(r) for r, _ in points]
    ys = [float(v) for _, v in points]
    y_top = max(ys + [1e-12])
    base_y = MARGIN_T + PLOT_H

    def px(x: float) -> float:
        return MARGIN_L + PLOT_W * x

    def py(y: float) -> float:
        return base_y - PLOT_H * (y / y_top)

    parts = _header(title)
    parts.append(_axis_frame())
    coords = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{coords}" fill="none" stroke="{BAR_COLOR}" stroke-width="2"/>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle class="point" cx="{_num(px(x))}" cy="{_num(py(y))}" r="3" fill="{BAR_COLOR}"/>')
    for value, frac in (("0", 0.0), ("0.5", 0.5), ("1", 1.0)):
        parts.append(_tick_label(px(frac), base_y + 18, value))
    parts.append(_tick_label(MARGIN_L + PLOT_W / 2, base_y + 40, x_label))
    parts.append(_tick_label(MARGIN_L - 8, base_y + 4, "0", "end"))
    parts.append(_tick_label(MARGIN_L - 8, MARGIN_T + 4, _num(y_top), "end"))
    parts.append(
        f'<text x="18" y="{MARGIN_T + PLOT_H / 2}" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {MARGIN_T + PLOT_H / 2})" text-anchor="middle">{_escape(y_label)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_heatmap(data: dict, title: str) -> str:
    """Cell grid: fairness bins on x, performance bins on y (upward)."""
    cells: list[list[int]] = data["cells"]
    f_bins = data["fairness_bins"]
    p_bins = data["perf_bins"]
    peak = max((c for row in cells for c in row), default=0)
    cell_w = PLOT_W / f_bins
    cell_h = PLOT_H / p_bins
    parts = _header(title)
    for i in range(f_bins):
        for j in range(p_bins):
            count = cells[i][j]
            level = 0 if peak == 0 else count / peak
            # white -> blue ramp
            red = round(255 - 183 * level)
            green = round(255 - 135 * level)
            blue = round(255 - 87 * level)
            x = MARGIN_L + i * cell_w
            y = MARGIN_T + PLOT_H - (j + 1) * cell_h
            parts.append(
                f'<rect class="cell" x="{_num(x)}" y="{_num(y)}" width="{_num(cell_w)}" '
                f'height="{_num(cell_h)}" fill="rgb({red},{green},{blue})"/>'
            )
    parts.append(_axis_frame())
    base_y = MARGIN_T + PLOT_H
    for value, frac in (("-1", 0.0), ("0", 0.5), ("1", 1.0)):
        parts.append(_tick_label(MARGIN_L + frac * PLOT_W, base_y + 18, value))
    for value, frac in (("0", 0.0), ("1", 1.0)):
        parts.append(_tick_label(MARGIN_L - 8, base_y - frac * PLOT_H + 4, value, "end"))
    parts.append(
        _tick_label(
            MARGIN_L + PLOT_W / 2,
            base_y + 40,
            f"undefined: fairness={data['fairness_undefined']}, performance={data['perf_undefined']}",
        )
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
