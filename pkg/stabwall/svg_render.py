"""
把 (β, α) 上半平面里的墙画成独立的 SVG 文档。

只有这里出现小数：坐标在输出时才转成浮点，统一 12 位有效数字。
"""
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from stabwall.config import svg_options
from stabwall.core_lattice import Rational, format_rational
from stabwall.errors import EmptyViewport
from stabwall.tilt_plane import Wall, WallKind
from utils.log_manager import get_logger

logger = get_logger('svg')

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(width)s" height="%(height)s" viewBox="0 0 %(width)s %(height)s" version="1.1" xmlns="http://www.w3.org/2000/svg">
<title>%(title)s</title>
<rect x="0" y="0" width="%(width)s" height="%(height)s" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""


class SvgCanvas:
    """β 向右、α 向上；β ∈ [beta_min, beta_max]，α ∈ [0, alpha_max]"""

    def __init__(self, beta_min: Fraction, beta_max: Fraction, alpha_max: Fraction,
                 width: int, height: int, precision: int = 12):
        self.beta_min = beta_min
        self.beta_max = beta_max
        self.alpha_max = alpha_max
        self.width = width
        self.height = height
        self.precision = precision
        self.commands: List[str] = []

    def fmt(self, value: float) -> str:
        text = "%.*g" % (self.precision, value)
        return "0" if text == "-0" else text

    def x(self, beta) -> float:
        return float((Fraction(beta) - self.beta_min) / (self.beta_max - self.beta_min)) * self.width

    def y(self, alpha) -> float:
        return (1 - float(alpha) / float(self.alpha_max)) * self.height

    @property
    def sx(self) -> float:
        return self.width / float(self.beta_max - self.beta_min)

    @property
    def sy(self) -> float:
        return self.height / float(self.alpha_max)

    def line(self, x1: float, y1: float, x2: float, y2: float, color: str, css_class: str):
        f = self.fmt
        self.commands.append(
            f'<line class="{css_class}" x1="{f(x1)}" y1="{f(y1)}" x2="{f(x2)}" y2="{f(y2)}" '
            f'style="stroke:{color};stroke-width:1"/>'
        )

    def arc(self, center: Fraction, radius_sq: Fraction, color: str, label: str):
        rho = math.sqrt(radius_sq)
        c = float(center)
        f = self.fmt
        x0, x1 = self.x(c - rho), self.x(c + rho)
        y0 = self.y(0)
        rx, ry = rho * self.sx, rho * self.sy
        # 从左端点顺时针扫到右端点，经过上半平面
        self.commands.append(
            f'<path class="wall" d="M {f(x0)} {f(y0)} A {f(rx)} {f(ry)} 0 0 1 {f(x1)} {f(y0)}" '
            f'style="fill:none;stroke:{color};stroke-width:1"><title>{label}</title></path>'
        )

    def band(self, color: str, label: str):
        f = self.fmt
        self.commands.append(
            f'<rect class="everywhere" x="0" y="0" width="{f(self.width)}" height="{f(self.height)}" '
            f'style="fill:{color};fill-opacity:0.3"><title>{label}</title></rect>'
        )

    def render(self, title: str) -> str:
        width, height = self.fmt(self.width), self.fmt(self.height)
        parts = [PREAMBLE % {"width": width, "height": height, "title": title}]
        parts.extend(item + '\n' for item in self.commands)
        parts.append(POSTAMBLE)
        return ''.join(parts)


def render_svg(walls: Iterable[Wall], viewport: Tuple[Rational, Rational, Rational],
               options: Optional[dict] = None) -> str:
    """
    walls 画在 viewport = (beta_min, beta_max, alpha_max) 里：两条坐标轴，
    每个半圆一条 path，竖直墙一条射线，everywhere 画成阴影带，empty 不画。
    """
    beta_min, beta_max, alpha_max = (Fraction(x) for x in viewport)
    if beta_min >= beta_max or alpha_max <= 0:
        raise EmptyViewport(
            f"视口退化: β ∈ [{format_rational(beta_min)}, {format_rational(beta_max)}], "
            f"α ≤ {format_rational(alpha_max)}"
        )
    opts = svg_options()
    if options:
        opts.update(options)
    canvas = SvgCanvas(beta_min, beta_max, alpha_max, int(opts.width), int(opts.height), int(opts.precision))

    walls = list(walls)
    for wall in walls:
        if wall.kind is WallKind.EVERYWHERE:
            canvas.band(opts.band_color, str(wall))

    # α = 0 的 β 轴，以及 β = 0 处的 α 轴（不在视口里时贴左边）
    canvas.line(0, canvas.y(0), canvas.width, canvas.y(0), opts.axis_color, "axis")
    axis_x = canvas.x(0) if beta_min <= 0 <= beta_max else 0
    canvas.line(axis_x, canvas.y(0), axis_x, 0, opts.axis_color, "axis")

    drawn = 0
    for wall in walls:
        if wall.is_circle:
            canvas.arc(wall.center, wall.radius_sq, opts.wall_color, str(wall))
            drawn += 1
        elif wall.kind is WallKind.VERTICAL:
            x = canvas.x(wall.beta)
            canvas.line(x, canvas.y(0), x, 0, opts.vertical_color, "vertical")
            drawn += 1
    logger.debug(f"画了 {drawn} 面墙，共 {len(walls)} 面")
    title = f"walls in [{format_rational(beta_min)}, {format_rational(beta_max)}] x (0, {format_rational(alpha_max)}]"
    return canvas.render(title)
