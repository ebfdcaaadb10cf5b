from fractions import Fraction
from typing import Any

from jinja2 import Environment, PackageLoader

from hurwitz.geometry.circles import HALF
from hurwitz.geometry.regions import Region

SVG_SIZE = 512
SVG_DEPTH = 5

_env = Environment(
    loader=PackageLoader("hurwitz.geometry", "templates"),
    trim_blocks=True,
    lstrip_blocks=True,
    autoescape=True,
)


def fraction(value: Fraction) -> str:
    """Exact rational as "p/q", or "p" for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def px(value, size: int) -> str:
    return f"{(float(value) + 0.5) * size:.3f}"


def py(value, size: int) -> str:
    # svg y axis points down
    return f"{(0.5 - float(value)) * size:.3f}"


def scale(value, size: int) -> str:
    return f"{float(value) * size:.3f}"


_env.filters["fraction"] = fraction
_env.filters["px"] = px
_env.filters["py"] = py
_env.filters["scale"] = scale


def _shaded_cells(region: Region, depth: int) -> list[dict[str, Any]]:
    cells = []
    stack = [((-HALF, HALF, -HALF, HALF), 0)]
    while stack:
        box, level = stack.pop()
        status = region.classify_box(box, closure=True)
        if status is False:
            continue
        x0, x1, y0, y1 = box
        if status is None and level < depth:
            xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
            stack.extend(
                (b, level + 1)
                for b in ((x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1))
            )
            continue
        cells.append({"x0": x0, "y1": y1, "width": x1 - x0, "inside": bool(status)})
    return cells


def _boundaries(region: Region) -> tuple[list[dict], list[dict]]:
    circles, lines = [], []
    for c in region.constraints:
        label = f"{fraction(c.a)}|z|^2 + Re(conj({c.b}) z) + {fraction(c.c)}, {c.side()}"
        if c.is_line:
            if c.b_im:
                ends = [(x, -(c.b_re * x + c.c) / c.b_im) for x in (Fraction(-1), Fraction(1))]
            else:
                ends = [(-c.c / c.b_re, y) for y in (Fraction(-1), Fraction(1))]
            (x0, y0), (x1, y1) = ends
            lines.append({"x0": x0, "y0": y0, "x1": x1, "y1": y1, "label": label})
        else:
            center = c.center()
            circles.append(
                {
                    "cx": center.re,
                    "cy": center.im,
                    "r": float(c.radius_sq()) ** 0.5,
                    "label": label,
                }
            )
    return circles, lines


def render_region_svg(region: Region, title: str = "", depth: int = SVG_DEPTH) -> str:
    circles, lines = _boundaries(region)
    template = _env.get_template("region.svg.j2")
    return template.render(
        size=SVG_SIZE,
        title=title,
        empty=region.empty,
        cells=_shaded_cells(region, depth),
        circles=circles,
        lines=lines,
    )


def region_document(region: Region, title: str = "") -> dict[str, Any]:
    document = region.to_document()
    document["title"] = title
    return document
