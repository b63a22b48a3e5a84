"""Deterministic raster views of box occupancy plus the loss-free text grid.

Three fixed viewpoints: an isometric view from front-right-top, a front
elevation, and a top-down plan. Pure painter's-order polygon rasterization
with flat per-piece colors and per-axis face darkening; identical states
yield byte-identical PNGs.
"""

from __future__ import annotations

import io

from PIL import Image, ImageDraw

from .colors import EMPTY_GLYPH
from .voxel import Cells, Coord

Box = tuple[int, int, int]
Rgb = tuple[int, int, int]

# isometric basis (pixels): u = (x+y)*ISO_W, v = (x-y)*ISO_H - z*ISO_Z
ISO_W = 18
ISO_H = 9
ISO_Z = 20
CELL = 36
MARGIN = 14

BACKGROUND = (247, 247, 250)
OUTLINE = (45, 45, 55)
WIRE = (176, 176, 188)
TOP_SHADE = 1.0
XFACE_SHADE = 0.76
YFACE_SHADE = 0.58
FRONT_SHADE = 0.88
PLAN_SHADE = 1.0


def _shade(rgb: Rgb, factor: float) -> Rgb:
    return tuple(min(255, round(ch * factor)) for ch in rgb)


def _iso_project(p, ox, oy):
    x, y, z = p
    return (ox + (x + y) * ISO_W, oy + (x - y) * ISO_H - z * ISO_Z)


def _iso_canvas(box: Box):
    a, b, c = box
    us = [0, (a + b) * ISO_W]
    vs = [-b * ISO_H - c * ISO_Z, a * ISO_H]
    ox = MARGIN - min(us)
    oy = MARGIN - min(vs)
    width = max(us) - min(us) + 2 * MARGIN
    height = max(vs) - min(vs) + 2 * MARGIN
    return ox, oy, width, height


def iso_view(box: Box, occupancy: dict[Coord, int], colors: list[Rgb]) -> Image.Image:
    a, b, c = box
    ox, oy, width, height = _iso_canvas(box)
    img = Image.new("RGB", (width, height), BACKGROUND)
    draw = ImageDraw.Draw(img)

    corners = [
        (x, y, z) for x in (0, a) for y in (0, b) for z in (0, c)
    ]
    edges = [
        (i, j)
        for i in range(8)
        for j in range(i + 1, 8)
        if sum(ca != cb for ca, cb in zip(corners[i], corners[j])) == 1
    ]
    for i, j in edges:
        draw.line(
            [_iso_project(corners[i], ox, oy), _iso_project(corners[j], ox, oy)],
            fill=WIRE,
            width=1,
        )

    # painter's order: viewer sits toward +x, -y, +z
    cells = sorted(occupancy, key=lambda p: (p[0] - p[1] + p[2], p))
    for cell in cells:
        x, y, z = cell
        rgb = colors[occupancy[cell]]
        p = lambda wx, wy, wz: _iso_project((wx, wy, wz), ox, oy)
        top = [p(x, y, z + 1), p(x + 1, y, z + 1), p(x + 1, y + 1, z + 1), p(x, y + 1, z + 1)]
        xface = [p(x + 1, y, z), p(x + 1, y + 1, z), p(x + 1, y + 1, z + 1), p(x + 1, y, z + 1)]
        yface = [p(x, y, z), p(x + 1, y, z), p(x + 1, y, z + 1), p(x, y, z + 1)]
        draw.polygon(yface, fill=_shade(rgb, YFACE_SHADE), outline=OUTLINE)
        draw.polygon(xface, fill=_shade(rgb, XFACE_SHADE), outline=OUTLINE)
        draw.polygon(top, fill=_shade(rgb, TOP_SHADE), outline=OUTLINE)
    return img


def _grid_view(
    cols: int,
    rows: int,
    visible: dict[tuple[int, int], int],
    colors: list[Rgb],
    shade: float,
) -> Image.Image:
    width = cols * CELL + 2 * MARGIN
    height = rows * CELL + 2 * MARGIN
    img = Image.new("RGB", (width, height), BACKGROUND)
    draw = ImageDraw.Draw(img)
    for u in range(cols):
        for v in range(rows):
            x0 = MARGIN + u * CELL
            y0 = MARGIN + v * CELL
            rect = [x0, y0, x0 + CELL, y0 + CELL]
            piece = visible.get((u, v))
            if piece is None:
                draw.rectangle(rect, outline=WIRE)
            else:
                draw.rectangle(rect, fill=_shade(colors[piece], shade), outline=OUTLINE)
    return img


def front_view(box: Box, occupancy: dict[Coord, int], colors: list[Rgb]) -> Image.Image:
    """Front elevation looking along +y: columns are x, rows are z (up)."""
    a, b, c = box
    visible: dict[tuple[int, int], tuple[int, int]] = {}
    for (x, y, z), piece in occupancy.items():
        key = (x, c - 1 - z)
        cur = visible.get(key)
        if cur is None or y < cur[0]:
            visible[key] = (y, piece)
    flat = {k: piece for k, (_, piece) in visible.items()}
    return _grid_view(a, c, flat, colors, FRONT_SHADE)


def top_view(box: Box, occupancy: dict[Coord, int], colors: list[Rgb]) -> Image.Image:
    """Top-down plan looking along -z: columns are x, rows are y (down)."""
    a, b, c = box
    visible: dict[tuple[int, int], tuple[int, int]] = {}
    for (x, y, z), piece in occupancy.items():
        key = (x, y)
        cur = visible.get(key)
        if cur is None or z > cur[0]:
            visible[key] = (z, piece)
    flat = {k: piece for k, (_, piece) in visible.items()}
    return _grid_view(a, b, flat, colors, PLAN_SHADE)


def png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


VIEW_NAMES = ("iso", "front", "top")


def render_views(box: Box, occupancy: dict[Coord, int], colors: list[Rgb]) -> dict[str, bytes]:
    return {
        "iso": png_bytes(iso_view(box, occupancy, colors)),
        "front": png_bytes(front_view(box, occupancy, colors)),
        "top": png_bytes(top_view(box, occupancy, colors)),
    }


def text_grid(box: Box, occupancy: dict[Coord, int], glyphs: list[str]) -> str:
    """One character grid per z layer (bottom first); rows are y top-to-bottom,
    columns are x. Loss-free with respect to occupancy."""
    a, b, c = box
    lines = []
    for z in range(c):
        lines.append(f"z={z}")
        for y in range(b):
            row = []
            for x in range(a):
                piece = occupancy.get((x, y, z))
                row.append(EMPTY_GLYPH if piece is None else glyphs[piece])
            lines.append("".join(row))
    return "\n".join(lines)


def parse_text_grid(grid: str, glyphs: list[str]) -> dict[Coord, int]:
    """Inverse of text_grid, used to verify loss-freeness."""
    by_glyph = {g: i for i, g in enumerate(glyphs)}
    occupancy: dict[Coord, int] = {}
    z = -1
    y = 0
    for line in grid.splitlines():
        if line.startswith("z="):
            z = int(line[2:])
            y = 0
            continue
        for x, ch in enumerate(line):
            if ch != EMPTY_GLYPH:
                occupancy[(x, y, z)] = by_glyph[ch]
        y += 1
    return occupancy


def render_piece(cells: Cells, rgb: Rgb) -> bytes:
    """Isometric render of a single shape in its own bounding box."""
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    zs = [c[2] for c in cells]
    box = (max(xs) + 1, max(ys) + 1, max(zs) + 1)
    occupancy = {c: 0 for c in cells}
    return png_bytes(iso_view(box, occupancy, [rgb]))


def render_solution(instance) -> bytes:
    from .colors import color_entry

    occupancy: dict[Coord, int] = {}
    for pl in instance.solution:
        for cell in pl.cells:
            occupancy[cell] = pl.piece
    colors = [color_entry(color).rgb for _, color in instance.pieces]
    return png_bytes(iso_view(instance.box, occupancy, colors))
