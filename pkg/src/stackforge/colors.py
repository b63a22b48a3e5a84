"""Fixed 32-entry piece color palette.

Entries are ordered so that any prefix is well separated in hue (golden-angle
stepping around the wheel); each entry carries a unique one-character glyph
for the loss-free text-grid rendering.
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass


@dataclass(frozen=True)
class ColorEntry:
    name: str
    rgb: tuple[int, int, int]
    glyph: str


_WHEEL_NAMES = [
    "red", "vermilion", "orange", "amber", "gold", "yellow", "chartreuse",
    "lime", "green", "emerald", "jade", "teal", "cyan", "sky", "azure",
    "cerulean", "blue", "sapphire", "indigo", "iris", "violet", "purple",
    "orchid", "magenta", "fuchsia", "pink", "rose", "blush", "crimson",
    "ruby", "scarlet", "brick",
]

_GLYPHS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567"

EMPTY_GLYPH = "."


def _build_palette() -> tuple[ColorEntry, ...]:
    n = len(_WHEEL_NAMES)
    # golden-angle permutation of the hue wheel: consecutive picks stay far apart
    step = 13  # coprime with 32; 13/32 ~ golden ratio conjugate
    order = [(i * step) % n for i in range(n)]
    entries = []
    for k, idx in enumerate(order):
        hue = idx / n
        r, g, b = colorsys.hsv_to_rgb(hue, 0.72, 0.92)
        entries.append(
            ColorEntry(
                name=_WHEEL_NAMES[idx],
                rgb=(round(r * 255), round(g * 255), round(b * 255)),
                glyph=_GLYPHS[k],
            )
        )
    return tuple(entries)


PALETTE: tuple[ColorEntry, ...] = _build_palette()

_BY_NAME = {e.name: e for e in PALETTE}


def color_entry(name: str) -> ColorEntry:
    return _BY_NAME[name]


def assign_colors(count: int) -> list[str]:
    """Distinct color tags for `count` pieces, in palette order."""
    if count > len(PALETTE):
        raise ValueError(f"at most {len(PALETTE)} pieces supported, got {count}")
    return [PALETTE[i].name for i in range(count)]
