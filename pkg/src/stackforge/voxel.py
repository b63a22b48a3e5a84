"""Integer-lattice voxel geometry: shapes, the 24-element rotation group,
canonical forms and puzzle signatures.

A shape is a duplicate-free tuple of (x, y, z) cells, kept sorted. All
functions are pure; nothing here knows about boxes or pieces.
"""

from __future__ import annotations

import hashlib
from collections import deque
from functools import lru_cache

Coord = tuple[int, int, int]
Cells = tuple[Coord, ...]
Matrix = tuple[tuple[int, int, int], ...]


class ShapeError(ValueError):
    """Raised for geometrically invalid inputs (e.g. empty shapes)."""


def as_cells(cells) -> Cells:
    """Sorted duplicate-free cell tuple; rejects empty input."""
    out = tuple(sorted({(int(x), int(y), int(z)) for x, y, z in cells}))
    if not out:
        raise ShapeError("shape must contain at least one cell")
    return out


# ---- rotation group ------------------------------------------------------

_ROT_X: Matrix = ((1, 0, 0), (0, 0, -1), (0, 1, 0))
_ROT_Y: Matrix = ((0, 0, 1), (0, 1, 0), (-1, 0, 0))
_ROT_Z: Matrix = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
_IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _det(m: Matrix) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _enumerate_rotations() -> tuple[Matrix, ...]:
    # Breadth-first closure of {identity} under left-composition with the
    # three +90 degree axis rotations, in x, y, z order. The enumeration
    # order is part of the external contract (rotation_index stability).
    seen = {_IDENTITY}
    order = [_IDENTITY]
    queue = deque([_IDENTITY])
    while queue:
        m = queue.popleft()
        for gen in (_ROT_X, _ROT_Y, _ROT_Z):
            n = _matmul(gen, m)
            if n not in seen:
                seen.add(n)
                order.append(n)
                queue.append(n)
    assert len(order) == 24 and all(_det(m) == 1 for m in order)
    return tuple(order)


ROTATIONS: tuple[Matrix, ...] = _enumerate_rotations()
NUM_ROTATIONS = len(ROTATIONS)


def rotation_matrix(index: int) -> Matrix:
    if not 0 <= index < NUM_ROTATIONS:
        raise ShapeError(f"rotation index {index} outside [0, {NUM_ROTATIONS})")
    return ROTATIONS[index]


def apply_matrix(m: Matrix, p: Coord) -> Coord:
    x, y, z = p
    return (
        m[0][0] * x + m[0][1] * y + m[0][2] * z,
        m[1][0] * x + m[1][1] * y + m[1][2] * z,
        m[2][0] * x + m[2][1] * y + m[2][2] * z,
    )


# ---- shape operations ----------------------------------------------------

def normalize(cells: Cells) -> Cells:
    """Translate so the per-axis minimum is zero."""
    if not cells:
        raise ShapeError("cannot normalize an empty shape")
    mx = min(x for x, _, _ in cells)
    my = min(y for _, y, _ in cells)
    mz = min(z for _, _, z in cells)
    return tuple(sorted((x - mx, y - my, z - mz) for x, y, z in cells))


def translate(cells: Cells, d: Coord) -> Cells:
    dx, dy, dz = d
    return tuple(sorted((x + dx, y + dy, z + dz) for x, y, z in cells))


def rotate(cells: Cells, index: int) -> Cells:
    """Apply rotation `index`; the result is sorted but not re-normalized."""
    if not cells:
        raise ShapeError("cannot rotate an empty shape")
    m = rotation_matrix(index)
    return tuple(sorted(apply_matrix(m, p) for p in cells))


def rotation_images(cells: Cells) -> dict[Cells, int]:
    """Normalized rotation image -> lowest rotation index producing it."""
    images: dict[Cells, int] = {}
    norm = normalize(cells)
    for r in range(NUM_ROTATIONS):
        img = normalize(rotate(norm, r))
        images.setdefault(img, r)
    return images


@lru_cache(maxsize=65536)
def _canonical(norm: Cells) -> Cells:
    return min(normalize(rotate(norm, r)) for r in range(NUM_ROTATIONS))


def canonical_form(cells: Cells) -> Cells:
    """Lexicographically smallest sorted cell list over all 24 rotations."""
    if not cells:
        raise ShapeError("cannot canonicalize an empty shape")
    return _canonical(normalize(tuple(cells)))


def neighbors6(p: Coord) -> tuple[Coord, ...]:
    x, y, z = p
    return (
        (x + 1, y, z), (x - 1, y, z),
        (x, y + 1, z), (x, y - 1, z),
        (x, y, z + 1), (x, y, z - 1),
    )


def is_connected(cells: Cells) -> bool:
    """Face (6-neighbor) connectivity."""
    if not cells:
        raise ShapeError("connectivity undefined for an empty shape")
    cellset = set(cells)
    seen = {cells[0]}
    queue = deque([cells[0]])
    while queue:
        p = queue.popleft()
        for nb in neighbors6(p):
            if nb in cellset and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(cellset)


# Axis pairs spanning each plane family; the third axis is held fixed.
_PLANES = ((0, 1, 2), (1, 2, 0), (0, 2, 1))


def has_full_2x3_face(cells: Cells) -> bool:
    """True when some axis-aligned slice contains a filled 2x3 or 3x2 rectangle."""
    if not cells:
        raise ShapeError("face rule undefined for an empty shape")
    cellset = set(cells)
    for u, v, w in _PLANES:
        layers: dict[int, set[tuple[int, int]]] = {}
        for p in cells:
            layers.setdefault(p[w], set()).add((p[u], p[v]))
        for points in layers.values():
            for du, dv in ((2, 3), (3, 2)):
                for a, b in points:
                    if all(
                        (a + i, b + j) in points
                        for i in range(du)
                        for j in range(dv)
                    ):
                        return True
    return False


# ---- signatures ----------------------------------------------------------

def serialize_canonical(pieces: list[Cells]) -> str:
    """Canonical multiset wire form: cells as decimal triples, ';' between
    cells, '|' between sorted canonical pieces."""
    canon = sorted(canonical_form(p) for p in pieces)
    return "|".join(";".join(f"{x},{y},{z}" for x, y, z in p) for p in canon)


def puzzle_signature(pieces: list[Cells]) -> str:
    """SHA-256 digest of the sorted canonical piece multiset (lowercase hex)."""
    if not pieces:
        raise ShapeError("signature requires at least one piece")
    return hashlib.sha256(serialize_canonical(pieces).encode("utf-8")).hexdigest()


def shape_extent(cells: Cells) -> Coord:
    """(dx, dy, dz) bounding-box size of a normalized or raw shape."""
    xs = [x for x, _, _ in cells]
    ys = [y for _, y, _ in cells]
    zs = [z for _, _, z in cells]
    return (max(xs) - min(xs) + 1, max(ys) - min(ys) + 1, max(zs) - min(zs) + 1)
