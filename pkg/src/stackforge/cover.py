"""Packing as exact cover, solved by Algorithm X over dancing links.

Columns are the box voxels plus one "use piece i" column per piece; rows are
candidate placements. The solver adds the paper-standard accelerators:
placement caching per (canonical shape, box), an anchor piece pinned to the
origin voxel, and MRV column selection with lowest-index tie-breaking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from .voxel import (
    Cells,
    Coord,
    NUM_ROTATIONS,
    ShapeError,
    canonical_form,
    normalize,
    rotate,
    rotation_images,
    translate,
)

Box = tuple[int, int, int]

DEFAULT_NODE_BUDGET = 5_000_000


class InfeasibleInputError(ValueError):
    """Input rejected before search (e.g. piece volumes do not sum to the box)."""


@dataclass(frozen=True)
class Placement:
    piece: int
    rotation: int
    offset: Coord
    cells: Cells


@dataclass
class CoverInstance:
    box: Box
    pieces: list[Cells]
    rows: list[Placement]
    rows_by_piece: list[list[int]]

    @property
    def n_voxel_columns(self) -> int:
        a, b, c = self.box
        return a * b * c

    @property
    def n_columns(self) -> int:
        return self.n_voxel_columns + len(self.pieces)

    def voxel_column(self, p: Coord) -> int:
        a, b, c = self.box
        x, y, z = p
        return (x * b + y) * c + z

    def row_columns(self, row_index: int) -> list[int]:
        pl = self.rows[row_index]
        cols = [self.voxel_column(p) for p in pl.cells]
        cols.append(self.n_voxel_columns + pl.piece)
        return cols


@dataclass
class SolveResult:
    status: Literal["solved", "unsat", "budget-exhausted"]
    solution: list[Placement] | None
    visited_nodes: int


def box_cells(box: Box) -> Cells:
    a, b, c = box
    return tuple((x, y, z) for x in range(a) for y in range(b) for z in range(c))


# ---- placement enumeration -----------------------------------------------

@lru_cache(maxsize=65536)
def _placement_cellsets(canon: Cells, box: Box) -> tuple[Cells, ...]:
    """Every in-bounds translate of every rotation image, deduped by cell set.

    Keyed by canonical form so rotated copies of a shape share one entry.
    """
    a, b, c = box
    out: set[Cells] = set()
    for img in rotation_images(canon):
        mx = max(x for x, _, _ in img)
        my = max(y for _, y, _ in img)
        mz = max(z for _, _, z in img)
        if mx >= a or my >= b or mz >= c:
            continue
        for tx in range(a - mx):
            for ty in range(b - my):
                for tz in range(c - mz):
                    out.add(translate(img, (tx, ty, tz)))
    return tuple(sorted(out))


def enumerate_placements(shape: Cells, box: Box, piece: int = 0) -> list[Placement]:
    """All distinct in-bounds placements of `shape`, with piece-relative
    (rotation, offset) recovered from the shared cache."""
    if not shape:
        raise ShapeError("cannot place an empty shape")
    images = rotation_images(shape)
    placements = []
    for cells in _placement_cellsets(canonical_form(shape), box):
        img = normalize(cells)
        mx = min(x for x, _, _ in cells)
        my = min(y for _, y, _ in cells)
        mz = min(z for _, _, z in cells)
        placements.append(Placement(piece, images[img], (mx, my, mz), cells))
    return placements


def place_cells(shape: Cells, rotation: int, anchor: Coord, box: Box) -> Cells | None:
    """Cells of `shape` rotated then anchored at `anchor`; None when any cell
    falls outside the box. This is the action-grammar placement semantics."""
    a, b, c = box
    cells = translate(normalize(rotate(normalize(shape), rotation)), anchor)
    for x, y, z in cells:
        if not (0 <= x < a and 0 <= y < b and 0 <= z < c):
            return None
    return cells


# ---- instance construction ------------------------------------------------

def build_cover_instance(pieces: list[Cells], box: Box) -> CoverInstance:
    a, b, c = box
    if a < 1 or b < 1 or c < 1:
        raise InfeasibleInputError(f"box dimensions must be positive, got {box}")
    total = sum(len(p) for p in pieces)
    if total != a * b * c:
        raise InfeasibleInputError(
            f"piece volumes sum to {total}, box volume is {a * b * c}"
        )
    rows: list[Placement] = []
    rows_by_piece: list[list[int]] = []
    for i, shape in enumerate(pieces):
        indices = []
        for pl in enumerate_placements(shape, box, piece=i):
            indices.append(len(rows))
            rows.append(pl)
        rows_by_piece.append(indices)
    return CoverInstance(box=box, pieces=list(pieces), rows=rows, rows_by_piece=rows_by_piece)


def select_anchor(ci: CoverInstance) -> int:
    """Piece with the fewest placements; ties broken by lowest index."""
    if not ci.pieces:
        raise InfeasibleInputError("empty instance")
    return min(range(len(ci.pieces)), key=lambda i: (len(ci.rows_by_piece[i]), i))


# ---- dancing links ---------------------------------------------------------

class _BudgetExhausted(Exception):
    pass


class DancingLinks:
    """Array-based DLX matrix over a fixed column count.

    Column headers occupy node ids [0, n_cols); the root is node n_cols.
    Traversal of active headers via right-links preserves ascending column
    order, so a strict min-scan implements MRV with lowest-index ties.
    """

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        root = n_cols
        self.root = root
        n = n_cols + 1
        self.left = [(i - 1) % n for i in range(n)]
        self.right = [(i + 1) % n for i in range(n)]
        self.up = list(range(n))
        self.down = list(range(n))
        self.col = list(range(n))
        self.row_id: list[int | None] = [None] * n
        self.size = [0] * n_cols
        self.visited_nodes = 0

    def add_row(self, row_id: int, cols: list[int]) -> None:
        first = None
        for c in sorted(cols):
            node = len(self.up)
            self.up.append(self.up[c])
            self.down.append(c)
            self.down[self.up[c]] = node
            self.up[c] = node
            self.col.append(c)
            self.row_id.append(row_id)
            self.size[c] += 1
            if first is None:
                first = node
                self.left.append(node)
                self.right.append(node)
            else:
                self.left.append(self.left[first])
                self.right.append(first)
                self.right[self.left[first]] = node
                self.left[first] = node

    def _cover(self, c: int) -> None:
        self.right[self.left[c]] = self.right[c]
        self.left[self.right[c]] = self.left[c]
        i = self.down[c]
        while i != c:
            j = self.right[i]
            while j != i:
                self.down[self.up[j]] = self.down[j]
                self.up[self.down[j]] = self.up[j]
                self.size[self.col[j]] -= 1
                j = self.right[j]
            i = self.down[i]

    def _uncover(self, c: int) -> None:
        i = self.up[c]
        while i != c:
            j = self.left[i]
            while j != i:
                self.size[self.col[j]] += 1
                self.down[self.up[j]] = j
                self.up[self.down[j]] = j
                j = self.left[j]
            i = self.up[i]
        self.right[self.left[c]] = c
        self.left[self.right[c]] = c

    def choose_column(self) -> int | None:
        best = None
        best_size = None
        c = self.right[self.root]
        while c != self.root:
            if best_size is None or self.size[c] < best_size:
                best = c
                best_size = self.size[c]
            c = self.right[c]
        return best

    def search(self, budget: int) -> list[int] | None:
        """First exact cover as a list of row ids, or None when unsat.

        Raises _BudgetExhausted once visited_nodes exceeds `budget`; a
        visited node is one row-selection event.
        """
        if self.right[self.root] == self.root:
            return []
        c = self.choose_column()
        if c is None or self.size[c] == 0:
            return None
        self._cover(c)
        r = self.down[c]
        while r != c:
            self.visited_nodes += 1
            if self.visited_nodes > budget:
                raise _BudgetExhausted
            j = self.right[r]
            while j != r:
                self._cover(self.col[j])
                j = self.right[j]
            sub = self.search(budget)
            j = self.left[r]
            while j != r:
                self._uncover(self.col[j])
                j = self.left[j]
            if sub is not None:
                sub.append(self.row_id[r])
                return sub
            r = self.down[r]
        self._uncover(c)
        return None


def _build_matrix(ci: CoverInstance, anchor_piece: int | None) -> DancingLinks:
    dlx = DancingLinks(ci.n_columns)
    origin_col = ci.voxel_column((0, 0, 0))
    for idx in range(len(ci.rows)):
        cols = ci.row_columns(idx)
        if anchor_piece is not None and ci.rows[idx].piece == anchor_piece:
            if origin_col not in cols:
                continue
        dlx.add_row(idx, cols)
    return dlx


def _validate_solution(ci: CoverInstance, placements: list[Placement]) -> None:
    covered: set[Coord] = set()
    used: set[int] = set()
    for pl in placements:
        if pl.piece in used:
            raise AssertionError(f"piece {pl.piece} used twice")
        used.add(pl.piece)
        overlap = covered & set(pl.cells)
        if overlap:
            raise AssertionError(f"overlapping cells {sorted(overlap)}")
        covered |= set(pl.cells)
    if used != set(range(len(ci.pieces))):
        raise AssertionError("not every piece used exactly once")
    if covered != set(box_cells(ci.box)):
        raise AssertionError("solution does not cover the box exactly")


def solve(
    ci: CoverInstance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    use_anchor: bool = True,
) -> SolveResult:
    """First exact cover, with anchored symmetry breaking and a shared node
    budget across the anchored attempt and its unanchored retry."""
    if node_budget <= 0:
        raise InfeasibleInputError("node_budget must be positive")
    anchor = select_anchor(ci) if use_anchor else None
    total_nodes = 0
    for attempt_anchor in ([anchor, None] if anchor is not None else [None]):
        dlx = _build_matrix(ci, attempt_anchor)
        try:
            rows = dlx.search(node_budget - total_nodes)
        except _BudgetExhausted:
            return SolveResult("budget-exhausted", None, total_nodes + dlx.visited_nodes)
        total_nodes += dlx.visited_nodes
        if rows is not None:
            placements = sorted((ci.rows[r] for r in rows), key=lambda p: p.piece)
            _validate_solution(ci, placements)
            return SolveResult("solved", placements, total_nodes)
        # anchored unsat: retry without the anchor restriction
    return SolveResult("unsat", None, total_nodes)
