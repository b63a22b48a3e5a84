"""Linear disassembly: removability along axis directions, the no-isolated-piece
check, and greedy extraction of an assembly order.

Cells outside the box are free space; a removed piece exits the box by pure
translation. "one-step" tests a single unit translation, "full-slide" requires
the whole exit path to be collision-free (strictly stronger, default).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .voxel import Cells, Coord, neighbors6

Box = tuple[int, int, int]
RemovabilityMode = Literal["one-step", "full-slide"]

DIRECTIONS: tuple[str, ...] = ("+x", "-x", "+y", "-y", "+z", "-z")
DIRECTION_VECTORS: dict[str, Coord] = {
    "+x": (1, 0, 0),
    "-x": (-1, 0, 0),
    "+y": (0, 1, 0),
    "-y": (0, -1, 0),
    "+z": (0, 0, 1),
    "-z": (0, 0, -1),
}


@dataclass(frozen=True)
class AssemblyPlan:
    order: tuple[tuple[int, str], ...]
    mode: RemovabilityMode

    def __len__(self) -> int:
        return len(self.order)


def _inside(p: Coord, box: Box) -> bool:
    a, b, c = box
    return 0 <= p[0] < a and 0 <= p[1] < b and 0 <= p[2] < c


def removable(
    piece_cells: Cells,
    other_cells: frozenset | set,
    direction: str,
    box: Box,
    mode: RemovabilityMode = "full-slide",
) -> bool:
    """Can the piece translate along `direction` without entering any
    occupied voxel? full-slide repeats unit steps until fully outside."""
    dx, dy, dz = DIRECTION_VECTORS[direction]
    cells = list(piece_cells)
    while True:
        cells = [(x + dx, y + dy, z + dz) for x, y, z in cells]
        inside = [p for p in cells if _inside(p, box)]
        if any(p in other_cells for p in inside):
            return False
        if mode == "one-step" or not inside:
            return True


def has_isolated_piece(placed: list[Cells]) -> bool:
    """True when some piece has no 6-neighbor contact with any other piece.
    A single-piece configuration is not isolated by convention."""
    if not placed:
        raise ValueError("need at least one piece")
    if len(placed) == 1:
        return False
    owner: dict[Coord, int] = {}
    for i, cells in enumerate(placed):
        for p in cells:
            owner[p] = i
    for i, cells in enumerate(placed):
        touches = False
        for p in cells:
            for nb in neighbors6(p):
                j = owner.get(nb)
                if j is not None and j != i:
                    touches = True
                    break
            if touches:
                break
        if not touches:
            return True
    return False


def extract_linear_assembly(
    placed: list[Cells],
    box: Box,
    mode: RemovabilityMode = "full-slide",
) -> AssemblyPlan | None:
    """Greedy disassembly: scan remaining pieces in ascending index and
    directions in the fixed order, remove the first removable pair, repeat.
    The reversed removal list is the assembly order; None when stuck."""
    remaining = set(range(len(placed)))
    removal: list[tuple[int, str]] = []
    while remaining:
        occupied = {p for i in remaining for p in placed[i]}
        found = None
        for i in sorted(remaining):
            others = occupied - set(placed[i])
            for d in DIRECTIONS:
                if removable(placed[i], others, d, box, mode):
                    found = (i, d)
                    break
            if found:
                break
        if found is None:
            return None
        removal.append(found)
        remaining.discard(found[0])
    return AssemblyPlan(order=tuple(reversed(removal)), mode=mode)


def replay_assembly(
    plan: AssemblyPlan,
    placed: list[Cells],
    box: Box,
) -> bool:
    """Forward re-simulation: insert pieces in plan order; each insertion is
    the time-reverse of a removal along the recorded direction, so it is
    collision-free iff the final pose can slide out past the pieces already
    present (checked under the plan's own mode)."""
    if sorted(i for i, _ in plan.order) != list(range(len(placed))):
        return False
    present: set[Coord] = set()
    for piece, direction in plan.order:
        cells = placed[piece]
        if any(p in present for p in cells):
            return False
        if not removable(cells, present, direction, box, plan.mode):
            return False
        present.update(cells)
    a, b, c = box
    return len(present) == a * b * c
