"""Candidate sampling by difficulty mode and the staged generate-verify loop.

The sample-verify chain per candidate runs in the fixed order: structural
rules, exact-cover solvability, no isolated piece, optional linear assembly,
and (hard mode) the visited-nodes difficulty gate.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

from .assembly import (
    AssemblyPlan,
    RemovabilityMode,
    extract_linear_assembly,
    has_isolated_piece,
)
from .colors import assign_colors
from .cover import (
    DEFAULT_NODE_BUDGET,
    Box,
    Placement,
    build_cover_instance,
    solve,
)
from .voxel import (
    Cells,
    Coord,
    canonical_form,
    has_full_2x3_face,
    is_connected,
    neighbors6,
    normalize,
    puzzle_signature,
)

MODES = ("easy", "mid", "hard")


@dataclass(frozen=True)
class GenConfig:
    box: Box
    mode: str
    min_piece_stages: tuple[int, ...] = (4, 3)
    max_piece_cells: int = 5
    max_pieces: int | None = None
    attempts_per_stage: int = 400
    hard_min_visited_nodes: int = 500
    require_linear_assembly: bool = False
    removability_mode: RemovabilityMode = "full-slide"
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        a, b, c = self.box
        if min(a, b, c) < 1:
            raise ValueError(f"box dimensions must be positive: {self.box}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if list(self.min_piece_stages) != sorted(self.min_piece_stages, reverse=True):
            raise ValueError("min_piece_stages must be descending")
        if not self.min_piece_stages or min(self.min_piece_stages) < 1:
            raise ValueError("min_piece_stages must be positive")
        if self.max_piece_cells < max(self.min_piece_stages):
            raise ValueError("max_piece_cells must cover the strictest stage")
        if self.attempts_per_stage <= 0:
            raise ValueError("attempts_per_stage must be positive")

    @property
    def volume(self) -> int:
        a, b, c = self.box
        return a * b * c

    def piece_cap(self, min_piece: int) -> int:
        cap = self.volume // min_piece
        if self.max_pieces is not None:
            cap = min(cap, self.max_pieces)
        return cap


@dataclass(frozen=True)
class ValidityReport:
    volume_ok: bool
    connected_ok: bool
    size_ok: bool
    face_rule_ok: bool

    @property
    def ok(self) -> bool:
        return self.volume_ok and self.connected_ok and self.size_ok and self.face_rule_ok

    def failure(self) -> str | None:
        for name in ("volume", "connected", "size", "face_rule"):
            if not getattr(self, f"{name}_ok"):
                return name
        return None


@dataclass
class PuzzleInstance:
    box: Box
    pieces: list[tuple[Cells, str]]  # (normalized shape, color tag)
    solution: list[Placement]
    assembly_order: tuple[tuple[int, str], ...]
    difficulty: str
    minimal_steps: int
    signature: str
    stats: dict

    @property
    def shapes(self) -> list[Cells]:
        return [cells for cells, _ in self.pieces]

    @property
    def colors(self) -> list[str]:
        return [color for _, color in self.pieces]


def validate_partition(
    pieces: list[Cells], box: Box, min_piece: int, max_piece_cells: int
) -> ValidityReport:
    """Pure structural check: volume sum, connectivity, size bounds, 2x3 rule."""
    a, b, c = box
    return ValidityReport(
        volume_ok=sum(len(p) for p in pieces) == a * b * c,
        connected_ok=all(is_connected(p) for p in pieces),
        size_ok=all(min_piece <= len(p) <= max_piece_cells for p in pieces),
        face_rule_ok=all(not has_full_2x3_face(p) for p in pieces),
    )


# ---- easy mode: cuboid multisets -------------------------------------------

def _easy_cuboid_dims(box: Box, min_piece: int, max_piece_cells: int) -> list[Coord]:
    """Sorted dimension triples with at least two equal sides that fit the box
    in some orientation, within the volume bounds, and free of 2x3 faces."""
    bx = sorted(box)
    out = []
    for dx in range(1, bx[2] + 1):
        for dy in range(dx, bx[2] + 1):
            for dz in range(dy, bx[2] + 1):
                dims = (dx, dy, dz)
                if len(set(dims)) == 3:
                    continue
                vol = dx * dy * dz
                if not min_piece <= vol <= max_piece_cells:
                    continue
                if any(d > m for d, m in zip(dims, bx)):
                    continue
                if dy >= 2 and dz >= 3:  # would contain a filled 2x3 face
                    continue
                out.append(dims)
    return out


def _cuboid_cells(dims: Coord) -> Cells:
    dx, dy, dz = dims
    return tuple(
        (x, y, z) for x in range(dx) for y in range(dy) for z in range(dz)
    )


def sample_easy(cfg: GenConfig, min_piece: int, rng: random.Random) -> list[Cells] | None:
    """Greedy multiset of easy cuboids summing to the box volume; packability
    is verified downstream by the exact-cover solver."""
    options = _easy_cuboid_dims(cfg.box, min_piece, cfg.max_piece_cells)
    if not options:
        return None
    cap = cfg.piece_cap(min_piece)
    min_vol = min(d[0] * d[1] * d[2] for d in options)
    for _ in range(60):
        remaining = cfg.volume
        chosen: list[Coord] = []
        while remaining > 0 and len(chosen) < cap:
            fits = [d for d in options if d[0] * d[1] * d[2] <= remaining]
            if not fits:
                break
            pick = fits[rng.randrange(len(fits))]
            chosen.append(pick)
            remaining -= pick[0] * pick[1] * pick[2]
            if 0 < remaining < min_vol:
                break  # dead end, restart
        if remaining == 0:
            return [_cuboid_cells(d) for d in chosen]
    return None


# ---- mid / hard: seeded connected growth ------------------------------------

def _grow_partition(
    cfg: GenConfig,
    min_piece: int,
    rng: random.Random,
    planar: bool,
) -> list[Cells] | None:
    """Round-robin frontier growth from random seeds; each planar piece is
    pinned to the plane through its seed along a random axis."""
    a, b, c = cfg.box
    vol = cfg.volume
    lo = math.ceil(vol / cfg.max_piece_cells)
    hi = min(cfg.piece_cap(min_piece), vol // min_piece)
    if lo > hi:
        return None
    k = rng.randint(lo, hi)
    all_cells = [(x, y, z) for x in range(a) for y in range(b) for z in range(c)]
    seeds = rng.sample(all_cells, k)
    planes: list[tuple[int, int] | None] = []
    for seed in seeds:
        if planar:
            axis = rng.randrange(3)
            planes.append((axis, seed[axis]))
        else:
            planes.append(None)
    pieces: list[set[Coord]] = [{s} for s in seeds]
    unassigned = set(all_cells) - set(seeds)
    while unassigned:
        progressed = False
        for i in range(k):
            if len(pieces[i]) >= cfg.max_piece_cells:
                continue
            frontier = sorted(
                nb
                for p in pieces[i]
                for nb in neighbors6(p)
                if nb in unassigned
                and (planes[i] is None or nb[planes[i][0]] == planes[i][1])
            )
            if not frontier:
                continue
            pick = frontier[rng.randrange(len(frontier))]
            pieces[i].add(pick)
            unassigned.discard(pick)
            progressed = True
            if not unassigned:
                break
        if not progressed:
            return None  # orphaned voxels: dead-end partition
    if any(len(p) < min_piece for p in pieces):
        return None
    return [tuple(sorted(p)) for p in pieces]


def sample_mid(cfg: GenConfig, min_piece: int, rng: random.Random) -> list[Cells] | None:
    return _grow_partition(cfg, min_piece, rng, planar=True)


def sample_hard(cfg: GenConfig, min_piece: int, rng: random.Random) -> list[Cells] | None:
    partition = _grow_partition(cfg, min_piece, rng, planar=False)
    if partition is None:
        return None
    if _has_duplicate_shapes(partition):
        partition = repair_uniqueness(partition, min_piece, cfg.max_piece_cells, rng)
    return partition


def _has_duplicate_shapes(pieces: list[Cells]) -> bool:
    canon = [canonical_form(p) for p in pieces]
    return len(set(canon)) < len(canon)


def repair_uniqueness(
    partition: list[Cells],
    min_piece: int,
    max_piece_cells: int,
    rng: random.Random,
) -> list[Cells] | None:
    """Transfer boundary voxels between 6-adjacent pieces until canonical
    forms are pairwise distinct or the budget (3x piece count) runs out."""
    pieces = [set(p) for p in partition]
    budget = 3 * len(pieces)
    while budget > 0:
        canon = [canonical_form(tuple(sorted(p))) for p in pieces]
        dup_counts = Counter(canon)
        dup_idx = [i for i, cf in enumerate(canon) if dup_counts[cf] > 1]
        if not dup_idx:
            return [tuple(sorted(p)) for p in pieces]
        owner = {cell: i for i, p in enumerate(pieces) for cell in p}
        candidates: list[tuple[int, int, Coord]] = []
        for i in dup_idx:
            for cell in pieces[i]:
                for nb in neighbors6(cell):
                    j = owner.get(nb)
                    if j is None or j == i:
                        continue
                    # transfers in both directions across this boundary face
                    candidates.append((i, j, cell))
                    candidates.append((j, i, nb))
        ok = []
        for donor, recipient, cell in sorted(set(candidates)):
            if cell not in pieces[donor]:
                continue
            if len(pieces[donor]) - 1 < min_piece:
                continue
            if len(pieces[recipient]) + 1 > max_piece_cells:
                continue
            if not any(nb in pieces[recipient] for nb in neighbors6(cell)):
                continue
            new_donor = tuple(sorted(pieces[donor] - {cell}))
            new_recipient = tuple(sorted(pieces[recipient] | {cell}))
            if not is_connected(new_donor) or not is_connected(new_recipient):
                continue
            if has_full_2x3_face(new_donor) or has_full_2x3_face(new_recipient):
                continue
            ok.append((donor, recipient, cell))
        if not ok:
            return None
        donor, recipient, cell = ok[rng.randrange(len(ok))]
        pieces[donor].discard(cell)
        pieces[recipient].add(cell)
        budget -= 1
    return None


_SAMPLERS = {"easy": sample_easy, "mid": sample_mid, "hard": sample_hard}


def generate_one_staged(
    cfg: GenConfig,
    rng: random.Random,
    reasons: Counter | None = None,
) -> PuzzleInstance | None:
    """One staged candidate search: loop min-piece stages, sample by mode and
    run the five-step verification chain; first full pass wins."""
    sampler = _SAMPLERS[cfg.mode]
    note = reasons if reasons is not None else Counter()
    attempts = 0
    for min_piece in cfg.min_piece_stages:
        for _ in range(cfg.attempts_per_stage):
            attempts += 1
            shapes = sampler(cfg, min_piece, rng)
            if shapes is None:
                note["sample-failed"] += 1
                continue
            report = validate_partition(shapes, cfg.box, min_piece, cfg.max_piece_cells)
            if not report.ok:
                note[f"structure-{report.failure()}"] += 1
                continue
            if cfg.mode == "hard" and _has_duplicate_shapes(shapes):
                note["duplicate-shapes"] += 1
                continue
            result = solve(build_cover_instance(shapes, cfg.box), cfg.node_budget)
            if result.status == "budget-exhausted":
                note["solver-budget"] += 1
                continue
            if result.status != "solved":
                note["unsat"] += 1
                continue
            placed = [p.cells for p in result.solution]
            if has_isolated_piece(placed):
                note["isolated-piece"] += 1
                continue
            plan = extract_linear_assembly(placed, cfg.box, cfg.removability_mode)
            if cfg.require_linear_assembly and plan is None:
                note["no-linear-assembly"] += 1
                continue
            if cfg.mode == "hard" and result.visited_nodes < cfg.hard_min_visited_nodes:
                note["below-difficulty-threshold"] += 1
                continue
            colors = assign_colors(len(shapes))
            shapes = [normalize(s) for s in shapes]
            return PuzzleInstance(
                box=cfg.box,
                pieces=list(zip(shapes, colors)),
                solution=result.solution,
                assembly_order=plan.order if plan is not None else (),
                difficulty=cfg.mode,
                minimal_steps=len(shapes),
                signature=puzzle_signature(shapes),
                stats={"visited_nodes": result.visited_nodes, "attempts": attempts},
            )
    return None


def reverify(instance: PuzzleInstance, cfg: GenConfig) -> str | None:
    """Independent re-check of a persisted instance against the full chain.
    Returns None when everything holds, else a failure tag."""
    from .assembly import replay_assembly
    from .cover import place_cells

    shapes = instance.shapes
    stage_floor = min(cfg.min_piece_stages)
    report = validate_partition(shapes, instance.box, stage_floor, cfg.max_piece_cells)
    if not report.ok:
        return f"structure-{report.failure()}"
    covered: set[Coord] = set()
    for pl in instance.solution:
        if place_cells(shapes[pl.piece], pl.rotation, pl.offset, instance.box) != pl.cells:
            return "solution-placement-mismatch"
        if covered & set(pl.cells):
            return "solution-overlap"
        covered |= set(pl.cells)
    a, b, c = instance.box
    if len(covered) != a * b * c:
        return "solution-coverage"
    result = solve(build_cover_instance(shapes, instance.box), cfg.node_budget)
    if result.status != "solved":
        return "not-solvable"
    placed = [p.cells for p in instance.solution]
    if has_isolated_piece(placed):
        return "isolated-piece"
    if cfg.require_linear_assembly:
        if not instance.assembly_order:
            return "missing-assembly"
        plan = AssemblyPlan(order=instance.assembly_order, mode=cfg.removability_mode)
        if not replay_assembly(plan, placed, instance.box):
            return "assembly-replay"
    if instance.difficulty == "hard" and (
        instance.stats.get("visited_nodes", 0) < cfg.hard_min_visited_nodes
    ):
        return "below-difficulty-threshold"
    if instance.signature != puzzle_signature(shapes):
        return "signature-mismatch"
    return None
