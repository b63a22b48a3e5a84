"""Dataset persistence: puzzle manifests, atomic signature reservation, and
batch generation over (box, mode) cells.

Layout (flat, one directory per puzzle):
    <root>/<a>x<b>x<c>-<mode>-<sig12>/manifest.json + assembly.png + piece_*.png
    <root>/_signatures/<a>x<b>x<c>/<sig>.marker     # dedup reservations
    <root>/summary.json                             # batch bookkeeping
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .colors import color_entry
from .cover import Placement
from .generate import GenConfig, PuzzleInstance, generate_one_staged
from .voxel import as_cells

SCHEMA_VERSION = 1

MANIFEST_NAME = "manifest.json"


class DatasetError(RuntimeError):
    pass


def box_label(box) -> str:
    return "x".join(str(d) for d in box)


def parse_box(label: str) -> tuple[int, int, int]:
    parts = label.lower().split("x")
    if len(parts) != 3:
        raise DatasetError(f"box must look like AxBxC, got {label!r}")
    try:
        a, b, c = (int(p) for p in parts)
    except ValueError as exc:
        raise DatasetError(f"box must be integer triples: {label!r}") from exc
    if min(a, b, c) < 1:
        raise DatasetError(f"box dimensions must be positive: {label!r}")
    return (a, b, c)


def instance_id(instance: PuzzleInstance) -> str:
    return f"{box_label(instance.box)}-{instance.difficulty}-{instance.signature[:12]}"


# ---- manifest (the external file schema) ------------------------------------

def manifest_dict(instance: PuzzleInstance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "box": list(instance.box),
        "difficulty": instance.difficulty,
        "pieces": [
            {"color": color, "cells": [list(c) for c in cells]}
            for cells, color in instance.pieces
        ],
        "solution": [
            {
                "piece": pl.piece,
                "rotation_index": pl.rotation,
                "offset": list(pl.offset),
            }
            for pl in instance.solution
        ],
        "assembly_order": [
            {"piece": piece, "direction": direction}
            for piece, direction in instance.assembly_order
        ],
        "minimal_steps": instance.minimal_steps,
        "signature": instance.signature,
        "stats": {
            "visited_nodes": int(instance.stats.get("visited_nodes", 0)),
            "attempts": int(instance.stats.get("attempts", 0)),
        },
    }


def instance_from_manifest(data: dict) -> PuzzleInstance:
    from .cover import place_cells

    if data.get("schema_version") != SCHEMA_VERSION:
        raise DatasetError(f"unsupported schema_version {data.get('schema_version')!r}")
    box = tuple(int(d) for d in data["box"])
    pieces = [
        (as_cells(tuple(tuple(c) for c in p["cells"])), p["color"])
        for p in data["pieces"]
    ]
    solution = []
    for entry in data["solution"]:
        piece = int(entry["piece"])
        rotation = int(entry["rotation_index"])
        offset = tuple(int(v) for v in entry["offset"])
        cells = place_cells(pieces[piece][0], rotation, offset, box)
        if cells is None:
            raise DatasetError(f"solution placement out of bounds for piece {piece}")
        solution.append(Placement(piece, rotation, offset, cells))
    return PuzzleInstance(
        box=box,
        pieces=pieces,
        solution=solution,
        assembly_order=tuple(
            (int(e["piece"]), str(e["direction"])) for e in data["assembly_order"]
        ),
        difficulty=data["difficulty"],
        minimal_steps=int(data["minimal_steps"]),
        signature=data["signature"],
        stats=dict(data.get("stats", {})),
    )


def save_puzzle(root: Path, instance: PuzzleInstance, render: bool = True) -> Path:
    from .render import render_piece, render_solution

    pid = instance_id(instance)
    target = root / pid
    target.mkdir(parents=True, exist_ok=True)
    (target / MANIFEST_NAME).write_text(
        json.dumps(manifest_dict(instance), indent=2) + "\n", encoding="utf-8"
    )
    if render:
        (target / "assembly.png").write_bytes(render_solution(instance))
        for cells, color in instance.pieces:
            png = render_piece(cells, color_entry(color).rgb)
            (target / f"piece_{color}.png").write_bytes(png)
    return target


def load_puzzle(path: Path) -> PuzzleInstance:
    data = json.loads((path / MANIFEST_NAME).read_text(encoding="utf-8"))
    return instance_from_manifest(data)


def load_dataset(root: Path) -> dict[str, PuzzleInstance]:
    """All puzzles under root, keyed by directory-name id."""
    root = Path(root)
    out: dict[str, PuzzleInstance] = {}
    if not root.exists():
        return out
    for manifest in sorted(root.glob(f"*/{MANIFEST_NAME}")):
        out[manifest.parent.name] = load_puzzle(manifest.parent)
    return out


def reserve_signature(root: Path, box, signature: str) -> bool:
    """Create-exclusive marker file; success means this process owns the
    signature for this box size."""
    sig_dir = Path(root) / "_signatures" / box_label(box)
    sig_dir.mkdir(parents=True, exist_ok=True)
    marker = sig_dir / f"{signature}.marker"
    try:
        fd = os.open(marker, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        return False
    os.close(fd)
    return True


# ---- batch generation --------------------------------------------------------

@dataclass
class CellResult:
    box: tuple[int, int, int]
    mode: str
    accepted: int
    target: int
    rejections: Counter = field(default_factory=Counter)
    ids: list[str] = field(default_factory=list)


@dataclass
class BatchSummary:
    cells: list[CellResult]

    @property
    def accepted(self) -> int:
        return sum(c.accepted for c in self.cells)

    @property
    def target(self) -> int:
        return sum(c.target for c in self.cells)

    @property
    def rejections(self) -> Counter:
        total: Counter = Counter()
        for c in self.cells:
            total.update(c.rejections)
        return total

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "target": self.target,
            "rejections": dict(self.rejections),
            "cells": [
                {
                    "box": list(c.box),
                    "mode": c.mode,
                    "accepted": c.accepted,
                    "target": c.target,
                    "rejections": dict(c.rejections),
                    "ids": c.ids,
                }
                for c in self.cells
            ],
        }


def cell_seed(seed: int, box, mode: str) -> int:
    """Stable per-(box, mode) RNG seed so re-runs reproduce the sequence.
    Uses sha256, not hash(), which is salted per process."""
    key = f"{seed}:{box_label(box)}:{mode}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:6], "big")


def _generate_cell(args) -> CellResult:
    root, box, mode, target, cfg, seed, attempt_cap, render = args
    rng = random.Random(cell_seed(seed, box, mode))
    result = CellResult(box=box, mode=mode, accepted=0, target=target)
    calls = 0
    while result.accepted < target and calls < attempt_cap:
        calls += 1
        instance = generate_one_staged(cfg, rng, reasons=result.rejections)
        if instance is None:
            result.rejections["stage-exhausted"] += 1
            continue
        if not reserve_signature(root, box, instance.signature):
            result.rejections["duplicate-signature"] += 1
            continue
        try:
            save_puzzle(Path(root), instance, render=render)
        except OSError:
            try:
                save_puzzle(Path(root), instance, render=render)
            except OSError:
                result.rejections["write-failed"] += 1
                continue
        result.accepted += 1
        result.ids.append(instance_id(instance))
    return result


def generate_batch(
    root: Path,
    sizes: list[tuple[int, int, int]],
    modes: list[str],
    per_cell_target: int,
    base_cfg: GenConfig | None = None,
    seed: int = 0,
    workers: int = 1,
    attempt_cap_factor: int = 40,
    render: bool = True,
) -> BatchSummary:
    """Fill every (box, mode) cell up to per_cell_target de-duplicated
    instances; rejection reasons are aggregated per cell."""
    if per_cell_target <= 0:
        raise DatasetError("per_cell_target must be positive")
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    tasks = []
    for box in sizes:
        for mode in modes:
            if base_cfg is None:
                cfg = GenConfig(box=box, mode=mode)
            else:
                cfg = replace(base_cfg, box=box, mode=mode)
            cap = per_cell_target * attempt_cap_factor
            tasks.append((str(root), box, mode, per_cell_target, cfg, seed, cap, render))
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            cells = pool.map(_generate_cell, tasks)
    else:
        cells = [_generate_cell(t) for t in tasks]
    summary = BatchSummary(cells=cells)
    (root / "summary.json").write_text(
        json.dumps(summary.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    return summary
