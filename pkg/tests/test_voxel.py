import random
from itertools import permutations

import pytest

from stackforge.voxel import (
    NUM_ROTATIONS,
    ROTATIONS,
    ShapeError,
    apply_matrix,
    as_cells,
    canonical_form,
    has_full_2x3_face,
    is_connected,
    neighbors6,
    normalize,
    puzzle_signature,
    rotate,
    rotation_images,
    serialize_canonical,
)

BAR2 = as_cells([(0, 0, 0), (1, 0, 0)])
BAR3 = as_cells([(0, 0, 0), (1, 0, 0), (2, 0, 0)])
L_TRI = as_cells([(0, 0, 0), (1, 0, 0), (1, 1, 0)])


# ---- independent oracles -------------------------------------------------

def _oracle_rotations():
    """All 24 proper signed-permutation matrices, built independently."""
    mats = []
    for perm in permutations(range(3)):
        for sx in (1, -1):
            for sy in (1, -1):
                for sz in (1, -1):
                    m = [[0, 0, 0] for _ in range(3)]
                    m[0][perm[0]] = sx
                    m[1][perm[1]] = sy
                    m[2][perm[2]] = sz
                    det = (
                        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
                    )
                    if det == 1:
                        mats.append(tuple(tuple(r) for r in m))
    return mats


def _oracle_normalize(cells):
    mx = min(c[0] for c in cells)
    my = min(c[1] for c in cells)
    mz = min(c[2] for c in cells)
    return tuple(sorted((x - mx, y - my, z - mz) for x, y, z in cells))


def _oracle_rotation_class(cells):
    """Frozenset of all normalized rotation images; rotation-invariant key
    that does not rely on canonical_form."""
    out = set()
    for m in _oracle_rotations():
        img = [
            (
                m[0][0] * x + m[0][1] * y + m[0][2] * z,
                m[1][0] * x + m[1][1] * y + m[1][2] * z,
                m[2][0] * x + m[2][1] * y + m[2][2] * z,
            )
            for x, y, z in cells
        ]
        out.add(_oracle_normalize(img))
    return frozenset(out)


def _oracle_tetracubes():
    """Grow all connected 4-cell shapes, dedup by rotation class."""
    classes = {}
    frontier = [{(0, 0, 0)}]
    for _ in range(3):
        grown = []
        seen = set()
        for shape in frontier:
            for p in shape:
                for nb in neighbors6(p):
                    if nb in shape:
                        continue
                    new = frozenset(shape | {nb})
                    if new not in seen:
                        seen.add(new)
                        grown.append(set(new))
        frontier = grown
    for shape in frontier:
        key = _oracle_rotation_class(tuple(sorted(shape)))
        classes.setdefault(key, tuple(sorted(shape)))
    return classes


# Frozen golden value, computed by the growth oracle above: the number of
# distinct 4-cell polycubes under proper rotations (chiral pairs distinct).
TETRACUBE_COUNT = 8


def _has_2x3_window_oracle(cells):
    """Sliding-window check over explicit coordinates in all three planes."""
    s = set(cells)
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    zs = [c[2] for c in cells]
    lo = (min(xs), min(ys), min(zs))
    hi = (max(xs), max(ys), max(zs))
    for du, dv in ((2, 3), (3, 2)):
        # XY planes
        for z in range(lo[2], hi[2] + 1):
            for x0 in range(lo[0], hi[0] - du + 2):
                for y0 in range(lo[1], hi[1] - dv + 2):
                    if all((x0 + i, y0 + j, z) in s for i in range(du) for j in range(dv)):
                        return True
        # YZ planes
        for x in range(lo[0], hi[0] + 1):
            for y0 in range(lo[1], hi[1] - du + 2):
                for z0 in range(lo[2], hi[2] - dv + 2):
                    if all((x, y0 + i, z0 + j) in s for i in range(du) for j in range(dv)):
                        return True
        # XZ planes
        for y in range(lo[1], hi[1] + 1):
            for x0 in range(lo[0], hi[0] - du + 2):
                for z0 in range(lo[2], hi[2] - dv + 2):
                    if all((x0 + i, y, z0 + j) in s for i in range(du) for j in range(dv)):
                        return True
    return False


def _random_shape(rng, max_cells=12):
    n = rng.randint(1, max_cells)
    shape = {(0, 0, 0)}
    while len(shape) < n:
        base = rng.choice(sorted(shape))
        shape.add(rng.choice(neighbors6(base)))
    return as_cells(shape)


# ---- rotation group ------------------------------------------------------

def test_rotation_group_is_the_24_proper_rotations():
    assert NUM_ROTATIONS == 24
    assert set(ROTATIONS) == set(_oracle_rotations())
    assert ROTATIONS[0] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_rotation_group_closed_under_composition():
    group = set(ROTATIONS)
    for a in ROTATIONS:
        for b in ROTATIONS:
            prod = tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                for i in range(3)
            )
            assert prod in group


# ---- normalize -----------------------------------------------------------

@pytest.mark.parametrize(
    "cells,expected",
    [
        ([(5, 5, 5)], [(0, 0, 0)]),
        ([(0, 0, 0), (1, 0, 0)], [(0, 0, 0), (1, 0, 0)]),
        ([(2, 3, 1), (2, 4, 1)], [(0, 0, 0), (0, 1, 0)]),
    ],
)
def test_normalize_examples(cells, expected):
    assert normalize(as_cells(cells)) == tuple(expected)


def test_normalize_preserves_count_and_displacements():
    rng = random.Random(7)
    for _ in range(50):
        shape = _random_shape(rng)
        norm = normalize(shape)
        assert len(norm) == len(shape)
        deltas = lambda cs: sorted(
            (b[0] - a[0], b[1] - a[1], b[2] - a[2])
            for a in cs
            for b in cs
        )
        assert deltas(norm) == deltas(shape)


def test_normalize_rejects_empty():
    with pytest.raises(ShapeError):
        normalize(())


# ---- rotate --------------------------------------------------------------

def test_rotate_identity_is_noop():
    assert rotate(L_TRI, 0) == L_TRI


def test_rotate_quarter_turn_about_z():
    # (x,y,z) -> (-y,x,z); the x-bar becomes a y-bar after normalization.
    assert normalize(rotate(BAR2, _index_of_z_quarter_turn())) == as_cells(
        [(0, 0, 0), (0, 1, 0)]
    )


def _index_of_z_quarter_turn():
    target = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
    return ROTATIONS.index(target)


def test_bar_has_three_distinct_rotation_images():
    assert len(rotation_images(BAR2)) == 3


# ---- canonical form ------------------------------------------------------

def test_canonical_single_voxel():
    assert canonical_form(as_cells([(9, 2, 4)])) == ((0, 0, 0),)


def test_canonical_rotation_invariant_and_idempotent():
    rng = random.Random(11)
    for _ in range(30):
        shape = _random_shape(rng, max_cells=8)
        canon = canonical_form(shape)
        assert canonical_form(canon) == canon
        for r in range(NUM_ROTATIONS):
            assert canonical_form(rotate(shape, r)) == canon


def test_tetracube_census_matches_growth_oracle():
    classes = _oracle_tetracubes()
    assert len(classes) == TETRACUBE_COUNT
    canon = {canonical_form(shape) for shape in classes.values()}
    assert len(canon) == TETRACUBE_COUNT


# ---- connectivity --------------------------------------------------------

@pytest.mark.parametrize(
    "cells,expected",
    [
        ([(0, 0, 0)], True),
        ([(0, 0, 0), (2, 0, 0)], False),
        ([(0, 0, 0), (1, 0, 0), (1, 1, 0)], True),
    ],
)
def test_is_connected(cells, expected):
    assert is_connected(as_cells(cells)) is expected


def test_edge_contact_is_not_connectivity():
    assert is_connected(as_cells([(0, 0, 0), (1, 1, 0)])) is False


# ---- 2x3 face rule -------------------------------------------------------

def test_2x3_cuboid_has_full_face():
    slab = as_cells([(x, y, 0) for x in range(2) for y in range(3)])
    assert has_full_2x3_face(slab) is True


def test_bar_has_no_full_face():
    assert has_full_2x3_face(BAR3) is False


def test_2x4_plate_contains_embedded_2x3():
    plate = as_cells([(x, y, 0) for x in range(2) for y in range(4)])
    assert _has_2x3_window_oracle(plate) is True
    assert has_full_2x3_face(plate) is True


def test_face_rule_matches_sliding_window_oracle():
    rng = random.Random(23)
    for _ in range(1000):
        shape = _random_shape(rng, max_cells=12)
        assert has_full_2x3_face(shape) == _has_2x3_window_oracle(shape)


# ---- signatures ----------------------------------------------------------

def test_signature_order_invariant():
    pieces = [BAR2, L_TRI, BAR3]
    shuffled = [BAR3, BAR2, L_TRI]
    assert puzzle_signature(pieces) == puzzle_signature(shuffled)


def test_signature_rotation_invariant():
    rng = random.Random(3)
    pieces = [_random_shape(rng, max_cells=6) for _ in range(4)]
    rotated = [normalize(rotate(p, rng.randrange(NUM_ROTATIONS))) for p in pieces]
    assert puzzle_signature(pieces) == puzzle_signature(rotated)


def test_signature_distinguishes_shapes():
    single = as_cells([(0, 0, 0)])
    assert puzzle_signature([single]) != puzzle_signature([BAR2])


def test_signature_format():
    sig = puzzle_signature([BAR2])
    assert len(sig) == 64
    assert sig == sig.lower()
    int(sig, 16)


def test_signatures_collision_free_over_tetracubes():
    shapes = list(_oracle_tetracubes().values())
    digests = {puzzle_signature([s]) for s in shapes}
    assert len(digests) == len(shapes)


def test_serialization_is_the_documented_wire_form():
    # canonical image of a 1x1x2 bar is z-aligned: (0,0,1) sorts below (1,0,0)
    assert serialize_canonical([BAR2]) == "0,0,0;0,0,1"


def test_signature_rejects_empty_list():
    with pytest.raises(ShapeError):
        puzzle_signature([])
