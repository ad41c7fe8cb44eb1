import pytest
from hypothesis import given, settings, strategies as st

from helpers import check_disk_decomposition, hexagon_case, split_case, wheel_region
from twinsurf.decomposition import (add_separating_chords, check_product_structure,
                                    decompose_hexagon, has_spanning_component, product_structure,
                                    split_region, structure_from_parts)
from twinsurf.disk import disk_from_triangles
from twinsurf.embedding import CombinatorialMap
from twinsurf.errors import DecompositionError, NoTrichromaticFace
from twinsurf.generators import (K4_SPHERE, projective_k6, random_disk, random_triangulation,
                                 toroidal_grid, torus_k7)
from twinsurf.regions import (DiskContext, Region, find_trichromatic_face, group_colouring,
                              reach)
from twinsurf.treedec import RootedTreeDecomposition


def single_paths(triangles, parent):
    disk = disk_from_triangles(triangles, parent)
    ctx = DiskContext(disk)
    keys = {v: ctx.new_key(ctx.add_path([v])) for v in disk.boundary}
    return disk, ctx, Region(list(range(len(disk.triangles))), list(disk.boundary), keys)


# ---------------------------------------------------------------- colourings

def test_no_interior_colouring_is_the_boundary_assignment():
    disk, ctx, region = single_paths([(0, 1, 2), (0, 2, 3)], [-1] * 4)
    rch = reach(ctx, region)
    assert rch == region.keys
    colour = group_colouring(region, rch, [[region.keys[0]], [region.keys[1]],
                                           [region.keys[2], region.keys[3]]])
    assert colour == {0: 0, 1: 1, 2: 2, 3: 2}


def test_interior_vertex_takes_its_parents_colour():
    disk, ctx, region = wheel_region(5, 1, seed=0)
    rch = reach(ctx, region)
    inner = 5
    assert rch[inner] == region.keys[disk.parent[inner]]


def test_reach_is_deterministic():
    _, ctx, region = wheel_region(6, 300, seed=4)
    assert reach(ctx, region) == reach(ctx, region)


def test_single_triangle_is_trichromatic():
    _, ctx, region = single_paths([(0, 1, 2)], [-1] * 3)
    assert find_trichromatic_face(ctx, region, {0: 0, 1: 1, 2: 2}) == 0


def test_square_face_found_at_the_red_green_edge():
    disk, ctx, region = single_paths([(0, 1, 2), (0, 2, 3)], [-1] * 4)
    t = find_trichromatic_face(ctx, region, {0: "r", 1: "g", 2: "b", 3: "b"})
    assert {0, 1} <= set(disk.triangles[t])


def test_two_colours_have_no_trichromatic_face():
    _, ctx, region = single_paths([(0, 1, 2)], [-1] * 3)
    with pytest.raises(NoTrichromaticFace):
        find_trichromatic_face(ctx, region, {0: 0, 1: 1, 2: 1})


@settings(max_examples=60, deadline=None)
@given(k=st.integers(3, 10), n=st.integers(1, 200), seed=st.integers(0, 10_000), data=st.data())
def test_sperner_on_valid_colourings(k, n, seed, data):
    disk, ctx, region = wheel_region(k, n, seed)
    keys = [kk for kk, _ in region.segments()]
    cuts = sorted(data.draw(st.lists(st.integers(1, k - 1), min_size=2, max_size=2, unique=True)))
    groups = [keys[:cuts[0]], keys[cuts[0]:cuts[1]], keys[cuts[1]:]]
    colour = group_colouring(region, reach(ctx, region), groups)
    t = find_trichromatic_face(ctx, region, colour)
    assert len({colour[v] for v in disk.triangles[t]}) == 3
    assert all(len({colour[v] for v in disk.triangles[s]}) < 3 for s in region.tris if s < t)


# ---------------------------------------------------------------- hexagons

def test_region_without_interior_is_a_single_bag():
    _, ctx, region = single_paths([(0, 1, 2)], [-1] * 3)
    td, top = decompose_hexagon(ctx, region)
    assert td.bags == [frozenset({0, 1, 2})]
    assert top == 0


@pytest.mark.parametrize("seed", range(5))
def test_hexagon_with_one_interior_vertex(seed):
    region, ctx, td, top = hexagon_case(6, 1, seed)
    assert len(ctx.paths) - 6 <= 3
    assert td.width <= 7


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_large_hexagon(k):
    region, ctx, td, top = hexagon_case(k, 1000, seed=k)
    assert td.width <= 7
    assert region.path_ids(ctx) <= td.bags[top]


def test_hexagon_frozen_case():
    region, ctx, td, top = hexagon_case(6, 40, seed=11)
    assert (len(ctx.paths), len(td.bags), td.width) == (45, 34, 7)


@settings(max_examples=40, deadline=None)
@given(k=st.integers(3, 6), n=st.integers(1, 400), seed=st.integers(0, 10_000))
def test_hexagon_width_and_root_bag(k, n, seed):
    region, ctx, td, top = hexagon_case(k, n, seed)
    assert td.width <= 7
    assert top == td.root
    assert region.path_ids(ctx) <= td.bags[top]


# ---------------------------------------------------------------- many segments

def test_six_segments_need_no_split():
    faces, trace, ctx = split_case(6, 50, seed=0)
    assert len(faces) == 1 and trace.new_paths == []


def test_seven_segment_worst_case_has_ten_paths():
    faces, trace, ctx = split_case(7, 30, seed=2)
    assert 7 + len(trace.new_paths) == 10 == 6 * 7 - 32


def test_balanced_nine_segment_case():
    faces, trace, ctx = split_case(9, 30, seed=12)
    assert trace.events[0]["lengths"] == (3, 3, 3)
    assert 9 + len(trace.new_paths) == 12
    assert len(faces) == 3
    assert [len(f.segments()) for f in faces] == [6, 6, 6]


@settings(max_examples=60, deadline=None)
@given(k=st.integers(6, 20), n=st.integers(1, 300), seed=st.integers(0, 10_000))
def test_split_bounds(k, n, seed):
    faces, trace, ctx = split_case(k, n, seed)
    assert k + len(trace.new_paths) <= max(6, 6 * k - 32)
    assert len(faces) <= max(1, 3 * k - 18)
    assert all(len(f.segments()) <= 6 for f in faces)


# ---------------------------------------------------------------- chords

POCKETS = [(0, 1, 6), (1, 2, 6), (2, 3, 6), (3, 0, 6), (0, 3, 7), (3, 4, 7), (4, 5, 7), (5, 0, 7)]


def test_chord_separates_two_pockets():
    disk, ctx, region = single_paths(POCKETS, [-1] * 6 + [1, 4])
    assert not has_spanning_component(ctx, region)
    pieces = add_separating_chords(ctx, region)
    assert [sorted(p.path_ids(ctx)) for p in pieces] == [[0, 1, 2, 3], [0, 3, 4, 5]]
    assert all(has_spanning_component(ctx, p) for p in pieces)


def test_spanning_face_is_unchanged():
    _, ctx, region = wheel_region(6, 20, seed=4)
    assert has_spanning_component(ctx, region)
    assert add_separating_chords(ctx, region) == [region]


@settings(max_examples=30, deadline=None)
@given(k=st.integers(6, 14), n=st.integers(5, 200), seed=st.integers(0, 10_000))
def test_chord_pieces_span_and_stay_few(k, n, seed):
    faces, trace, ctx = split_case(k, n, seed)
    total = 0
    for f in faces:
        pieces = add_separating_chords(ctx, f)
        total += len(pieces)
        assert all(has_spanning_component(ctx, p) for p in pieces)
    assert total <= 6 * len(faces)


# ---------------------------------------------------------------- surfaces

def test_projective_k6_frozen():
    stats = check_product_structure(product_structure(projective_k6()))
    assert stats == {"root": 2, "children": 1, "bag": 5, "paths": 5, "problems": 0}


def test_torus_k7_frozen():
    stats = check_product_structure(product_structure(torus_k7()))
    assert stats == {"root": 6, "children": 0, "bag": 0, "paths": 6, "problems": 0}


def test_triangulated_grid_within_genus_two_bounds():
    ps = product_structure(toroidal_grid(5, triangulated=True))
    stats = check_product_structure(ps)
    assert ps.bounds() == {"root": 37, "children": 90, "bag": 8}
    assert stats == {"root": 11, "children": 2, "bag": 7, "paths": 14, "problems": 0}


def test_planar_instance_is_one_region():
    ps = product_structure(random_disk(100, seed=4))
    stats = check_product_structure(ps)
    assert ps.genus == 0 and ps.faces == 1
    assert stats["bag"] <= 8 and stats["root"] == 3


def test_sphere_k4():
    ps = product_structure(CombinatorialMap.from_faces(4, K4_SPHERE))
    check_product_structure(ps)


@pytest.mark.parametrize("genus", [1, 2, 3, 4, 5])
def test_random_surfaces_meet_bounds(genus):
    for seed in range(3):
        ps = product_structure(random_triangulation(genus, 300, seed))
        stats = check_product_structure(ps)
        bounds = ps.bounds()
        assert stats["root"] <= bounds["root"]
        assert stats["children"] <= bounds["children"]
        assert stats["bag"] <= 8


def test_tampered_decomposition_is_rejected():
    ps = product_structure(toroidal_grid(5, triangulated=True))
    td = ps.decomposition
    # dropping a path from every bag breaks the cover axiom
    victim = max(td.bags[td.root])
    ps.decomposition = RootedTreeDecomposition([b - {victim} for b in td.bags], list(td.parent))
    with pytest.raises(DecompositionError):
        check_product_structure(ps)


def test_rebuilt_structure_checks_out():
    m = random_triangulation(3, 200, seed=5)
    ps = product_structure(m)
    again = structure_from_parts(m, ps.partition, ps.decomposition, ps.genus, ps.tree.roots[0])
    assert check_product_structure(again) == check_product_structure(ps)


def test_rebuilt_structure_rejects_wrong_genus():
    m = torus_k7()
    ps = product_structure(m)
    with pytest.raises(DecompositionError):
        structure_from_parts(m, ps.partition, ps.decomposition, 1, 0)
