import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from twinsurf.embedding import (CombinatorialMap, euler_genus, is_connected, is_triangulation,
                                trace_faces, triangulate, validate_map)
from twinsurf.errors import BadRotation, BrokenInvolution, Disconnected, LoopEdge
from twinsurf.generators import (K4_SPHERE, projective_k6, random_dense, random_triangulation,
                                 toroidal_grid, torus_k7)

TRIANGLE = CombinatorialMap.from_rotation_lists([
    [(0, 1), (2, 1)], [(0, 1), (1, 1)], [(1, 1), (2, 1)],
])
SQUARE = CombinatorialMap.from_faces(4, [(0, 1, 2, 3), (3, 2, 1, 0)])


def corners_partitioned(m):
    """Every corner (named by a dart) lies on exactly one face."""
    faces = trace_faces(m)
    seen = [c for cs in faces.corners for c in cs]
    return sorted(seen) == list(range(m.num_darts))


def test_triangle_is_valid_with_two_faces():
    validate_map(TRIANGLE)
    faces = trace_faces(TRIANGLE)
    assert len(faces) == 2
    assert faces.lengths() == [3, 3]
    assert is_triangulation(TRIANGLE)


def test_broken_involution_rejected():
    bad = replace(TRIANGLE, twin=(0,) + TRIANGLE.twin[1:])
    with pytest.raises(BrokenInvolution):
        validate_map(bad)


def test_loop_rejected():
    loop = CombinatorialMap.from_rotation_lists([[(0, 1), (0, 1)]])
    with pytest.raises(LoopEdge):
        validate_map(loop)


def test_edge_occurring_once_rejected():
    with pytest.raises(BadRotation):
        CombinatorialMap.from_rotation_lists([[(0, 1)], [(1, 1)]])


def test_k4_sphere():
    info = euler_genus(CombinatorialMap.from_faces(4, K4_SPHERE))
    assert (info.euler_genus, info.orientable, info.describe()) == (0, True, "genus 0 orientable")


def test_k7_torus():
    m = torus_k7()
    info = euler_genus(m)
    assert (info.vertices, info.edges, info.faces) == (7, 21, 14)
    assert info.euler_genus == 2 and info.orientable
    assert is_triangulation(m)


def test_k6_projective_plane():
    m = projective_k6()
    info = euler_genus(m)
    assert (info.vertices, info.edges, info.faces) == (6, 15, 10)
    assert info.describe() == "genus 1 non-orientable"
    assert is_triangulation(m)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_quadrangulated_toroidal_grid(n):
    m = toroidal_grid(n)
    faces = trace_faces(m)
    assert len(faces) == n * n
    assert set(faces.lengths()) == {4}
    assert euler_genus(m).euler_genus == 2
    t = triangulate(m)
    assert is_triangulation(t)
    assert len(trace_faces(t)) == 2 * n * n
    assert len(t.augmented) == n * n


def test_each_square_face_gets_one_diagonal():
    # a 4-cycle on the sphere has two square faces
    assert not is_triangulation(SQUARE)
    t = triangulate(SQUARE)
    assert t.num_edges == SQUARE.num_edges + 2
    assert trace_faces(t).lengths() == [3, 3, 3, 3]
    assert len(t.augmented) == 2
    assert euler_genus(t).euler_genus == 0


def test_triangulate_is_identity_on_triangulations():
    m = torus_k7()
    assert triangulate(m) is m


def test_triangulate_idempotent_on_grid():
    t = triangulate(toroidal_grid(4))
    assert triangulate(t) is t


def test_disconnected_rejected():
    two = CombinatorialMap.from_faces(6, [(0, 1, 2), (2, 1, 0), (3, 4, 5), (5, 4, 3)])
    assert not is_connected(two)
    with pytest.raises(Disconnected):
        triangulate(two)


@pytest.mark.parametrize("genus", [0, 1, 2, 3, 4, 5])
def test_random_triangulations_have_requested_genus(genus):
    m = random_triangulation(genus, 60, seed=genus)
    info = euler_genus(m)
    assert info.euler_genus == genus
    assert info.vertices - info.edges + info.faces == 2 - genus
    assert corners_partitioned(m)


@settings(max_examples=25, deadline=None)
@given(genus=st.integers(1, 5), seed=st.integers(0, 10_000))
def test_genus_invariant_under_relabelling(genus, seed):
    m = random_dense(genus, seed)
    rng = random.Random(seed)
    vperm = list(range(m.num_vertices))
    eperm = list(range(m.num_edges))
    rng.shuffle(vperm)
    rng.shuffle(eperm)
    r = m.relabel(vperm, eperm)
    validate_map(r)
    a, b = euler_genus(m), euler_genus(r)
    assert (a.euler_genus, a.orientable, a.faces) == (b.euler_genus, b.orientable, b.faces)
    assert corners_partitioned(r)
