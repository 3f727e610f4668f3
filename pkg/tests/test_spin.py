import itertools

import pytest

from spinsum import gf2
from spinsum.spin import (NS, R_TYPE, MarkingMove, apply_marking_move,
                          arf_invariant, classify_spin_structures,
                          curve_lift_sign, enumerate_admissible,
                          glue_edge_signs, is_admissible,
                          leaf_exchange_vectors, nu_of, quadratic_form,
                          signs_to_vector, symplectic_basis)
from spinsum.surface import (build_cylinder, genus_g_closed,
                             genus_g_closed_detail, glue_boundaries_with_map)
from spinsum import tft


def test_nu_of():
    assert nu_of(NS) == 1
    assert nu_of(R_TYPE) == -1
    with pytest.raises(ValueError):
        nu_of("X")


def test_reference_cylinder_signs_admissible():
    for delta in (NS, R_TYPE):
        for eps in (1, -1):
            tri, signs, types = tft.cylinder_spin(delta, eps)
            assert is_admissible(tri, signs, types)


def test_reference_pants_signs_admissible():
    for deltas in itertools.product((NS, R_TYPE), repeat=3):
        if nu_of(deltas[0]) * nu_of(deltas[1]) * nu_of(deltas[2]) == -1:
            with pytest.raises(ValueError):
                tft.pants_spin(deltas, 1, 1)
            continue
        for e1, e2 in itertools.product((1, -1), repeat=2):
            tri, signs, types = tft.pants_spin(deltas, e1, e2)
            assert is_admissible(tri, signs, types)


def test_reference_torus_signs_admissible():
    for delta in (NS, R_TYPE):
        for eps in (1, -1):
            tri, signs = tft.torus_spin(delta, eps)
            assert is_admissible(tri, signs, ())


def test_boundary_type_swap_changes_admissibility():
    tri, signs, _ = tft.cylinder_spin(NS, 1)
    assert is_admissible(tri, signs, (NS, NS))
    assert not is_admissible(tri, signs, (R_TYPE, NS))
    assert not is_admissible(tri, signs, (NS, R_TYPE))


def test_enumerate_admissible_contains_reference():
    tri, signs, types = tft.cylinder_spin(R_TYPE, -1)
    sols = enumerate_admissible(tri, types)
    vectors = {signs_to_vector(tri, s) for s in sols}
    assert signs_to_vector(tri, signs) in vectors
    for s in sols:
        assert is_admissible(tri, s, types)


def test_marking_moves_preserve_admissibility():
    tri, signs, types = tft.cylinder_spin(NS, -1)
    fid = sorted(tri.triangles)[0]
    inner = [e for e in sorted(tri.edges) if not tri.is_boundary_edge(e)]
    for move in (MarkingMove("leaf_exchange", fid),
                 MarkingMove("rotate_marking", fid),
                 MarkingMove("flip_edge", inner[0])):
        t2, s2 = apply_marking_move(tri, signs, move)
        assert is_admissible(t2, s2, types)


def test_marking_move_involutions():
    tri, signs, _ = tft.cylinder_spin(NS, 1)
    fid = sorted(tri.triangles)[0]
    inner = [e for e in sorted(tri.edges) if not tri.is_boundary_edge(e)]
    t2, s2 = apply_marking_move(
        *apply_marking_move(tri, signs, MarkingMove("leaf_exchange", fid)),
        MarkingMove("leaf_exchange", fid))
    assert (t2.triangles, s2) == (tri.triangles, signs)
    t2, s2 = apply_marking_move(
        *apply_marking_move(tri, signs, MarkingMove("flip_edge", inner[0])),
        MarkingMove("flip_edge", inner[0]))
    assert (t2.edges, t2.triangles, s2) == (tri.edges, tri.triangles, signs)
    state = (tri, signs)
    for _ in range(3):
        state = apply_marking_move(*state, MarkingMove("rotate_marking", fid))
    assert state[0].triangles == tri.triangles
    # sign vectors may differ by a gauge transformation in the
    # leaf-exchange span
    diff = signs_to_vector(tri, state[1]) ^ signs_to_vector(tri, signs)
    assert gf2.reduce_against(leaf_exchange_vectors(tri), diff) == 0


def test_flip_boundary_edge_rejected():
    tri, signs, _ = tft.cylinder_spin(NS, 1)
    bedge = next(e for e in sorted(tri.edges) if tri.is_boundary_edge(e))
    with pytest.raises(ValueError):
        apply_marking_move(tri, signs, MarkingMove("flip_edge", bedge))


def test_torus_classes_separated_by_quadratic_form():
    detail = genus_g_closed_detail(1)
    a, b = symplectic_basis(detail)[0]
    qs = set()
    for signs in classify_spin_structures(detail.tri):
        qs.add((quadratic_form(detail.tri, signs, a),
                quadratic_form(detail.tri, signs, b)))
    assert qs == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_curve_lift_sign_is_plus_minus_one():
    detail = genus_g_closed_detail(1)
    a, b = symplectic_basis(detail)[0]
    for signs in classify_spin_structures(detail.tri):
        for curve in (a, b):
            assert curve_lift_sign(detail.tri, signs, curve) in (1, -1)


def test_arf_requires_admissible_signs():
    detail = genus_g_closed_detail(1)
    signs = classify_spin_structures(detail.tri)[0]
    bad = dict(signs)
    eid = sorted(bad)[0]
    bad[eid] = -bad[eid]
    if not is_admissible(detail.tri, bad, ()):
        with pytest.raises(ValueError):
            arf_invariant(detail, bad)


def test_glue_edge_signs_transport():
    tri = build_cylinder()
    glued, gmap = glue_boundaries_with_map(tri, 1, 2)
    _, signs, _ = tft.cylinder_spin(NS, 1)
    out = glue_edge_signs(signs, gmap, -1)
    assert set(out) == set(glued.edges)
    for a_eid, b_eid in gmap.pairs:
        assert out[b_eid] == -signs[a_eid] * signs[b_eid]


def test_sphere_has_unique_class_with_arf_one():
    detail = genus_g_closed_detail(0)
    classes = classify_spin_structures(detail.tri)
    assert len(classes) == 1
    assert arf_invariant(detail, classes[0]) == 1
