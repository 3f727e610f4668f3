import random

import pytest

from spinsum.algebra import builtin_by_name
from spinsum.eval import evaluate_raw
from spinsum.pachner import (PachnerMove, apply_pachner_move,
                             normalize_marking, pachner_13, pachner_31,
                             random_pachner_move)
from spinsum.spin import is_admissible
from spinsum.surface import validate
from spinsum import tft


@pytest.fixture(scope="module")
def cyl():
    return tft.cylinder_spin("NS", 1)


def test_one_three_then_three_one_roundtrip(cyl, clifford):
    tri, signs, _ = cyl
    base = evaluate_raw(tri, signs, clifford)
    fid = sorted(tri.triangles)[0]
    for choice in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        t2, s2 = pachner_13(tri, signs, fid, choice)
        assert validate(t2) == []
        assert len(t2.triangles) == len(tri.triangles) + 2
        # inner sign product around the new vertex is forced to -1
        new_edges = set(t2.edges) - set(tri.edges)
        prod = 1
        for e in new_edges:
            prod *= s2[e]
        assert prod == -1
        v = max(t2.vertices)
        t3, s3 = apply_pachner_move(t2, s2, PachnerMove("three_one", v))
        assert evaluate_raw(t3, s3, clifford) == base


def test_two_two_involution_amplitude(cyl, clifford):
    tri, signs, _ = cyl
    base = evaluate_raw(tri, signs, clifford)
    inner = [e for e in sorted(tri.edges) if not tri.is_boundary_edge(e)]
    for eid in inner[:3]:
        t2, s2 = apply_pachner_move(tri, signs, PachnerMove("two_two", eid))
        assert validate(t2) == []
        assert evaluate_raw(t2, s2, clifford) == base
        new_eid = max(t2.edges)
        t3, s3 = apply_pachner_move(t2, s2, PachnerMove("two_two", new_eid))
        assert evaluate_raw(t3, s3, clifford) == base


def test_moves_preserve_admissibility(cyl):
    tri, signs, types = cyl
    rng = random.Random(11)
    for _ in range(60):
        tri, signs, _move = random_pachner_move(tri, signs, rng, bias_faces=8)
        assert is_admissible(tri, signs, types)
    assert validate(tri) == []


def test_three_one_rejects_wrong_sign_product(cyl):
    tri, signs, _ = cyl
    fid = sorted(tri.triangles)[0]
    t2, s2 = pachner_13(tri, signs, fid, (1, 1))
    v = max(t2.vertices)
    t2, s2 = normalize_marking(t2, s2, PachnerMove("three_one", v))
    bad = dict(s2)
    new_edges = [e for e in t2.edges if e not in tri.edges]
    bad[new_edges[0]] = -bad[new_edges[0]]
    with pytest.raises(ValueError, match="-1"):
        pachner_31(t2, bad, v)


def test_two_two_rejects_boundary_edge(cyl):
    tri, signs, _ = cyl
    bedge = next(e for e in sorted(tri.edges) if tri.is_boundary_edge(e))
    with pytest.raises(ValueError):
        apply_pachner_move(tri, signs, PachnerMove("two_two", bedge))


def test_fuzz_on_matrix_algebra_over_f3():
    A = builtin_by_name("twisted-matrix-3-f3")
    tri, signs, _ = tft.cylinder_spin("R", -1)
    base = evaluate_raw(tri, signs, A)
    rng = random.Random(5)
    for _ in range(30):
        tri, signs, _move = random_pachner_move(tri, signs, rng, bias_faces=8)
    assert evaluate_raw(tri, signs, A) == base
