"""Pachner moves with exact edge-sign transport.

Each move demands its reference marking configuration and refuses
otherwise; ``normalize_marking`` composes marking moves (leaf rotations
and inner-edge flips) to put an arbitrary patch into that configuration
first.  Sign transport is a literal transcription of the local rules:

2-2 (diagonal flip): both triangles marked on the shared diagonal e.
With sigma1 = left face of e = [e, A, B] and sigma2 = right face =
[e, C, D], the flip replaces e by e' from the C/D corner to the A/B
corner and updates signs as s' = s, s_A' = s_A, s_B' = -s s_B,
s_C' = -s_C, s_D' = -s s_D.

3-1 (star collapse at an inner vertex v of valence 3): the three inner
edges point toward v, each triangle is marked on its outer edge, and the
reference slot tables are sigma1 = [A, e12 L, e31 R], sigma2 =
[B, e23 L, e12 R], sigma3 = [C, e31 L, e23 R].  Requires
s12 s23 s31 = -1; outer signs become s_A' = s_A, s_B' = s12 s_B,
s_C' = -s31 s_C.  The 1-3 move is the exact inverse with the free
choice (s12, s23) and s31 := -s12 s23.
"""

from __future__ import annotations

from dataclasses import dataclass

from .spin import MarkingMove, Signs, apply_marking_move
from .surface import Edge, L, MarkedTriangulation, R, Slot, Triangle


@dataclass(frozen=True)
class PachnerMove:
    kind: str  # 'two_two' | 'three_one' | 'one_three'
    target: int  # edge id / vertex id / face id
    choice: tuple[int, int] = (1, 1)  # (s12, s23) for one_three


def _fresh_edge_id(tri: MarkedTriangulation) -> int:
    return max(tri.edges) + 1


def _fresh_face_id(tri: MarkedTriangulation) -> int:
    return max(tri.triangles) + 1


def _rotations_to_slot(si: int) -> int:
    """Number of rotate_marking moves bringing slot si to slot 0."""
    return si  # rotating once maps old slot 1 to slot 0


# -- normalization ------------------------------------------------------
def normalize_for_22(tri: MarkedTriangulation, signs: Signs, eid: int):
    if tri.is_boundary_edge(eid):
        raise ValueError(f"edge {eid} is a boundary edge")
    for fid in [f for f, _ in tri.incidences(eid)]:
        while tri.triangles[fid].slots[0].edge != eid:
            tri, signs = apply_marking_move(
                tri, signs, MarkingMove("rotate_marking", fid))
    return tri, signs


def normalize_for_31(tri: MarkedTriangulation, signs: Signs, v: int):
    star = tri.star_cycle(v)
    if len(star) != 3:
        raise ValueError(f"vertex {v} does not have valence 3")
    inner_edges = {eid for _, _, eid, _ in star}
    if len(inner_edges) != 3:
        raise ValueError(f"star of vertex {v} is degenerate")
    # orient all inner edges toward v
    for eid in sorted(inner_edges):
        if tri.edges[eid].src == v:
            tri, signs = apply_marking_move(tri, signs,
                                            MarkingMove("flip_edge", eid))
    # mark each star triangle on its outer edge
    for fid, _, _, _ in tri.star_cycle(v):
        while tri.triangles[fid].slots[0].edge in inner_edges:
            tri, signs = apply_marking_move(tri, signs,
                                            MarkingMove("rotate_marking", fid))
    return tri, signs


def normalize_marking(tri: MarkedTriangulation, signs: Signs,
                      move: PachnerMove):
    if move.kind == "two_two":
        return normalize_for_22(tri, signs, move.target)
    if move.kind == "three_one":
        return normalize_for_31(tri, signs, move.target)
    if move.kind == "one_three":
        return tri, signs  # any marking on the target triangle works
    raise ValueError(f"unknown move kind {move.kind!r}")


# -- 2-2 ----------------------------------------------------------------
def pachner_22(tri: MarkedTriangulation, signs: Signs, eid: int):
    if tri.is_boundary_edge(eid):
        raise ValueError(f"edge {eid} is a boundary edge")
    left, right = tri.sigma_L(eid), tri.sigma_R(eid)
    if left is None or right is None or left[0] == right[0]:
        raise ValueError(f"2-2 move undefined at edge {eid}")
    f1, s1 = left
    f2, s2 = right
    if s1 != 0 or s2 != 0:
        raise ValueError("2-2 move requires both triangles marked on the "
                         "diagonal (run normalize_marking first)")
    t1, t2 = tri.triangles[f1], tri.triangles[f2]
    A, B = t1.slots[1], t1.slots[2]
    C, D = t2.slots[1], t2.slots[2]
    outer = {A.edge, B.edge, C.edge, D.edge}
    if len(outer) != 4 or eid in outer:
        raise ValueError("2-2 move needs four distinct outer edges")
    v3 = tri.corner_vertex(f1, 1)  # between A and B
    v1 = tri.corner_vertex(f2, 1)  # between C and D
    new_eid = _fresh_edge_id(tri)
    f3 = _fresh_face_id(tri)
    f4 = f3 + 1
    edges = dict(tri.edges)
    del edges[eid]
    edges[new_eid] = Edge(v1, v3)
    triangles = dict(tri.triangles)
    del triangles[f1]
    del triangles[f2]
    triangles[f3] = Triangle((Slot(new_eid, L), B, C))
    triangles[f4] = Triangle((Slot(new_eid, R), D, A))
    s = signs[eid]
    new_signs = dict(signs)
    del new_signs[eid]
    new_signs[new_eid] = s
    new_signs[B.edge] = -s * signs[B.edge]
    new_signs[C.edge] = -signs[C.edge]
    new_signs[D.edge] = -s * signs[D.edge]
    return MarkedTriangulation(edges, triangles, tri.boundaries), new_signs


# -- 3-1 ----------------------------------------------------------------
def _star_layout(tri: MarkedTriangulation, v: int):
    """Reference layout of a normalized valence-3 star.

    Returns (faces, inner, outer) where faces = (f1, f2, f3) in
    counterclockwise order starting from the smallest face id, inner =
    (e12, e23, e31) and outer = the outer slots (A, B, C) of the faces.
    """
    star = tri.star_cycle(v)
    if len(star) != 3:
        raise ValueError(f"vertex {v} does not have valence 3")
    ids = [fid for fid, _, _, _ in star]
    rot = ids.index(min(ids))
    star = star[rot:] + star[:rot]
    faces, inner, outer = [], [], []
    for fid, _, _, _ in star:
        t = tri.triangles[fid]
        faces.append(fid)
        outer.append(t.slots[0])
        inner.append(t.slots[1].edge)
    for k, fid in enumerate(faces):
        t = tri.triangles[fid]
        e_next, e_prev = inner[k], inner[(k + 2) % 3]
        if (t.slots[1] != Slot(e_next, L) or t.slots[2] != Slot(e_prev, R)
                or tri.edges[e_next].dst != v):
            raise ValueError("3-1 move requires the reference configuration "
                             "(run normalize_marking first)")
    return faces, inner, outer


def pachner_31(tri: MarkedTriangulation, signs: Signs, v: int):
    if v not in tri.inner_vertices():
        raise ValueError(f"vertex {v} is not inner")
    faces, inner, outer = _star_layout(tri, v)
    e12, e23, e31 = inner
    if len({e12, e23, e31}) != 3:
        raise ValueError("3-1 move needs three distinct inner edges")
    A, B, C = outer
    if len({A.edge, B.edge, C.edge}) != 3:
        raise ValueError("3-1 move needs three distinct outer edges")
    if {A.edge, B.edge, C.edge} & {e12, e23, e31}:
        raise ValueError("3-1 move patch is degenerate (outer edge equals "
                         "an inner edge)")
    s12, s23, s31 = signs[e12], signs[e23], signs[e31]
    if s12 * s23 * s31 != -1:
        raise ValueError("inner sign product must be -1 (signs are not "
                         "admissible around the collapsing vertex)")
    fnew = _fresh_face_id(tri)
    edges = dict(tri.edges)
    for e in inner:
        del edges[e]
    triangles = dict(tri.triangles)
    for f in faces:
        del triangles[f]
    triangles[fnew] = Triangle((A, B, C))
    new_signs = dict(signs)
    for e in inner:
        del new_signs[e]
    new_signs[B.edge] = s12 * signs[B.edge]
    new_signs[C.edge] = -s31 * signs[C.edge]
    return MarkedTriangulation(edges, triangles, tri.boundaries), new_signs


# -- 1-3 ----------------------------------------------------------------
def pachner_13(tri: MarkedTriangulation, signs: Signs, fid: int,
               choice: tuple[int, int] = (1, 1)):
    t = tri.triangles[fid]
    A, B, C = t.slots
    if len({A.edge, B.edge, C.edge}) != 3:
        raise ValueError("1-3 move needs three distinct edges")
    s12, s23 = choice
    if s12 not in (1, -1) or s23 not in (1, -1):
        raise ValueError("choice entries must be +1 or -1")
    s31 = -s12 * s23
    v0 = tri.traversal(fid, 0)[0]
    v1 = tri.traversal(fid, 1)[0]
    v2 = tri.traversal(fid, 2)[0]
    v = max(tri.vertices) + 1
    e12 = _fresh_edge_id(tri)
    e23, e31 = e12 + 1, e12 + 2
    f1 = _fresh_face_id(tri)
    f2, f3 = f1 + 1, f1 + 2
    edges = dict(tri.edges)
    edges[e12] = Edge(v1, v)
    edges[e23] = Edge(v2, v)
    edges[e31] = Edge(v0, v)
    triangles = dict(tri.triangles)
    del triangles[fid]
    triangles[f1] = Triangle((A, Slot(e12, L), Slot(e31, R)))
    triangles[f2] = Triangle((B, Slot(e23, L), Slot(e12, R)))
    triangles[f3] = Triangle((C, Slot(e31, L), Slot(e23, R)))
    new_signs = dict(signs)
    new_signs[e12], new_signs[e23], new_signs[e31] = s12, s23, s31
    new_signs[B.edge] = s12 * signs[B.edge]
    new_signs[C.edge] = -s31 * signs[C.edge]
    return MarkedTriangulation(edges, triangles, tri.boundaries), new_signs


def random_pachner_move(tri: MarkedTriangulation, signs: Signs, rng,
                        bias_faces: int | None = None):
    """Apply one random valid move; returns (tri, signs, move).

    The kind mix is biased to keep the face count near ``bias_faces``
    (default: the current count), so long random walks stay bounded.
    """
    n0 = bias_faces if bias_faces is not None else len(tri.triangles)
    for _ in range(500):
        n_f = len(tri.triangles)
        if n_f <= n0:
            kinds = ["one_three", "one_three", "two_two"]
        elif n_f >= n0 + 4:
            kinds = ["three_one", "three_one", "two_two"]
        else:
            kinds = ["one_three", "two_two", "three_one"]
        kind = rng.choice(kinds)
        if kind == "two_two":
            cands = [e for e in sorted(tri.edges)
                     if not tri.is_boundary_edge(e)]
            if not cands:
                continue
            move = PachnerMove("two_two", rng.choice(cands))
        elif kind == "three_one":
            cands = sorted(tri.inner_vertices())
            if not cands:
                continue
            move = PachnerMove("three_one", rng.choice(cands))
        else:
            move = PachnerMove("one_three", rng.choice(sorted(tri.triangles)),
                               (rng.choice((1, -1)), rng.choice((1, -1))))
        try:
            tri2, signs2 = apply_pachner_move(tri, signs, move)
        except ValueError:
            continue
        return tri2, signs2, move
    raise RuntimeError("no valid Pachner move found in 500 attempts")


def apply_pachner_move(tri: MarkedTriangulation, signs: Signs,
                       move: PachnerMove, normalize: bool = True):
    if normalize:
        tri, signs = normalize_marking(tri, signs, move)
    if move.kind == "two_two":
        return pachner_22(tri, signs, move.target)
    if move.kind == "three_one":
        return pachner_31(tri, signs, move.target)
    if move.kind == "one_three":
        return pachner_13(tri, signs, move.target, move.choice)
    raise ValueError(f"unknown move kind {move.kind!r}")
