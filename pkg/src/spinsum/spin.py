"""Edge signs as combinatorial spin structures.

An edge-sign assignment is a total map edge id -> {+1, -1}.  Whether it
defines a spin structure is decided vertex by vertex: around an inner
vertex the product of the incident edge signs must equal (-1)^(D+K+1),
where the counts D and K come from the counterclockwise star walk (D =
triangles entered through their marked edge, K = walk crossings leaving
through a slot with side flag 'R', i.e. edge ends pointing away from the
vertex).  At boundary vertices the same holds with D shifted by one at
the distinguished vertex in the NS case.

Admissibility over all vertices is one linear system over GF(2) in the
sign exponents, which enumeration and classification exploit.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from . import gf2
from .surface import (CurveSpec, CurveStep, Edge, GenusGComplex, L,
                      MarkedTriangulation, R, Slot, Triangle)

NS, R_TYPE = "NS", "R"

Signs = dict[int, int]


def nu_of(delta: str) -> int:
    if delta == NS:
        return +1
    if delta == R_TYPE:
        return -1
    raise ValueError(f"boundary type must be 'NS' or 'R', got {delta!r}")


# -- vertex rules -------------------------------------------------------
def _inner_counts(tri: MarkedTriangulation, v: int):
    walk = tri.star_cycle(v)
    D = sum(1 for _, _, _, entry in walk if entry == 0)
    K = sum(1 for fid, ex, _, _ in walk
            if tri.triangles[fid].slots[ex].side == R)
    edges = [eid for _, _, eid, _ in walk]
    return D, K, edges


def _boundary_counts(tri: MarkedTriangulation, v: int):
    entry_eid, records, exit_eid = tri.star_fan(v)
    D_R = sum(1 for _, _, _, entry in records if entry == 0)
    K = sum(1 for fid, ex, _, _ in records
            if tri.triangles[fid].slots[ex].side == R)
    edges = [entry_eid] + [eid for _, _, eid, _ in records]
    return D_R, K, edges


def inner_vertex_rule(tri: MarkedTriangulation, signs: Signs, v: int) -> bool:
    if v not in tri.inner_vertices():
        raise ValueError(f"vertex {v} is not inner")
    D, K, edges = _inner_counts(tri, v)
    prod = 1
    for eid in edges:
        prod *= signs[eid]
    return prod == (-1) ** (D + K + 1)


def boundary_vertex_rule(tri: MarkedTriangulation, signs: Signs, v: int,
                         delta: str) -> bool:
    bi = tri.boundary_index_of_vertex(v)
    if bi is None:
        raise ValueError(f"vertex {v} is not on a boundary")
    nu_of(delta)
    D_R, K, edges = _boundary_counts(tri, v)
    D = D_R + (1 if delta == NS and tri.distinguished_vertex(bi) == v else 0)
    prod = 1
    for eid in edges:
        prod *= signs[eid]
    return prod == (-1) ** (D + K + 1)


def is_admissible(tri: MarkedTriangulation, signs: Signs,
                  types: tuple[str, ...] = ()) -> bool:
    if len(types) != len(tri.boundaries):
        raise ValueError("one boundary type per boundary component required")
    for v in tri.inner_vertices():
        if not inner_vertex_rule(tri, signs, v):
            return False
    for v in tri.all_boundary_vertices():
        bi = tri.boundary_index_of_vertex(v)
        if not boundary_vertex_rule(tri, signs, v, types[bi - 1]):
            return False
    return True


# -- admissibility as an F2 system --------------------------------------
def _edge_bits(tri: MarkedTriangulation) -> dict[int, int]:
    return {eid: k for k, eid in enumerate(sorted(tri.edges))}


def _vertex_equations(tri: MarkedTriangulation, types: tuple[str, ...]):
    """Yield (mask, rhs) rows over sign exponents (sign -1 <-> exponent 1)."""
    bits = _edge_bits(tri)
    for v in sorted(tri.inner_vertices()):
        D, K, edges = _inner_counts(tri, v)
        mask = 0
        for eid in edges:
            mask ^= 1 << bits[eid]
        yield mask, (D + K + 1) & 1
    for v in sorted(tri.all_boundary_vertices()):
        bi = tri.boundary_index_of_vertex(v)
        D_R, K, edges = _boundary_counts(tri, v)
        D = D_R + (1 if types[bi - 1] == NS
                   and tri.distinguished_vertex(bi) == v else 0)
        mask = 0
        for eid in edges:
            mask ^= 1 << bits[eid]
        yield mask, (D + K + 1) & 1


def _vector_to_signs(tri: MarkedTriangulation, x: int) -> Signs:
    bits = _edge_bits(tri)
    return {eid: -1 if (x >> k) & 1 else +1 for eid, k in bits.items()}


def signs_to_vector(tri: MarkedTriangulation, signs: Signs) -> int:
    bits = _edge_bits(tri)
    x = 0
    for eid, k in bits.items():
        if signs[eid] == -1:
            x |= 1 << k
    return x


def enumerate_admissible(tri: MarkedTriangulation,
                         types: tuple[str, ...] = ()) -> list[Signs]:
    if len(types) != len(tri.boundaries):
        raise ValueError("one boundary type per boundary component required")
    space = gf2.solve_affine(len(tri.edges), _vertex_equations(tri, types))
    if space is None:
        return []
    return [_vector_to_signs(tri, x) for x in space]


def leaf_exchange_vectors(tri: MarkedTriangulation) -> list[int]:
    bits = _edge_bits(tri)
    out = []
    for fid in sorted(tri.triangles):
        mask = 0
        for slot in tri.triangles[fid].slots:
            mask ^= 1 << bits[slot.edge]
        out.append(mask)
    return out


def classify_spin_structures(tri: MarkedTriangulation) -> list[Signs]:
    if not tri.is_closed():
        raise ValueError("classification requires a closed surface")
    space = gf2.solve_affine(len(tri.edges), _vertex_equations(tri, ()))
    if space is None:
        return []
    reps = gf2.coset_representatives(space, leaf_exchange_vectors(tri))
    expected = 1 << (2 * tri.genus())
    if len(reps) != expected:
        raise RuntimeError(
            f"classification found {len(reps)} classes, expected {expected}; "
            f"leaf-exchange quotient assumption violated")
    return [_vector_to_signs(tri, x) for x in reps]


# -- marking moves ------------------------------------------------------
@dataclass(frozen=True)
class MarkingMove:
    kind: str  # 'leaf_exchange' | 'flip_edge' | 'rotate_marking'
    target: int  # face id for leaf_exchange/rotate_marking, edge id for flip


def apply_marking_move(tri: MarkedTriangulation, signs: Signs,
                       move: MarkingMove):
    signs = dict(signs)
    if move.kind == "leaf_exchange":
        t = tri.triangles[move.target]
        for slot in t.slots:
            signs[slot.edge] = -signs[slot.edge]
        return tri, signs
    if move.kind == "flip_edge":
        eid = move.target
        if tri.is_boundary_edge(eid):
            raise ValueError("cannot flip a boundary edge")
        e = tri.edges[eid]
        edges = dict(tri.edges)
        edges[eid] = Edge(e.dst, e.src)
        triangles = dict(tri.triangles)
        for fid, si in tri.incidences(eid):
            t = triangles[fid]
            slots = list(t.slots)
            old = slots[si]
            slots[si] = Slot(eid, "L" if old.side == "R" else "R")
            triangles[fid] = Triangle(tuple(slots))
        signs[eid] = -signs[eid]
        return MarkedTriangulation(edges, triangles, tri.boundaries), signs
    if move.kind == "rotate_marking":
        fid = move.target
        t = tri.triangles[fid]
        triangles = dict(tri.triangles)
        triangles[fid] = Triangle((t.slots[1], t.slots[2], t.slots[0]))
        signs[t.slots[0].edge] = -signs[t.slots[0].edge]
        return MarkedTriangulation(tri.edges, triangles, tri.boundaries), signs
    raise ValueError(f"unknown marking move kind {move.kind!r}")


# -- curve lifting ------------------------------------------------------
def curve_lift_sign(tri: MarkedTriangulation, signs: Signs,
                    curve: CurveSpec) -> int:
    errs = tri.validate_curve(curve)
    if errs:
        raise ValueError("malformed curve: " + "; ".join(errs))
    total = 1
    for step in curve.steps:
        k, eta = step.entry_slot, step.eta
        ex = (k + eta) % 3
        slot = tri.triangles[step.face].slots[ex]
        mu = +1 if slot.side == R else -1
        # exp(pi i ((k + eta - [k + eta]_3)/3 + (1 - eta)/2)) as a sign
        phase = ((k + eta - ex) // 3 + (1 - eta) // 2) & 1
        total *= signs[slot.edge] * mu * (-1 if phase else 1)
    return total


def curve_from_dual_cycle(tri: MarkedTriangulation,
                          steps: list[tuple[int, int, int]]) -> CurveSpec:
    """Build a CurveSpec from (face, entry_slot, exit_slot) triples."""
    out = []
    for fid, k, ex in steps:
        d = (ex - k) % 3
        if d == 1:
            eta = +1
        elif d == 2:
            eta = -1
        else:
            raise ValueError(f"face {fid}: entry and exit slots coincide")
        out.append(CurveStep(fid, k, eta))
    return CurveSpec(tuple(out))


# -- dual cycles around and across circles ------------------------------
def _slot_of_edge(tri: MarkedTriangulation, fid: int, eid: int,
                  exclude: int | None = None) -> int:
    for si, slot in enumerate(tri.triangles[fid].slots):
        if slot.edge == eid and si != exclude:
            return si
    raise ValueError(f"edge {eid} not in face {fid}")


def collar_cycle(tri: MarkedTriangulation, circle: tuple[int, ...],
                 side: str = R) -> CurveSpec:
    """Dual cycle running parallel to a simplicial circle on one side.

    ``circle`` is a head-to-tail directed cycle of edge ids (a boundary
    component's edge list, or the surviving edges of a glued boundary).
    ``side`` selects the triangles used: 'L'/'R' relative to the stored
    orientation of the circle edges.  The result crosses exactly the
    star edges of the circle's vertices on that side.
    """
    cset = set(circle)
    # order circle edges head-to-tail
    by_src = {tri.edges[e].src: e for e in circle}
    e0 = circle[0]
    ordered = [e0]
    while len(ordered) < len(circle):
        ordered.append(by_src[tri.edges[ordered[-1]].dst])
    arcs: list[list[tuple[int, int, int]]] = []
    for eid in ordered:
        v = tri.edges[eid].dst  # walk the fan at the head vertex of eid
        fans = _fan_arcs(tri, v, eid, by_src[v], cset)
        # pick the arc on the requested side of the entering circle edge
        arc = None
        for cand in fans:
            first_fid, first_entry = cand[0][0], cand[0][1]
            sd = tri.triangles[first_fid].slots[first_entry].side
            # the triangle sits on `sd` side of eid via that slot; the
            # requested side refers to the circle edge's orientation
            if sd == ("L" if side == "L" else "R"):
                arc = cand
                break
        if arc is None:
            raise ValueError(f"no fan arc on side {side} at vertex {v}")
        if len(arc) < 2:
            raise RuntimeError(
                f"fan at vertex {v} is a single triangle; the collar "
                "cannot be embedded (refine the triangulation)")
        arcs.append(arc)
    # Consecutive fans meet in the junction triangle beside their shared
    # circle edge: fan k ends by "exiting" that edge and fan k+1 starts by
    # "entering" it.  The collar never crosses the circle, so the two
    # half-steps fuse into one traversal of the junction triangle.
    steps: list[tuple[int, int, int]] = []
    m = len(arcs)
    for idx in range(m):
        lf, lk, _ = arcs[idx][-1]
        nf, _, nx = arcs[(idx + 1) % m][0]
        if lf != nf:
            raise RuntimeError(
                "collar fans do not share their junction triangle")
        steps.extend(arcs[idx][1:-1])
        steps.append((lf, lk, nx))
    return curve_from_dual_cycle(tri, steps)


def _fan_arcs(tri: MarkedTriangulation, v: int, e_in: int, e_out: int,
              cset: set[int]):
    """Arcs of the star of v between circle edges e_in and e_out.

    Returns candidate lists of (face, entry_slot, exit_slot) crossings
    whose entry edge is e_in, whose exit edge is e_out, and which avoid
    circle edges in between.  Works for inner vertices (star cycle) and
    for boundary circles (where the star is a fan and the unique arc is
    returned).
    """
    if v in tri.inner_vertices():
        walk = tri.star_cycle(v)
    else:
        _, walk, _ = tri.star_fan(v)
    n = len(walk)
    arcs = []
    for start in range(n):
        fid, ex, eid, entry = walk[start]
        entry_eid = tri.triangles[fid].slots[entry].edge if entry is not None else None
        if entry_eid != e_in:
            continue
        arc = []
        ok = True
        for k in range(start, start + n):
            fid, ex, eid, entry = walk[k % n]
            if eid == e_out:
                arc.append((fid, entry, ex))
                break
            if eid in cset:
                ok = False
                break
            arc.append((fid, entry, ex))
        else:
            ok = False
        if ok:
            arcs.append(arc)
    return arcs


def crossing_cycle(tri: MarkedTriangulation, circles: list[tuple[int, ...]],
                   cross: list[int], forbidden_faces: set[int] = frozenset()
                   ) -> CurveSpec:
    """Closed dual cycle crossing each edge in ``cross`` exactly once.

    ``cross`` lists one chosen edge per circle to be crossed; all other
    circle edges are avoided, as are ``forbidden_faces``.  Consecutive
    chosen edges are connected by breadth-first search through the dual
    graph (triangles joined along inner edges).
    """
    avoid = set()
    for c in circles:
        avoid |= set(c)
    m = len(cross)
    # dirs[k] is the side of cross[k] the curve lands on after crossing
    # it; the segment toward the next crossing must therefore end on the
    # opposite side of cross[k+1].  Which combination is realizable
    # depends on the gluing, so all of them are tried.
    for dirs in itertools.product((L, R), repeat=m):
        segments = []
        used: set[int] = set()
        ok = True
        for k in range(m):
            e_from, e_to = cross[k], cross[(k + 1) % m]
            start = (tri.sigma_L(e_from) if dirs[k] == L
                     else tri.sigma_R(e_from))
            goal = (tri.sigma_R(e_to) if dirs[(k + 1) % m] == L
                    else tri.sigma_L(e_to))
            if start is None or goal is None:
                ok = False
                break
            seg = _dual_bfs(tri, start, goal, avoid, forbidden_faces | used)
            if seg is None:
                ok = False
                break
            segments.append(seg)
            used |= {fid for fid, _, _ in seg}
        if not ok:
            continue
        steps = []
        for seg in segments:
            steps.extend(seg)
        if len({fid for fid, _, _ in steps}) != len(steps):
            continue  # not embedded with this orientation choice
        return curve_from_dual_cycle(tri, steps)
    raise ValueError(f"no embedded dual cycle crossing edges {cross}")


def _dual_bfs(tri: MarkedTriangulation, start: tuple[int, int],
              goal: tuple[int, int], avoid_edges: set[int],
              avoid_faces: set[int]):
    """BFS in the dual graph from (face, entry_slot) to the goal face.

    Returns a list of (face, entry_slot, exit_slot) steps where the last
    step exits through the goal slot's edge.
    """
    sfid, sslot = start
    gfid, gslot = goal
    goal_eid = tri.triangles[gfid].slots[gslot].edge
    q = deque([(sfid, sslot)])
    prev: dict[tuple[int, int], tuple] = {(sfid, sslot): None}
    while q:
        fid, entry = q.popleft()
        if fid == gfid:
            # close the segment by exiting through the goal edge
            ex = _slot_of_edge(tri, fid, goal_eid, exclude=entry)
            path = [(fid, entry, ex)]
            cur = prev[(fid, entry)]
            while cur is not None:
                pfid, pentry, pex = cur
                path.append((pfid, pentry, pex))
                cur = prev[(pfid, pentry)]
            return list(reversed(path))
        for ex in range(3):
            if ex == entry:
                continue
            eid = tri.triangles[fid].slots[ex].edge
            if eid in avoid_edges or tri.is_boundary_edge(eid):
                continue
            other = [(f, s) for f, s in tri.incidences(eid) if (f, s) != (fid, ex)]
            if not other:
                continue
            nfid, nslot = other[0]
            if nfid in avoid_faces or nfid == sfid:
                continue
            if (nfid, nslot) in prev:
                continue
            prev[(nfid, nslot)] = (fid, entry, ex)
            q.append((nfid, nslot))
    return None


# -- Arf invariant ------------------------------------------------------
def symplectic_basis(detail: GenusGComplex) -> list[tuple[CurveSpec, CurveSpec]]:
    """(a_i, b_i) curve pairs for the built-in closed surfaces, g <= 2."""
    tri, g = detail.tri, detail.g
    if g == 0:
        return []
    if g == 1:
        c1 = detail.circles[0]
        a = collar_cycle(tri, c1, side=R)
        b = crossing_cycle(tri, [c1], [c1[0]])
        _check_crossings(tri, a, [c1], [0])
        _check_crossings(tri, b, [c1], [1])
        return [(a, b)]
    if g == 2:
        c1, c2, c3 = detail.circles  # two chain circles, one pair circle
        a1 = collar_cycle(tri, c1, side=R)
        a2 = collar_cycle(tri, c2, side=R)
        b1 = crossing_cycle(tri, [c1, c2, c3], [c1[0], c3[0]])
        faces_b1 = {s.face for s in b1.steps}
        b2 = crossing_cycle(tri, [c1, c2, c3], [c2[0], c3[1]],
                            forbidden_faces=faces_b1)
        _check_crossings(tri, a1, [c1, c2, c3], [0, 0, 0])
        _check_crossings(tri, a2, [c1, c2, c3], [0, 0, 0])
        _check_crossings(tri, b1, [c1, c2, c3], [1, 0, 1])
        _check_crossings(tri, b2, [c1, c2, c3], [0, 1, 1])
        if faces_b1 & {s.face for s in b2.steps}:
            raise RuntimeError("b-curves are not disjoint")
        return [(a1, b1), (a2, b2)]
    raise NotImplementedError(
        "symplectic bases ship for the built-in surfaces up to genus 2; "
        "supply curves explicitly for larger genus")


def _check_crossings(tri: MarkedTriangulation, curve: CurveSpec,
                     circles: list[tuple[int, ...]], expected: list[int]):
    crossed = tri.curve_crossed_edges(curve)
    for circ, want in zip(circles, expected):
        got = sum(1 for e in crossed if e in set(circ))
        if got != want:
            raise RuntimeError(
                f"curve crosses circle {circ} {got} times, expected {want}")


def quadratic_form(tri: MarkedTriangulation, signs: Signs,
                   curve: CurveSpec) -> int:
    """q(curve) in {0,1}: 1 iff the frame curve has a closed lift."""
    return (1 + curve_lift_sign(tri, signs, curve)) // 2


def arf_invariant(detail: GenusGComplex, signs: Signs,
                  basis: list[tuple[CurveSpec, CurveSpec]] | None = None) -> int:
    tri = detail.tri
    if not tri.is_closed():
        raise ValueError("Arf invariant requires a closed surface")
    if not is_admissible(tri, signs, ()):
        raise ValueError("Arf invariant requires admissible edge signs")
    if basis is None:
        basis = symplectic_basis(detail)
    total = 0
    for a, b in basis:
        total += quadratic_form(tri, signs, a) * quadratic_form(tri, signs, b)
    return (-1) ** (total & 1)


# -- sign transport through gluing --------------------------------------
def glue_edge_signs(signs: Signs, glue_map, eps: int) -> Signs:
    """Transport edge signs through glue_boundaries_with_map output."""
    if eps not in (+1, -1):
        raise ValueError("gluing parameter must be +1 or -1")
    out = dict(signs)
    for a_eid, b_eid in glue_map.pairs:
        out[b_eid] = eps * signs[a_eid] * signs[b_eid]
        del out[a_eid]
    return out
