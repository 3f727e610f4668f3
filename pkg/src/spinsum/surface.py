"""Marked combinatorial surfaces.

A marked triangulation is an oriented Delta-complex in which every edge
carries an orientation (ordered vertex pair), every triangle carries a
preferred ("marked") edge occupying slot 0 of its cyclic slot order
(slots 0,1,2 run counterclockwise along the triangle boundary), and every
boundary component is parametrised by exactly three edges at positions
0,1,2.

Conventions baked into the data:
  * a triangle sits on side 'L' of an edge in a slot iff traversing that
    slot counterclockwise follows the edge's stored orientation
    (src -> dst); on side 'R' the traversal runs dst -> src;
  * boundary edges are stored with the orientation *opposing* the one
    induced by their unique adjacent triangle, so boundary slots always
    have side flag 'R';
  * the three edges of a boundary component form a head-to-tail directed
    cycle in their stored orientations (position-0 edge's dst is the
    position-1 edge's src, and so on); the distinguished vertex of the
    component is the source of its position-0 edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

L, R = "L", "R"


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int


@dataclass(frozen=True)
class Slot:
    edge: int
    side: str  # 'L' or 'R'


@dataclass(frozen=True)
class Triangle:
    slots: tuple[Slot, Slot, Slot]


@dataclass(frozen=True)
class BoundaryComponent:
    edges: tuple[int, int, int]  # edge ids at positions 0, 1, 2


@dataclass(frozen=True)
class CurveStep:
    face: int
    entry_slot: int
    eta: int  # +1 or -1; exit slot is (entry_slot + eta) mod 3


@dataclass(frozen=True)
class CurveSpec:
    steps: tuple[CurveStep, ...]


class MarkedTriangulation:
    def __init__(self, edges: dict[int, Edge], triangles: dict[int, Triangle],
                 boundaries: Iterable[BoundaryComponent] = ()):
        self.edges = dict(edges)
        self.triangles = dict(triangles)
        self.boundaries = tuple(boundaries)
        self._incidence: dict[int, list[tuple[int, int]]] = {}
        for fid, tri in self.triangles.items():
            for si, slot in enumerate(tri.slots):
                self._incidence.setdefault(slot.edge, []).append((fid, si))

    # -- basic queries --------------------------------------------------
    @property
    def vertices(self) -> set[int]:
        vs = set()
        for e in self.edges.values():
            vs.add(e.src)
            vs.add(e.dst)
        return vs

    def incidences(self, eid: int) -> list[tuple[int, int]]:
        return self._incidence.get(eid, [])

    def is_boundary_edge(self, eid: int) -> bool:
        return len(self.incidences(eid)) == 1

    def face_on_side(self, eid: int, side: str) -> tuple[int, int] | None:
        for fid, si in self.incidences(eid):
            if self.triangles[fid].slots[si].side == side:
                return fid, si
        return None

    def sigma_L(self, eid: int) -> tuple[int, int] | None:
        return self.face_on_side(eid, L)

    def sigma_R(self, eid: int) -> tuple[int, int] | None:
        return self.face_on_side(eid, R)

    def traversal(self, fid: int, si: int) -> tuple[int, int]:
        """(start, end) vertices of slot si traversed counterclockwise."""
        slot = self.triangles[fid].slots[si]
        e = self.edges[slot.edge]
        return (e.src, e.dst) if slot.side == L else (e.dst, e.src)

    def corner_vertex(self, fid: int, c: int) -> int:
        """Vertex at the corner between slots c and c+1 (= end of slot c)."""
        return self.traversal(fid, c)[1]

    def boundary_of_edge(self, eid: int) -> tuple[int, int] | None:
        """(boundary index (1-based), position) if eid is a boundary edge."""
        for bi, b in enumerate(self.boundaries, start=1):
            for pos, e in enumerate(b.edges):
                if e == eid:
                    return bi, pos
        return None

    def distinguished_vertex(self, bi: int) -> int:
        b = self.boundaries[bi - 1]
        return self.edges[b.edges[0]].src

    def boundary_vertices(self, bi: int) -> set[int]:
        b = self.boundaries[bi - 1]
        vs = set()
        for eid in b.edges:
            vs.add(self.edges[eid].src)
            vs.add(self.edges[eid].dst)
        return vs

    def all_boundary_vertices(self) -> set[int]:
        vs = set()
        for bi in range(1, len(self.boundaries) + 1):
            vs |= self.boundary_vertices(bi)
        return vs

    def inner_vertices(self) -> set[int]:
        return self.vertices - self.all_boundary_vertices()

    def boundary_index_of_vertex(self, v: int) -> int | None:
        for bi in range(1, len(self.boundaries) + 1):
            if v in self.boundary_vertices(bi):
                return bi
        return None

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def genus(self) -> int:
        chi = self.euler_characteristic()
        b = len(self.boundaries)
        g2 = 2 - b - chi
        if g2 < 0 or g2 % 2:
            raise ValueError("complex has no consistent genus")
        return g2 // 2

    def is_closed(self) -> bool:
        return not self.boundaries

    # -- star walks -----------------------------------------------------
    def _step(self, fid: int, c: int):
        """One counterclockwise step around corner (fid, c).

        Returns (exit_eid, exit_slot_index, next_fid, entry_slot_in_next)
        or None when the exit edge is a boundary edge.
        """
        slot = self.triangles[fid].slots[c]
        eid = slot.edge
        nxt = None
        for gfid, gsi in self.incidences(eid):
            if (gfid, gsi) != (fid, c):
                nxt = (gfid, gsi)
        if nxt is None:
            return eid, c, None, None
        return eid, c, nxt[0], nxt[1]

    def star_cycle(self, v: int) -> list[tuple[int, int, int, int]]:
        """Counterclockwise cycle of the star of an inner vertex.

        Returns a list of (fid, exit_slot, exit_eid, entry_slot) where
        ``entry_slot`` is the slot through which fid was *entered* by the
        walk.  Each incidence of v to a triangle corner appears once.
        """
        # find a corner at v
        start = None
        for fid, tri in self.triangles.items():
            for c in range(3):
                if self.corner_vertex(fid, c) == v:
                    start = (fid, c)
                    break
            if start:
                break
        if start is None:
            raise ValueError(f"vertex {v} has no incident corner")
        out = []
        fid, c = start
        entry_slot = None  # filled in when the walk closes
        while True:
            eid, exit_slot, nfid, nsi = self._step(fid, c)
            if nfid is None:
                raise ValueError(f"vertex {v} is not inner")
            out.append((fid, exit_slot, eid, entry_slot))
            entry_slot = nsi
            nc = (nsi - 1) % 3
            if self.corner_vertex(nfid, nc) != v:
                raise ValueError("star walk left the vertex (invalid complex)")
            fid, c = nfid, nc
            if (fid, c) == start:
                break
        # the first record's entry slot is the last computed one
        out[0] = (out[0][0], out[0][1], out[0][2], entry_slot)
        return out

    def star_fan(self, v: int):
        """Counterclockwise fan of the star of a boundary vertex.

        Returns (entry_boundary_eid, records, exit_boundary_eid) with
        records as in star_cycle; the walk starts at the boundary edge
        whose dst is v and ends when it exits through the boundary edge
        whose src is v.
        """
        start_eid = None
        for b in self.boundaries:
            for eid in b.edges:
                if self.edges[eid].dst == v:
                    start_eid = eid
        if start_eid is None:
            raise ValueError(f"vertex {v} is not on a boundary")
        hit = self.incidences(start_eid)
        assert len(hit) == 1
        fid, nsi = hit[0]
        records = []
        entry_slot = nsi
        c = (nsi - 1) % 3
        if self.corner_vertex(fid, c) != v:
            raise ValueError("boundary fan start inconsistent")
        while True:
            eid, exit_slot, nfid, nnsi = self._step(fid, c)
            records.append((fid, exit_slot, eid, entry_slot))
            if nfid is None:
                if self.edges[eid].src != v:
                    raise ValueError("boundary fan ended on wrong edge")
                return start_eid, records, eid
            entry_slot = nnsi
            c = (nnsi - 1) % 3
            if self.corner_vertex(nfid, c) != v:
                raise ValueError("star walk left the vertex (invalid complex)")
            fid = nfid

    # -- curves ---------------------------------------------------------
    def curve_exit_slot(self, step: CurveStep) -> int:
        return (step.entry_slot + step.eta) % 3

    def curve_crossed_edges(self, curve: CurveSpec) -> list[int]:
        return [self.triangles[s.face].slots[self.curve_exit_slot(s)].edge
                for s in curve.steps]

    def validate_curve(self, curve: CurveSpec) -> list[str]:
        errs = []
        n = len(curve.steps)
        if n == 0:
            return ["curve is empty"]
        for i, s in enumerate(curve.steps):
            if s.face not in self.triangles:
                errs.append(f"step {i}: unknown face {s.face}")
                continue
            if s.eta not in (+1, -1):
                errs.append(f"step {i}: eta must be +1 or -1")
            nxt = curve.steps[(i + 1) % n]
            exit_eid = self.triangles[s.face].slots[self.curve_exit_slot(s)].edge
            if self.is_boundary_edge(exit_eid):
                errs.append(f"step {i}: crosses boundary edge {exit_eid}")
                continue
            entry_eid = self.triangles[nxt.face].slots[nxt.entry_slot].edge
            if exit_eid != entry_eid:
                errs.append(f"step {i}: exit edge {exit_eid} does not match "
                            f"next entry edge {entry_eid}")
        return errs


# -- validation ---------------------------------------------------------
def validate(tri: MarkedTriangulation) -> list[str]:
    errs: list[str] = []
    for fid, t in tri.triangles.items():
        if len(t.slots) != 3:
            errs.append(f"triangle {fid}: must have 3 slots")
            continue
        for si, slot in enumerate(t.slots):
            if slot.edge not in tri.edges:
                errs.append(f"triangle {fid} slot {si}: unknown edge {slot.edge}")
            if slot.side not in (L, R):
                errs.append(f"triangle {fid} slot {si}: bad side {slot.side}")
        # counterclockwise traversal must close head-to-tail
        try:
            for c in range(3):
                if tri.traversal(fid, c)[1] != tri.traversal(fid, (c + 1) % 3)[0]:
                    errs.append(f"triangle {fid}: slot traversals do not chain "
                                f"at corner {c}")
        except KeyError:
            pass
    for eid in tri.edges:
        inc = tri.incidences(eid)
        if len(inc) == 0:
            errs.append(f"edge {eid}: not incident to any triangle")
        elif len(inc) > 2:
            errs.append(f"edge {eid}: non-manifold edge ({len(inc)} slots)")
        elif len(inc) == 2:
            sides = {tri.triangles[f].slots[s].side for f, s in inc}
            if len(sides) != 2:
                errs.append(f"edge {eid}: both incident slots on side "
                            f"{sides.pop()}")
            if tri.boundary_of_edge(eid) is not None:
                errs.append(f"edge {eid}: listed on a boundary but has two "
                            f"incident triangles")
        else:
            if tri.boundary_of_edge(eid) is None:
                errs.append(f"edge {eid}: single incidence but not listed on "
                            f"a boundary")
            else:
                fid, si = inc[0]
                if tri.triangles[fid].slots[si].side != R:
                    errs.append(f"edge {eid}: boundary edge orientation "
                                f"convention violated (triangle must sit on "
                                f"side R)")
    for bi, b in enumerate(tri.boundaries, start=1):
        if len(b.edges) != 3:
            errs.append(f"boundary {bi}: must have 3 edges")
            continue
        missing = [e for e in b.edges if e not in tri.edges]
        if missing:
            errs.append(f"boundary {bi}: unknown edges {missing}")
            continue
        for p in range(3):
            a = tri.edges[b.edges[p]]
            c = tri.edges[b.edges[(p + 1) % 3]]
            if a.dst != c.src:
                errs.append(f"boundary {bi}: edges at positions {p},{(p+1)%3} "
                            f"do not chain head-to-tail")
        if len(tri.boundary_vertices(bi)) != 3:
            errs.append(f"boundary {bi}: must have 3 vertices")
    if not errs:
        chi = tri.euler_characteristic()
        g2 = 2 - len(tri.boundaries) - chi
        if g2 < 0 or g2 % 2:
            errs.append(f"Euler characteristic {chi} inconsistent with any "
                        f"genus for {len(tri.boundaries)} boundaries")
    return errs


# -- reference complexes ------------------------------------------------
def build_cylinder() -> MarkedTriangulation:
    edges = {
        1: Edge(1, 2), 2: Edge(2, 3), 3: Edge(3, 1),
        4: Edge(4, 5), 5: Edge(5, 6), 6: Edge(6, 4),
        7: Edge(1, 4), 8: Edge(2, 4), 9: Edge(2, 6),
        10: Edge(3, 6), 11: Edge(3, 5), 12: Edge(1, 5),
    }
    T = lambda a, sa, b, sb, c, sc: Triangle((Slot(a, sa), Slot(b, sb), Slot(c, sc)))
    triangles = {
        1: T(7, L, 8, R, 1, R),
        2: T(8, L, 6, R, 9, R),
        3: T(9, L, 10, R, 2, R),
        4: T(10, L, 5, R, 11, R),
        5: T(11, L, 12, R, 3, R),
        6: T(12, L, 4, R, 7, R),
    }
    boundaries = [BoundaryComponent((1, 2, 3)), BoundaryComponent((4, 5, 6))]
    return MarkedTriangulation(edges, triangles, boundaries)


def build_pair_of_pants() -> MarkedTriangulation:
    edges = {
        1: Edge(1, 2), 2: Edge(2, 3), 3: Edge(3, 1),
        4: Edge(4, 5), 5: Edge(5, 6), 6: Edge(6, 4),
        7: Edge(7, 8), 8: Edge(8, 9), 9: Edge(9, 7),
        10: Edge(2, 7), 11: Edge(2, 5), 12: Edge(2, 4),
        13: Edge(2, 6), 14: Edge(1, 7), 15: Edge(1, 8),
        16: Edge(1, 9), 17: Edge(5, 9), 18: Edge(6, 9),
        19: Edge(3, 6), 20: Edge(3, 9), 21: Edge(5, 7),
    }
    T = lambda a, sa, b, sb, c, sc: Triangle((Slot(a, sa), Slot(b, sb), Slot(c, sc)))
    triangles = {
        1: T(1, R, 14, L, 10, R),
        2: T(21, R, 11, R, 10, L),
        3: T(4, R, 12, R, 11, L),
        4: T(6, R, 13, R, 12, L),
        5: T(2, R, 13, L, 19, R),
        6: T(7, R, 14, R, 15, L),
        7: T(8, R, 15, R, 16, L),
        8: T(3, R, 20, L, 16, R),
        9: T(9, R, 17, R, 21, L),
        10: T(5, R, 17, L, 18, R),
        11: T(18, L, 20, R, 19, L),
    }
    boundaries = [BoundaryComponent((1, 2, 3)), BoundaryComponent((4, 5, 6)),
                  BoundaryComponent((7, 8, 9))]
    return MarkedTriangulation(edges, triangles, boundaries)


def build_disk() -> MarkedTriangulation:
    """A single triangle whose three edges form one boundary component."""
    edges = {1: Edge(1, 2), 2: Edge(2, 3), 3: Edge(3, 1)}
    triangles = {1: Triangle((Slot(1, R), Slot(3, R), Slot(2, R)))}
    return MarkedTriangulation(edges, triangles, [BoundaryComponent((1, 2, 3))])


# -- gluing -------------------------------------------------------------
@dataclass(frozen=True)
class GlueMap:
    """Relabeling data of a glue_boundaries call.

    pairs[p] = (i-side edge id, j-side edge id) for positions p on
    boundary i (the j-side edge survives).  vertex_map sends every old
    vertex id to its representative in the quotient.
    """
    pairs: tuple[tuple[int, int], ...]
    vertex_map: dict[int, int]


def glue_boundaries_with_map(tri: MarkedTriangulation, i: int, j: int):
    B = len(tri.boundaries)
    if i == j or not (1 <= i <= B) or not (1 <= j <= B):
        raise ValueError(f"invalid boundary pair ({i}, {j})")
    bi, bj = tri.boundaries[i - 1], tri.boundaries[j - 1]
    pairs = tuple((bi.edges[p], bj.edges[(2 - p) % 3]) for p in range(3))
    # vertex identifications: a.dst ~ b.src and a.src ~ b.dst per pair
    parent: dict[int, int] = {v: v for v in tri.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for a_eid, b_eid in pairs:
        a, b = tri.edges[a_eid], tri.edges[b_eid]
        union(a.dst, b.src)
        union(a.src, b.dst)
    vmap = {v: find(v) for v in tri.vertices}

    removed = {a for a, _ in pairs}
    edge_rename = {a: b for a, b in pairs}
    new_edges = {}
    for eid, e in tri.edges.items():
        if eid in removed:
            continue
        new_edges[eid] = Edge(vmap[e.src], vmap[e.dst])
    new_triangles = {}
    for fid, t in tri.triangles.items():
        slots = []
        for slot in t.slots:
            if slot.edge in edge_rename:
                # the i-side triangle becomes the left face of the merged edge
                slots.append(Slot(edge_rename[slot.edge], L))
            else:
                slots.append(slot)
        new_triangles[fid] = Triangle(tuple(slots))
    new_bd = [b for k, b in enumerate(tri.boundaries, start=1) if k not in (i, j)]
    out = MarkedTriangulation(new_edges, new_triangles, new_bd)
    return out, GlueMap(pairs, vmap)


def glue_boundaries(tri: MarkedTriangulation, i: int, j: int) -> MarkedTriangulation:
    out, _ = glue_boundaries_with_map(tri, i, j)
    return out


def disjoint_union(t1: MarkedTriangulation, t2: MarkedTriangulation):
    """Disjoint union; returns (tri, edge_offset, vertex_offset, face_offset)."""
    eo = max(t1.edges, default=0)
    vo = max(t1.vertices, default=0)
    fo = max(t1.triangles, default=0)
    edges = dict(t1.edges)
    for eid, e in t2.edges.items():
        edges[eid + eo] = Edge(e.src + vo, e.dst + vo)
    triangles = dict(t1.triangles)
    for fid, t in t2.triangles.items():
        triangles[fid + fo] = Triangle(tuple(Slot(s.edge + eo, s.side)
                                             for s in t.slots))
    bds = list(t1.boundaries) + [
        BoundaryComponent(tuple(e + eo for e in b.edges)) for b in t2.boundaries]
    return MarkedTriangulation(edges, triangles, bds), eo, vo, fo


@dataclass
class GenusGComplex:
    """A closed genus-g complex plus the bookkeeping its curves need."""
    tri: MarkedTriangulation
    g: int
    circles: list[tuple[int, int, int]]  # surviving edge ids of each glued circle
    glue_maps: list[GlueMap]
    # For g >= 2: circles are ordered as the 2g-2 "chain" circles followed
    # by the g-1 "pair" circles of the documented schedule.
    n_chain: int = 0


def genus_g_closed_detail(g: int) -> GenusGComplex:
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if g == 0:
        two, *_ = disjoint_union(build_disk(), build_disk())
        tri, gm = glue_boundaries_with_map(two, 1, 2)
        return GenusGComplex(tri, 0, [tuple(b for _, b in gm.pairs)], [gm])
    if g == 1:
        tri, gm = glue_boundaries_with_map(build_cylinder(), 1, 2)
        return GenusGComplex(tri, 1, [tuple(b for _, b in gm.pairs)], [gm], 0)
    # g >= 2: cyclic chain of 2g-2 pairs of pants.  Boundary bookkeeping:
    # after each glue the remaining boundaries keep their relative order.
    n = 2 * g - 2
    tri = build_pair_of_pants()
    # boundary labels: list of (piece, local boundary 1..3) in current order
    labels = [(0, 1), (0, 2), (0, 3)]
    for k in range(1, n):
        tri, _, _, _ = disjoint_union(tri, build_pair_of_pants())
        labels += [(k, 1), (k, 2), (k, 3)]
    circles = []
    glue_maps = []

    def glue(lbl_a, lbl_b):
        nonlocal tri
        i = labels.index(lbl_a) + 1
        j = labels.index(lbl_b) + 1
        tri, gm = glue_boundaries_with_map(tri, i, j)
        for lbl in (lbl_a, lbl_b):
            labels.remove(lbl)
        circles.append(tuple(b for _, b in gm.pairs))
        glue_maps.append(gm)

    for k in range(n):
        glue((k, 3), ((k + 1) % n, 1))
    for k in range(0, n, 2):
        glue((k, 2), (k + 1, 2))
    return GenusGComplex(tri, g, circles, glue_maps, n_chain=n)


def genus_g_closed(g: int) -> MarkedTriangulation:
    return genus_g_closed_detail(g).tri


# -- JSON ---------------------------------------------------------------
def to_json(tri: MarkedTriangulation) -> dict:
    return {
        "triangles": {str(fid): [{"edge": s.edge, "side": s.side}
                                 for s in t.slots]
                      for fid, t in sorted(tri.triangles.items())},
        "edges": {str(eid): {"src": e.src, "dst": e.dst}
                  for eid, e in sorted(tri.edges.items())},
        "boundaries": [[{"edge": e, "position": p}
                        for p, e in enumerate(b.edges)]
                       for b in tri.boundaries],
    }


def from_json(obj: dict) -> MarkedTriangulation:
    edges = {int(k): Edge(v["src"], v["dst"]) for k, v in obj["edges"].items()}
    triangles = {int(k): Triangle(tuple(Slot(s["edge"], s["side"]) for s in v))
                 for k, v in obj["triangles"].items()}
    bds = []
    for b in obj.get("boundaries", []):
        es = [None] * 3
        for rec in b:
            es[rec["position"]] = rec["edge"]
        bds.append(BoundaryComponent(tuple(es)))
    tri = MarkedTriangulation(edges, triangles, bds)
    errs = validate(tri)
    if errs:
        raise ValueError("invalid surface file: " + "; ".join(errs))
    return tri


def load(path: str) -> MarkedTriangulation:
    with open(path) as fh:
        return from_json(json.load(fh))
