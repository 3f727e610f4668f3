"""State-sum evaluation of marked triangulations with edge signs.

The dual diagram of a complex has one trivalent vertex per triangle
(valued by the triangle tensor t, in-legs ordered slot 0,1,2) and one
bivalent vertex per edge (valued by the copairing c_{s(e)}, first output
leg toward the left face — or toward the boundary for boundary edges —
second toward the right face).  The amplitude contracts this diagram and
then flips the 3 legs per boundary component (ordered by boundary index,
then position 0,1,2) from outputs to inputs through the pairing b.

Contraction is the "blob" method: copairings are absorbed into a growing
pure-output tensor by plain tensor product, each triangle tensor is
applied by Koszul-permuting its three source legs to the end and
contracting, and the surviving legs are Koszul-permuted into boundary
order.  An independent exhaustive oracle assigns basis indices to every
edge directly and multiplies explicit crossing signs of a fixed planar
layering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .algebra import DerivedStructure, GradedFrobeniusAlgebra, derive, \
    passes_invariance_predicates
from .spin import Signs, is_admissible
from .surface import MarkedTriangulation
from .tensor import BudgetExceeded, GradedTensor, inversion_pairs

DEFAULT_MAX_OPEN_LEGS = 16
DEFAULT_MAX_ENTRIES = 10**7


@dataclass(frozen=True)
class WireTarget:
    kind: str  # 'face' or 'cod'
    face: int = 0
    slot: int = 0
    boundary: int = 0
    position: int = 0


@dataclass
class DiagramGraph:
    tri: MarkedTriangulation
    signs: Signs
    # per edge id: (target of first output leg, target of second output leg)
    wires: dict[int, tuple[WireTarget, WireTarget]]
    cod_order: list[tuple[int, int]]  # (boundary index, position)


def build_graph(tri: MarkedTriangulation, signs: Signs) -> DiagramGraph:
    wires = {}
    for eid in tri.edges:
        left = tri.sigma_L(eid)
        right = tri.sigma_R(eid)
        if right is None:
            raise ValueError(f"edge {eid}: no face on the right side")
        if left is None:
            bp = tri.boundary_of_edge(eid)
            if bp is None:
                raise ValueError(f"edge {eid}: boundary edge not on a boundary")
            first = WireTarget("cod", boundary=bp[0], position=bp[1])
        else:
            first = WireTarget("face", face=left[0], slot=left[1])
        second = WireTarget("face", face=right[0], slot=right[1])
        wires[eid] = (first, second)
    cod_order = [(bi, p) for bi in range(1, len(tri.boundaries) + 1)
                 for p in range(3)]
    return DiagramGraph(tri, signs, wires, cod_order)


@dataclass
class Amplitude:
    tensor: GradedTensor  # all legs are inputs (or a scalar)
    boundaries: int
    leg_labels: list[tuple[int, int]]  # (boundary index, position) per leg
    types: tuple[str, ...] = ()

    def scalar_value(self):
        return self.tensor.scalar_value()

    def __eq__(self, other):
        if not isinstance(other, Amplitude):
            return NotImplemented
        return (self.tensor == other.tensor
                and self.leg_labels == other.leg_labels)


def plan_contraction(graph: DiagramGraph) -> list[tuple[str, int]]:
    """Greedy schedule of ('c', edge id) / ('t', face id) actions.

    Chooses the next triangle needing the fewest new copairings (ties by
    smallest face id), absorbing its missing copairings in edge-id order;
    this greedily minimizes the open-leg count of the blob.
    """
    absorbed: set[int] = set()
    done: set[int] = set()
    plan: list[tuple[str, int]] = []
    faces = graph.tri.triangles
    while len(done) < len(faces):
        best = None
        for fid in sorted(faces):
            if fid in done:
                continue
            missing = sorted({s.edge for s in faces[fid].slots} - absorbed)
            key = (len(missing), fid)
            if best is None or key < best[0]:
                best = (key, fid, missing)
        _, fid, missing = best
        for eid in missing:
            plan.append(("c", eid))
            absorbed.add(eid)
        plan.append(("t", fid))
        done.add(fid)
    for eid in sorted(set(graph.wires) - absorbed):
        plan.append(("c", eid))
    return plan


def is_valid_schedule(graph: DiagramGraph, plan) -> bool:
    absorbed = set()
    faces = graph.tri.triangles
    count_c = sum(1 for k, _ in plan if k == "c")
    count_t = sum(1 for k, _ in plan if k == "t")
    if count_c != len(graph.wires) or count_t != len(faces):
        return False
    for kind, tid in plan:
        if kind == "c":
            if tid in absorbed:
                return False
            absorbed.add(tid)
        else:
            if any(s.edge not in absorbed for s in faces[tid].slots):
                return False
    return True


def contract_graph(graph: DiagramGraph, D: DerivedStructure,
                   plan=None, max_open_legs=DEFAULT_MAX_OPEN_LEGS,
                   max_entries=DEFAULT_MAX_ENTRIES) -> GradedTensor:
    """Contract the diagram to a pure-output tensor in codomain leg order."""
    if plan is None:
        plan = plan_contraction(graph)
    elif not is_valid_schedule(graph, plan):
        raise ValueError("invalid contraction schedule")
    if all(p == 0 for p in D.t.in_legs[0]):
        return _contract_graph_ungraded(graph, D, plan, max_open_legs,
                                        max_entries)
    tri = graph.tri
    blob = GradedTensor.scalar(D.mu.field, D.mu.field.one())
    open_targets: list[WireTarget] = []
    for kind, tid in plan:
        if kind == "c":
            blob = blob.tensor(D.c(graph.signs[tid]))
            open_targets.extend(graph.wires[tid])
        else:
            slots_pos = []
            for slot in range(3):
                want = WireTarget("face", face=tid, slot=slot)
                slots_pos.append(open_targets.index(want))
            rest = [p for p in range(len(open_targets)) if p not in slots_pos]
            order = rest + slots_pos
            blob = blob.permute_out(order).contract_out_with(D.t)
            open_targets = [open_targets[p] for p in rest]
        blob.check_budget(max_open_legs + 1, max_entries)
    # permute surviving legs into codomain order
    want = [WireTarget("cod", boundary=bi, position=p)
            for bi, p in graph.cod_order]
    assert sorted(map(repr, open_targets)) == sorted(map(repr, want))
    order = [open_targets.index(w) for w in want]
    return blob.permute_out(order)


def _contract_graph_ungraded(graph: DiagramGraph, D: DerivedStructure,
                             plan, max_open_legs, max_entries) -> GradedTensor:
    """Fused contraction for trivially graded algebras (no Koszul signs).

    A copairing is kept pending until a triangle consumes one of its
    legs, so the blob never materializes the blob-times-copairing
    product; per triangle a small fused table (matched open-leg indices
    -> new-leg indices and coefficient) is precomputed and applied in one
    sweep over the blob.  Sign-free because all leg parities are even,
    so every permutation and crossing sign of the generic path is +1.
    """
    F = D.mu.field
    tdat = D.t.data
    leg = D.t.in_legs[0]
    blob: dict[tuple, object] = {(): F.one()}
    open_targets: list[WireTarget] = []
    pending: dict[int, dict] = {}
    for kind, tid in plan:
        if kind == "c":
            pending[tid] = D.c(graph.signs[tid]).data
            continue
        # classify the three legs of the triangle tensor
        slot_src = []  # per slot: ('open', blob position) | ('pend', eid, li)
        used: dict[int, list[tuple[int, int]]] = {}  # eid -> [(slot, li)]
        for s in range(3):
            want = WireTarget("face", face=tid, slot=s)
            if want in open_targets:
                slot_src.append(("open", open_targets.index(want)))
                continue
            hit = None
            for eid in pending:
                for li, tgt in enumerate(graph.wires[eid]):
                    if tgt == want:
                        hit = (eid, li)
                        break
                if hit:
                    break
            if hit is None:
                raise ValueError("invalid contraction schedule")
            slot_src.append(("pend",) + hit)
            used.setdefault(hit[0], []).append((s, hit[1]))
        used_eids = sorted(used)
        # new open legs: the unconsumed ends of the copairings used here
        new_targets = []
        free_ends = []  # (eid, li) in new-leg order
        for eid in used_eids:
            taken = {li for _, li in used[eid]}
            for li in range(2):
                if li not in taken:
                    free_ends.append((eid, li))
                    new_targets.append(graph.wires[eid][li])
        # fused table: matched open-leg indices -> [(new indices, coeff)]
        fused: dict[tuple, list] = {}
        for tkey, tv in tdat.items():
            acc = [((), tv)]
            ok = True
            for eid in used_eids:
                cdat = pending[eid]
                fixed = {li: tkey[s] for s, li in used[eid]}
                opts = []
                for ckey, cv in cdat.items():
                    if any(ckey[li] != want for li, want in fixed.items()):
                        continue
                    free = tuple(ckey[li] for li in range(2)
                                 if li not in fixed)
                    opts.append((free, cv))
                if not opts:
                    ok = False
                    break
                acc = [(nk + free, F.mul(av, cv))
                       for nk, av in acc for free, cv in opts]
            if not ok:
                continue
            mk = tuple(tkey[s] for s in range(3) if slot_src[s][0] == "open")
            bucket = fused.setdefault(mk, [])
            bucket.extend(acc)
        for eid in used_eids:
            del pending[eid]
        matched_pos = [src[1] for src in slot_src if src[0] == "open"]
        rest = [p for p in range(len(open_targets)) if p not in matched_pos]
        new_blob: dict[tuple, object] = {}
        for key, v in blob.items():
            hits = fused.get(tuple(key[p] for p in matched_pos))
            if not hits:
                continue
            base = tuple(key[p] for p in rest)
            for nk, cv in hits:
                k2 = base + nk
                cur = new_blob.get(k2)
                val = F.mul(v, cv)
                if cur is None:
                    new_blob[k2] = val
                else:
                    sv = F.add(cur, val)
                    if F.is_zero(sv):
                        del new_blob[k2]
                    else:
                        new_blob[k2] = sv
        blob = new_blob
        open_targets = [open_targets[p] for p in rest] + new_targets
        if len(open_targets) > max_open_legs:
            raise BudgetExceeded(
                f"open legs {len(open_targets)} exceed bound {max_open_legs}")
        if len(blob) > max_entries:
            raise BudgetExceeded(
                f"{len(blob)} stored coefficients exceed budget {max_entries}")
    # copairings never consumed by a triangle (edges meeting no face)
    for eid, cdat in pending.items():
        blob = {k + ck: F.mul(v, cv) for k, v in blob.items()
                for ck, cv in cdat.items()}
        open_targets.extend(graph.wires[eid])
    want = [WireTarget("cod", boundary=bi, position=p)
            for bi, p in graph.cod_order]
    assert sorted(map(repr, open_targets)) == sorted(map(repr, want))
    order = [open_targets.index(w) for w in want]
    out = GradedTensor(F, tuple([leg] * len(order)), (), {})
    for key, v in blob.items():
        out.data[tuple(key[p] for p in order)] = v
    return out


def evaluate_raw(tri: MarkedTriangulation, signs: Signs,
                 A: GradedFrobeniusAlgebra, plan=None,
                 max_open_legs=DEFAULT_MAX_OPEN_LEGS,
                 max_entries=DEFAULT_MAX_ENTRIES,
                 derived: DerivedStructure | None = None) -> Amplitude:
    """T'_A: the state sum for an arbitrary (total) sign assignment."""
    D = derived if derived is not None else derive(A)
    graph = build_graph(tri, signs)
    raw = contract_graph(graph, D, plan, max_open_legs, max_entries)
    flipped = raw.flip_out_to_in(D.b)
    return Amplitude(flipped, len(tri.boundaries), list(graph.cod_order))


def evaluate(tri: MarkedTriangulation, signs: Signs, types: tuple[str, ...],
             A: GradedFrobeniusAlgebra, plan=None,
             derived: DerivedStructure | None = None) -> Amplitude:
    if not is_admissible(tri, signs, types):
        raise ValueError("edge signs are not admissible for the given "
                         "boundary types")
    if not passes_invariance_predicates(A):
        raise ValueError("algebra does not satisfy the invariance predicates")
    amp = evaluate_raw(tri, signs, A, plan, derived=derived)
    amp.types = tuple(types)
    return amp


# -- exhaustive oracle --------------------------------------------------
def contract_exhaustive(graph: DiagramGraph, A: GradedFrobeniusAlgebra,
                        max_terms: int = 10**8) -> Amplitude:
    """Independent brute-force contraction.

    Fixes one planar layering: sources are the copairing legs in edge-id
    order (first leg, then second per edge); targets are the triangle
    in-legs (face-id order, slots 0,1,2) followed by the codomain legs.
    Each wire assignment contributes the product of copairing and
    triangle coefficients times (-1)^(sum of |a||b| over crossing pairs
    of the layering).  The output flip through b is applied entrywise.
    """
    D = derive(A)
    F = A.field
    tri = graph.tri
    edge_ids = sorted(graph.wires)
    # source positions: 2 per edge
    src_pos = {}
    for k, eid in enumerate(edge_ids):
        src_pos[(eid, 0)] = 2 * k
        src_pos[(eid, 1)] = 2 * k + 1
    # target order: triangles then codomain
    tgt_index = {}
    pos = 0
    for fid in sorted(tri.triangles):
        for slot in range(3):
            tgt_index[WireTarget("face", face=fid, slot=slot)] = pos
            pos += 1
    cod_positions = []
    for bi, p in graph.cod_order:
        tgt_index[WireTarget("cod", boundary=bi, position=p)] = pos
        cod_positions.append(pos)
        pos += 1
    # permutation: source position -> target position
    perm = [0] * (2 * len(edge_ids))
    for eid in edge_ids:
        first, second = graph.wires[eid]
        perm[src_pos[(eid, 0)]] = tgt_index[first]
        perm[src_pos[(eid, 1)]] = tgt_index[second]
    cross = [(a, b) for a in range(len(perm)) for b in range(a + 1, len(perm))
             if perm[a] > perm[b]]
    # nonzero copairing entries per edge
    c_entries = {}
    for eid in edge_ids:
        c = D.c(graph.signs[eid])
        c_entries[eid] = list(c.data.items())
    # triangle membership for pruning: face -> its three source wire ends
    face_sources: dict[int, list[tuple[int, int]]] = {}
    for eid in edge_ids:
        for li, tgt in enumerate(graph.wires[eid]):
            if tgt.kind == "face":
                face_sources.setdefault(tgt.face, []).append((eid, li))
    # order edges so triangles complete as early as possible
    order: list[int] = []
    seen: set[int] = set()
    for fid in sorted(tri.triangles):
        for slot in range(3):
            eid = tri.triangles[fid].slots[slot].edge
            if eid not in seen:
                seen.add(eid)
                order.append(eid)
    for eid in edge_ids:
        if eid not in seen:
            order.append(eid)
    # which faces complete at each step of the order
    complete_at: list[list[int]] = [[] for _ in order]
    rank = {eid: k for k, eid in enumerate(order)}
    for fid in sorted(tri.triangles):
        last = max(rank[s.edge] for s in tri.triangles[fid].slots)
        complete_at[last].append(fid)
    parity = A.parity
    result: dict[tuple, object] = {}
    assign: dict[tuple[int, int], int] = {}  # (eid, leg index) -> basis index

    def face_value(fid) -> object | None:
        key = [0, 0, 0]
        for eid, li in face_sources[fid]:
            tgt = graph.wires[eid][li]
            key[tgt.slot] = assign[(eid, li)]
        return D.t.data.get(tuple(key))

    def rec(k: int, acc):
        if k == len(order):
            # crossing sign over the fixed layering
            s = 0
            flat = {}
            for eid in edge_ids:
                flat[src_pos[(eid, 0)]] = assign[(eid, 0)]
                flat[src_pos[(eid, 1)]] = assign[(eid, 1)]
            for a, b in cross:
                s += parity[flat[a]] * parity[flat[b]]
            val = acc if s % 2 == 0 else F.neg(acc)
            out_key = []
            for bi, p in graph.cod_order:
                t = WireTarget("cod", boundary=bi, position=p)
                for eid in edge_ids:
                    for li in range(2):
                        if graph.wires[eid][li] == t:
                            out_key.append(assign[(eid, li)])
            out_key = tuple(out_key)
            result[out_key] = F.add(result.get(out_key, F.zero()), val)
            return
        eid = order[k]
        for (i, j), cval in c_entries[eid]:
            assign[(eid, 0)] = i
            assign[(eid, 1)] = j
            term = F.mul(acc, cval)
            ok = True
            for fid in complete_at[k]:
                tv = face_value(fid)
                if tv is None:
                    ok = False
                    break
                term = F.mul(term, tv)
            if ok:
                rec(k + 1, term)
        assign.pop((eid, 0), None)
        assign.pop((eid, 1), None)

    rec(0, F.one())
    leg = tuple(parity)
    m = len(graph.cod_order)
    pre = GradedTensor(F, tuple([leg] * m), (), {})
    for key, v in result.items():
        if not F.is_zero(v):
            pre.data[key] = v
    # independent output flip: sum_a sign(a) prod_i b(x_i, a_i) T[a]
    bdat = D.b.data
    flipped = GradedTensor(F, (), tuple([leg] * m), {})
    dim = A.dim
    for akey, v in pre.data.items():
        s = 0
        for ii in range(m):
            for jj in range(ii + 1, m):
                s += parity[akey[ii]] * parity[akey[jj]]
        base = v if s % 2 == 0 else F.neg(v)
        for xkey in itertools.product(range(dim), repeat=m):
            coeff = base
            for x, a in zip(xkey, akey):
                bv = bdat.get((x, a))
                if bv is None:
                    coeff = None
                    break
                coeff = F.mul(coeff, bv)
            if coeff is not None and not F.is_zero(coeff):
                flipped._add_to(xkey, coeff)
    return Amplitude(flipped, len(tri.boundaries), list(graph.cod_order))
