"""Linear algebra over GF(2) on bitmask-encoded vectors.

Vectors in F_2^n are Python ints (bit i = coordinate i).  Systems are
given as rows ``(mask, rhs)`` meaning ``parity(x & mask) == rhs``.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def parity(x: int) -> int:
    return bin(x).count("1") & 1


class AffineSolutionSpace:
    """Solution set { particular + span(basis) } of an affine F_2 system."""

    def __init__(self, n: int, particular: int, basis: list[int]):
        self.n = n
        self.particular = particular
        self.basis = list(basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def count(self) -> int:
        return 1 << self.dim

    def __iter__(self) -> Iterator[int]:
        for k in range(1 << self.dim):
            x = self.particular
            for i, b in enumerate(self.basis):
                if (k >> i) & 1:
                    x ^= b
            yield x

    def contains(self, x: int) -> bool:
        return reduce_against(self.basis, x ^ self.particular) == 0


def solve_affine(n: int, rows: Iterable[tuple[int, int]]) -> AffineSolutionSpace | None:
    """Solve the system; returns None if inconsistent."""
    # Row-reduce (mask, rhs) pairs, tracking pivot columns.
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        mask &= (1 << n) - 1
        rhs &= 1
        while mask:
            p = mask.bit_length() - 1
            if p in pivots:
                pm, pr = pivots[p]
                mask ^= pm
                rhs ^= pr
            else:
                pivots[p] = (mask, rhs)
                break
        else:
            if rhs:
                return None
    # Back-substitute to make each pivot column appear in exactly one row.
    cols = sorted(pivots, reverse=True)
    for p in cols:
        pm, pr = pivots[p]
        for q in cols:
            if q > p and (pivots[q][0] >> p) & 1:
                qm, qr = pivots[q]
                pivots[q] = (qm ^ pm, qr ^ pr)
    particular = 0
    for p, (_, pr) in pivots.items():
        if pr:
            particular |= 1 << p
    free = [i for i in range(n) if i not in pivots]
    basis = []
    for f in free:
        v = 1 << f
        for p, (pm, _) in pivots.items():
            if (pm >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return AffineSolutionSpace(n, particular, basis)


def echelon_basis(vectors: Iterable[int]) -> list[int]:
    """Reduced echelon basis of the span of the given vectors."""
    basis: list[int] = []
    for v in vectors:
        v = _reduce(basis, v)
        if v:
            basis.append(v)
            basis.sort(key=int.bit_length, reverse=True)
    # Full reduction for canonical representatives.
    out = []
    for i, v in enumerate(sorted(basis, key=int.bit_length, reverse=True)):
        for w in out:
            if (v >> (w.bit_length() - 1)) & 1:
                v ^= w
        out.append(v)
    return sorted(out, key=int.bit_length, reverse=True)


def _reduce(basis: list[int], v: int) -> int:
    for b in basis:
        if v.bit_length() == b.bit_length():
            v ^= b
        # bases kept sorted by leading bit descending; after xor retry below
    # robust generic reduction
    changed = True
    while changed:
        changed = False
        for b in basis:
            if v and (v >> (b.bit_length() - 1)) & 1:
                v ^= b
                changed = True
    return v


def reduce_against(basis: list[int], v: int) -> int:
    """Reduce v against a spanning set (not necessarily echelon)."""
    eb = echelon_basis(basis)
    for b in eb:
        if v and (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


def span_rank(vectors: Iterable[int]) -> int:
    return len(echelon_basis(vectors))


def coset_representatives(space: AffineSolutionSpace,
                          subspace_gens: list[int]) -> list[int]:
    """Representatives of space modulo the span of subspace_gens.

    Representatives are elements of `space` no two of which differ by an
    element of the subspace span.  They are produced as particular +
    span(C) where C is a basis of the direction space complementary to
    the subspace, so the count is 2^(dim - rank of the subspace part)
    without enumerating the space.
    """
    acc = echelon_basis(subspace_gens)
    comp: list[int] = []
    for b in space.basis:
        v = b
        for w in acc:
            if v and (v >> (w.bit_length() - 1)) & 1:
                v ^= w
        if v:
            comp.append(v)
            acc = echelon_basis(acc + [v])
    reps: list[int] = []
    for k in range(1 << len(comp)):
        x = space.particular
        for i, c in enumerate(comp):
            if (k >> i) & 1:
                x ^= c
        reps.append(x)
    return reps
