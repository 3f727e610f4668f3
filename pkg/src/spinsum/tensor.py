"""Sparse exact tensors with Z2-graded (super vector space) legs.

A ``GradedTensor`` is a morphism between tensor powers of graded vector
spaces: it has an ordered tuple of output legs and an ordered tuple of
input legs, each leg carrying a parity vector (one parity bit per basis
index).  Coefficients are stored sparsely, keyed by the concatenation of
output indices and input indices.

Sign discipline: every structure map handled here (multiplication, unit,
counit, pairing, copairing, Nakayama map, the triangle tensor) is
parity-even, and composition/tensor product of even morphisms carries no
Koszul sign.  All Koszul signs therefore live in explicit permutations:
``braiding`` legs, ``permute_out``/``permute_in``, and the final
output-to-input flip.  Each of those multiplies an entry by
(-1)^(sum of |a||b| over inverted pairs).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .fields import Field

Parities = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    pass


def inversion_pairs(new_order: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs (a, b) of old positions with a < b whose order is inverted.

    ``new_order[q] = p`` means new position q is filled by old position p.
    """
    pos = {old: new for new, old in enumerate(new_order)}
    n = len(new_order)
    return [(a, b) for a in range(n) for b in range(a + 1, n)
            if pos[a] > pos[b]]


def koszul_sign(parities: Sequence[int], pairs: Sequence[tuple[int, int]]) -> int:
    s = 0
    for a, b in pairs:
        s += parities[a] * parities[b]
    return -1 if s & 1 else 1


@dataclass
class GradedTensor:
    field: Field
    out_legs: tuple[Parities, ...]
    in_legs: tuple[Parities, ...]
    data: dict[tuple[int, ...], object] = dc_field(default_factory=dict)

    # -- construction ---------------------------------------------------
    @staticmethod
    def zero(field, out_legs, in_legs) -> "GradedTensor":
        return GradedTensor(field, tuple(map(tuple, out_legs)),
                            tuple(map(tuple, in_legs)), {})

    @staticmethod
    def scalar(field, value) -> "GradedTensor":
        t = GradedTensor(field, (), (), {})
        if not field.is_zero(value):
            t.data[()] = value
        return t

    @staticmethod
    def identity(field, leg: Parities, n: int = 1) -> "GradedTensor":
        legs = tuple([tuple(leg)] * n)
        t = GradedTensor(field, legs, legs, {})
        dim = len(leg)
        if n == 0:
            t.data[()] = field.one()
            return t
        for idx in itertools.product(range(dim), repeat=n):
            t.data[idx + idx] = field.one()
        return t

    @staticmethod
    def from_matrix(field, leg_out: Parities, leg_in: Parities, M) -> "GradedTensor":
        t = GradedTensor(field, (tuple(leg_out),), (tuple(leg_in),), {})
        for i, row in enumerate(M):
            for j, v in enumerate(row):
                if not field.is_zero(v):
                    t.data[(i, j)] = v
        return t

    @staticmethod
    def braiding(field, leg_a: Parities, leg_b: Parities) -> "GradedTensor":
        """sigma_{A,B}: A (x) B -> B (x) A with entry (-1)^{|a||b|}."""
        t = GradedTensor(field, (tuple(leg_b), tuple(leg_a)),
                         (tuple(leg_a), tuple(leg_b)), {})
        one = field.one()
        for a in range(len(leg_a)):
            for b in range(len(leg_b)):
                v = field.neg(one) if leg_a[a] * leg_b[b] else one
                t.data[(b, a, a, b)] = v
        return t

    # -- basic queries --------------------------------------------------
    @property
    def n_out(self) -> int:
        return len(self.out_legs)

    @property
    def n_in(self) -> int:
        return len(self.in_legs)

    def is_zero(self) -> bool:
        return not self.data

    def scalar_value(self):
        assert not self.out_legs and not self.in_legs
        return self.data.get((), self.field.zero())

    def as_matrix(self):
        assert self.n_out == 1 and self.n_in == 1
        n, m = len(self.out_legs[0]), len(self.in_legs[0])
        M = [[self.field.zero()] * m for _ in range(n)]
        for (i, j), v in self.data.items():
            M[i][j] = v
        return M

    def _set(self, key, val):
        if self.field.is_zero(val):
            self.data.pop(key, None)
        else:
            self.data[key] = val

    def _add_to(self, key, val):
        cur = self.data.get(key)
        if cur is None:
            if not self.field.is_zero(val):
                self.data[key] = val
        else:
            s = self.field.add(cur, val)
            self._set(key, s)

    def __eq__(self, other):
        if not isinstance(other, GradedTensor):
            return NotImplemented
        return (self.out_legs == other.out_legs and self.in_legs == other.in_legs
                and self.data == other.data)

    # -- algebra of morphisms -------------------------------------------
    def compose(self, other: "GradedTensor") -> "GradedTensor":
        """self o other (apply other first).

        Valid without extra signs because all generator tensors are even;
        composition of morphisms never introduces Koszul signs.
        """
        assert self.in_legs == other.out_legs, "leg mismatch in compose"
        F = self.field
        out = GradedTensor(F, self.out_legs, other.in_legs, {})
        no, ni = self.n_out, self.n_in
        oo = other.n_out
        by_mid: dict[tuple, list] = {}
        for key, v in self.data.items():
            by_mid.setdefault(key[no:], []).append((key[:no], v))
        for key, w in other.data.items():
            mid = key[:oo]
            hits = by_mid.get(mid)
            if not hits:
                continue
            tail = key[oo:]
            for head, v in hits:
                out._add_to(head + tail, F.mul(v, w))
        return out

    def tensor(self, other: "GradedTensor") -> "GradedTensor":
        """Tensor product; sign-free for even morphisms (the only kind built here)."""
        F = self.field
        out = GradedTensor(F, self.out_legs + other.out_legs,
                           self.in_legs + other.in_legs, {})
        no1 = self.n_out
        no2 = other.n_out
        data = out.data
        mul = F.mul
        # keys are distinct and a field has no zero divisors, so entries
        # can be stored directly
        for k1, v1 in self.data.items():
            o1, i1 = k1[:no1], k1[no1:]
            for k2, v2 in other.data.items():
                data[o1 + k2[:no2] + i1 + k2[no2:]] = mul(v1, v2)
        return out

    def scale(self, c) -> "GradedTensor":
        F = self.field
        out = GradedTensor(F, self.out_legs, self.in_legs, {})
        for k, v in self.data.items():
            out._add_to(k, F.mul(c, v))
        return out

    def add(self, other: "GradedTensor") -> "GradedTensor":
        assert self.out_legs == other.out_legs and self.in_legs == other.in_legs
        out = GradedTensor(self.field, self.out_legs, self.in_legs, dict(self.data))
        for k, v in other.data.items():
            out._add_to(k, v)
        return out

    def sub(self, other: "GradedTensor") -> "GradedTensor":
        return self.add(other.scale(self.field.neg(self.field.one())))

    # -- Koszul permutations --------------------------------------------
    def permute_out(self, new_order: Sequence[int]) -> "GradedTensor":
        """Reorder output legs; new_order[q] = old output position at new q."""
        assert sorted(new_order) == list(range(self.n_out))
        F = self.field
        out = GradedTensor(F, tuple(self.out_legs[p] for p in new_order),
                           self.in_legs, {})
        no = self.n_out
        legs = self.out_legs
        data = out.data
        # keys stay distinct under a permutation: store directly
        if not any(any(leg) for leg in legs):
            for key, v in self.data.items():
                data[tuple(key[p] for p in new_order) + key[no:]] = v
            return out
        # invmask[a] = positions b > a whose pair (a, b) is inverted
        invmask = [0] * no
        for a, b in inversion_pairs(new_order):
            invmask[a] |= 1 << b
        neg = F.neg
        for key, v in self.data.items():
            m = 0
            for p in range(no):
                if legs[p][key[p]]:
                    m |= 1 << p
            s = 0
            mm = m
            while mm:
                low = mm & -mm
                s ^= (m & invmask[low.bit_length() - 1]).bit_count() & 1
                mm ^= low
            newk = tuple(key[p] for p in new_order) + key[no:]
            data[newk] = neg(v) if s else v
        return out

    def permute_in(self, new_order: Sequence[int]) -> "GradedTensor":
        """Reorder input legs; new_order[q] = old input position at new q."""
        assert sorted(new_order) == list(range(self.n_in))
        F = self.field
        out = GradedTensor(F, self.out_legs,
                           tuple(self.in_legs[p] for p in new_order), {})
        no = self.n_out
        ni = self.n_in
        legs = self.in_legs
        data = out.data
        if not any(any(leg) for leg in legs):
            for key, v in self.data.items():
                o, i = key[:no], key[no:]
                data[o + tuple(i[p] for p in new_order)] = v
            return out
        invmask = [0] * ni
        for a, b in inversion_pairs(new_order):
            invmask[a] |= 1 << b
        neg = F.neg
        for key, v in self.data.items():
            o, i = key[:no], key[no:]
            m = 0
            for p in range(ni):
                if legs[p][i[p]]:
                    m |= 1 << p
            s = 0
            mm = m
            while mm:
                low = mm & -mm
                s ^= (m & invmask[low.bit_length() - 1]).bit_count() & 1
                mm ^= low
            data[o + tuple(i[p] for p in new_order)] = neg(v) if s else v
        return out

    # -- blob-contraction helpers ---------------------------------------
    def contract_out_with(self, consumer: "GradedTensor") -> "GradedTensor":
        """Contract the trailing output legs against a pure-input tensor.

        ``consumer`` must have no output legs; its k input legs eat the
        last k output legs of self (even consumer => no signs).
        """
        k = consumer.n_in
        assert consumer.n_out == 0
        assert self.out_legs[self.n_out - k:] == consumer.in_legs
        F = self.field
        out = GradedTensor(F, self.out_legs[:self.n_out - k], self.in_legs, {})
        no = self.n_out
        for key, v in self.data.items():
            o, i = key[:no], key[no:]
            w = consumer.data.get(o[no - k:])
            if w is None:
                continue
            out._add_to(o[:no - k] + i, F.mul(v, w))
        return out

    def apply_to_in(self, pos: int, M: "GradedTensor") -> "GradedTensor":
        """Precompose one input leg with an even single-leg morphism M."""
        assert M.n_out == 1 and M.n_in == 1
        assert self.in_legs[pos] == M.out_legs[0]
        F = self.field
        new_in = list(self.in_legs)
        new_in[pos] = M.in_legs[0]
        out = GradedTensor(F, self.out_legs, tuple(new_in), {})
        no = self.n_out
        cols: dict[int, list] = {}
        for (a, x), v in M.data.items():
            cols.setdefault(a, []).append((x, v))
        for key, v in self.data.items():
            o, i = key[:no], key[no:]
            for x, w in cols.get(i[pos], ()):
                ni = i[:pos] + (x,) + i[pos + 1:]
                out._add_to(o + ni, F.mul(v, w))
        return out

    def flip_out_to_in(self, b: "GradedTensor") -> "GradedTensor":
        """Turn every output leg into an input leg using the pairing b.

        Implements b^{(x)m} o tau o (id^{(x)m} (x) self) where tau pairs the
        i'th new input with the i'th output, input fed to b first.  The
        crossing sign of tau on an entry (a_1..a_m) is
        (-1)^(sum_{i<j} |a_i||x_j|) which equals (-1)^(sum_{i<j} |a_i||a_j|)
        on the support of the even pairing b.
        """
        assert b.n_out == 0 and b.n_in == 2
        assert self.n_in == 0
        F = self.field
        m = self.n_out
        leg = b.in_legs[1]
        assert all(l == leg for l in self.out_legs)
        # columns of b: for fixed second argument a, nonzero b(x, a)
        cols: dict[int, list] = {}
        for (x, a), v in b.data.items():
            cols.setdefault(a, []).append((x, v))
        out = GradedTensor(F, (), tuple(b.in_legs[0] for _ in range(m)), {})
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        for key, v in self.data.items():
            par = [leg[a] for a in key]
            s = koszul_sign(par, pairs)
            base = v if s == 1 else F.neg(v)
            # expand the product prod_i b(x_i, a_i)
            partial = [((), base)]
            ok = True
            for a in key:
                col = cols.get(a)
                if not col:
                    ok = False
                    break
                partial = [(px + (x,), F.mul(pv, w))
                           for px, pv in partial for x, w in col]
            if not ok:
                continue
            for x, val in partial:
                out._add_to(x, val)
        return out

    def check_budget(self, max_legs: int, max_entries: int):
        if self.n_out + self.n_in > max_legs:
            raise BudgetExceeded(
                f"open legs {self.n_out + self.n_in} exceed bound {max_legs}")
        if len(self.data) > max_entries:
            raise BudgetExceeded(
                f"{len(self.data)} stored coefficients exceed budget {max_entries}")
