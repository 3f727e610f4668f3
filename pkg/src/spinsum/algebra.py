"""Graded Frobenius algebras over exact fields.

An algebra is given by structure constants (mu, eta, eps) on a basis
with Z2 parities.  Everything else — the pairing b, its inverse
copairing c_{-1}, the coproduct Delta, the Nakayama automorphism N, the
triangle tensor t, and the cylinder idempotents q_{+-} — is derived.
All derived objects are GradedTensor morphisms, composed through the
same engine the state sum uses.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass

from .fields import (Field, QQ, PrimeField, field_from_json, mat_inverse,
                     mat_rank)
from .tensor import GradedTensor


@dataclass(frozen=True)
class GradedFrobeniusAlgebra:
    field: Field
    dim: int
    parity: tuple[int, ...]
    mu: tuple  # mu[k][i][j] = coefficient of e_k in e_i e_j
    eta: tuple
    eps: tuple
    name: str = ""

    def basis_errors(self) -> list[str]:
        errs = []
        F, n = self.field, self.dim
        if len(self.parity) != n or any(p not in (0, 1) for p in self.parity):
            errs.append("parity vector malformed")
            return errs
        # parity-evenness of the structure maps
        for k, i, j in itertools.product(range(n), repeat=3):
            if not F.is_zero(self.mu[k][i][j]) and \
                    (self.parity[i] + self.parity[j] - self.parity[k]) % 2:
                errs.append(f"mu[{k}][{i}][{j}] violates parity")
        for i in range(n):
            if self.parity[i] and not F.is_zero(self.eta[i]):
                errs.append(f"eta[{i}] nonzero on odd index")
            if self.parity[i] and not F.is_zero(self.eps[i]):
                errs.append(f"eps[{i}] nonzero on odd index")
        # associativity and unitality
        for i, j, k, m in itertools.product(range(n), repeat=4):
            lhs = F.zero()
            rhs = F.zero()
            for x in range(n):
                lhs = F.add(lhs, F.mul(self.mu[x][i][j], self.mu[m][x][k]))
                rhs = F.add(rhs, F.mul(self.mu[x][j][k], self.mu[m][i][x]))
            if lhs != rhs:
                errs.append(f"mu not associative at ({i},{j},{k})")
                break
        for i, j in itertools.product(range(n), repeat=2):
            left = F.zero()
            right = F.zero()
            for x in range(n):
                left = F.add(left, F.mul(self.eta[x], self.mu[j][x][i]))
                right = F.add(right, F.mul(self.eta[x], self.mu[j][i][x]))
            want = F.one() if i == j else F.zero()
            if left != want or right != want:
                errs.append(f"eta is not a two-sided unit at ({i},{j})")
                break
        return errs


@dataclass
class DerivedStructure:
    A: GradedFrobeniusAlgebra
    leg: tuple[int, ...]
    mu: GradedTensor      # 1 out, 2 in
    eta: GradedTensor     # 1 out, 0 in
    eps: GradedTensor     # 0 out, 1 in
    b: GradedTensor       # 0 out, 2 in
    c_minus: GradedTensor  # 2 out, 0 in
    c_plus: GradedTensor   # 2 out, 0 in
    Delta: GradedTensor   # 2 out, 1 in
    N: GradedTensor       # 1 out, 1 in
    N_inv: GradedTensor
    t: GradedTensor       # 0 out, 3 in
    q_plus: GradedTensor  # 1 out, 1 in
    q_minus: GradedTensor
    identity: GradedTensor
    sigma: GradedTensor   # braiding A (x) A -> A (x) A

    def c(self, sign: int) -> GradedTensor:
        return self.c_plus if sign == +1 else self.c_minus

    def N_eps(self, eps: int) -> GradedTensor:
        """N_{+1} = id, N_{-1} = N."""
        return self.identity if eps == +1 else self.N

    def q(self, nu: int) -> GradedTensor:
        return self.q_plus if nu == +1 else self.q_minus


@functools.lru_cache(maxsize=None)
def derive(A: GradedFrobeniusAlgebra) -> DerivedStructure:
    errs = A.basis_errors()
    if errs:
        raise ValueError("invalid algebra: " + "; ".join(errs))
    F, n = A.field, A.dim
    leg = tuple(A.parity)
    mu = GradedTensor(F, (leg,), (leg, leg), {})
    for k, i, j in itertools.product(range(n), repeat=3):
        v = A.mu[k][i][j]
        if not F.is_zero(v):
            mu.data[(k, i, j)] = v
    eta = GradedTensor(F, (leg,), (), {})
    for i, v in enumerate(A.eta):
        if not F.is_zero(v):
            eta.data[(i,)] = v
    eps = GradedTensor(F, (), (leg,), {})
    for i, v in enumerate(A.eps):
        if not F.is_zero(v):
            eps.data[(i,)] = v
    ident = GradedTensor.identity(F, leg)
    sigma = GradedTensor.braiding(F, leg, leg)
    b = eps.compose(mu)  # b(x, y) = eps(xy)
    bmat = [[b.data.get((i, j), F.zero()) for j in range(n)] for i in range(n)]
    if mat_rank(F, bmat) != n:
        raise ValueError("pairing b is degenerate (no Frobenius structure)")
    cmat = mat_inverse(F, bmat)
    c_minus = GradedTensor(F, (leg, leg), (), {})
    for i, j in itertools.product(range(n), repeat=2):
        if not F.is_zero(cmat[i][j]):
            c_minus.data[(i, j)] = cmat[i][j]
    c_plus = sigma.compose(c_minus)
    # N = (b (x) id) o (id (x) sigma) o (id (x) c_minus)
    step1 = ident.tensor(c_minus)
    step2 = ident.tensor(sigma).compose(step1)
    N = b.tensor(ident).compose(step2)
    # N^{-1} = (id (x) b) o (sigma (x) id) o (c_minus (x) id)
    n1 = c_minus.tensor(ident)
    n2 = sigma.tensor(ident).compose(n1)
    N_inv = ident.tensor(b).compose(n2)
    Delta = mu.tensor(ident).compose(ident.tensor(c_minus))
    t = b.compose(mu.tensor(ident))
    # q_nu = mu o sigma o (N_{-nu} (x) id) o Delta
    def make_q(nu):
        n_eps = ident if -nu == +1 else N
        return mu.compose(sigma).compose(n_eps.tensor(ident)).compose(Delta)
    return DerivedStructure(A, leg, mu, eta, eps, b, c_minus, c_plus, Delta,
                            N, N_inv, t, make_q(+1), make_q(-1), ident, sigma)


# -- predicates ---------------------------------------------------------
def convolution(D: DerivedStructure, f: GradedTensor,
                g: GradedTensor) -> GradedTensor:
    """f * g = mu o (f (x) g) o Delta."""
    return D.mu.compose(f.tensor(g)).compose(D.Delta)


def validate_predicates(A: GradedFrobeniusAlgebra) -> dict[str, bool]:
    D = derive(A)
    mu, Delta, ident = D.mu, D.Delta, D.identity
    report = {}
    report["associative"] = (mu.compose(mu.tensor(ident))
                             == mu.compose(ident.tensor(mu)))
    report["unital"] = (mu.compose(D.eta.tensor(ident)) == ident
                        and mu.compose(ident.tensor(D.eta)) == ident)
    frob_mid = Delta.compose(mu)
    report["frobenius"] = (
        mu.tensor(ident).compose(ident.tensor(Delta)) == frob_mid
        and ident.tensor(mu).compose(Delta.tensor(ident)) == frob_mid)
    report["delta_separable"] = mu.compose(Delta) == ident
    report["nakayama_involution"] = D.N.compose(D.N) == ident
    unit_conv = D.eta.compose(D.eps)
    report["nakayama_times_id_zero"] = convolution(D, D.N, ident).is_zero()
    report["symmetric"] = D.b.compose(D.sigma) == D.b
    report["counital"] = (D.eps.tensor(ident).compose(Delta) == ident
                          and ident.tensor(D.eps).compose(Delta) == ident)
    report["convolution_unit"] = convolution(D, ident, unit_conv) == ident
    return report


@functools.lru_cache(maxsize=None)
def passes_invariance_predicates(A: GradedFrobeniusAlgebra) -> bool:
    r = validate_predicates(A)
    return all(r[k] for k in ("associative", "unital", "frobenius",
                              "delta_separable", "nakayama_involution"))


# -- built-in algebras --------------------------------------------------
def builtin_clifford(field: Field = QQ) -> GradedFrobeniusAlgebra:
    if field.characteristic == 2:
        raise ValueError("Clifford algebra needs characteristic != 2")
    F = field
    z, o = F.zero(), F.one()
    two = F.add(o, o)
    mu = (((o, z), (z, o)), ((z, o), (o, z)))
    return GradedFrobeniusAlgebra(F, 2, (0, 1), mu, (o, z), (two, z),
                                  name="clifford")


def builtin_group_z2(field: Field = QQ) -> GradedFrobeniusAlgebra:
    """Group algebra of Z/2 with counit 2*(coefficient of the identity).

    A trivially graded, symmetric, Delta-separable dimension-2 fixture.
    """
    if field.characteristic == 2:
        raise ValueError("k[Z2] fixture needs characteristic != 2")
    F = field
    z, o = F.zero(), F.one()
    two = F.add(o, o)
    mu = (((o, z), (z, o)), ((z, o), (o, z)))
    return GradedFrobeniusAlgebra(F, 2, (0, 0), mu, (o, z), (two, z),
                                  name="group-z2")


def builtin_twisted_matrix(n: int, field: Field, X, lam
                           ) -> GradedFrobeniusAlgebra:
    """Matrix algebra M_n with counit eps_X(M) = tr(X M).

    Requires X invertible with X^2 = lam*1, tr(X) = lam, lam != 0.
    Basis: elementary matrices E_{ab}, index a*n + b.
    """
    F = field
    X = [[F.of(v) for v in row] for row in X]
    lam = F.of(lam)
    if F.is_zero(lam):
        raise ValueError("lambda must be nonzero")
    X2 = [[sum_f(F, (F.mul(X[a][k], X[k][b]) for k in range(n)))
           for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            want = lam if a == b else F.zero()
            if X2[a][b] != want:
                raise ValueError("X^2 != lambda * identity")
    tr = sum_f(F, (X[a][a] for a in range(n)))
    if tr != lam:
        raise ValueError("tr(X) != lambda")
    d = n * n
    z = F.zero()
    mu = [[[z] * d for _ in range(d)] for _ in range(d)]
    for a, b, c, e in itertools.product(range(n), repeat=4):
        # E_{ab} E_{ce} = delta_{bc} E_{ae}
        if b == c:
            mu[a * n + e][a * n + b][c * n + e] = F.one()
    eta = [z] * d
    for a in range(n):
        eta[a * n + a] = F.one()
    eps = [z] * d
    for a in range(n):
        for b in range(n):
            eps[a * n + b] = X[b][a]  # tr(X E_{ab}) = X_{ba}
    return GradedFrobeniusAlgebra(
        F, d, (0,) * d,
        tuple(tuple(tuple(row) for row in plane) for plane in mu),
        tuple(eta), tuple(eps), name=f"twisted-matrix-{n}")


def sum_f(F: Field, it):
    acc = F.zero()
    for v in it:
        acc = F.add(acc, v)
    return acc


BUILTIN_NAMES = ("clifford", "group-z2", "twisted-matrix-3-f3",
                 "twisted-matrix-2-q")


def builtin_by_name(name: str) -> GradedFrobeniusAlgebra:
    if name == "clifford":
        return builtin_clifford(QQ)
    if name == "group-z2":
        return builtin_group_z2(QQ)
    if name == "twisted-matrix-3-f3":
        F3 = PrimeField(3)
        X = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
        A = builtin_twisted_matrix(3, F3, X, 1)
        return GradedFrobeniusAlgebra(A.field, A.dim, A.parity, A.mu, A.eta,
                                      A.eps, name=name)
    if name == "twisted-matrix-2-q":
        X = [[2, 0], [0, 2]]
        A = builtin_twisted_matrix(2, QQ, X, 4)
        return GradedFrobeniusAlgebra(A.field, A.dim, A.parity, A.mu, A.eta,
                                      A.eps, name=name)
    raise ValueError(f"unknown builtin algebra {name!r}; "
                     f"available: {', '.join(BUILTIN_NAMES)}")


# -- JSON ---------------------------------------------------------------
def to_json(A: GradedFrobeniusAlgebra) -> dict:
    F = A.field
    entries = []
    for k, i, j in itertools.product(range(A.dim), repeat=3):
        v = A.mu[k][i][j]
        if not F.is_zero(v):
            entries.append([k, i, j, F.format(v)])
    return {
        "field": F.to_json(),
        "dim": A.dim,
        "parity": list(A.parity),
        "mu": entries,
        "eta": [F.format(v) for v in A.eta],
        "eps": [F.format(v) for v in A.eps],
    }


def from_json(obj: dict) -> GradedFrobeniusAlgebra:
    F = field_from_json(obj["field"])
    n = int(obj["dim"])
    parity = tuple(int(p) for p in obj["parity"])
    z = F.zero()
    mu = [[[z] * n for _ in range(n)] for _ in range(n)]
    for k, i, j, v in obj["mu"]:
        mu[int(k)][int(i)][int(j)] = F.of(v)
    eta = tuple(F.of(v) for v in obj["eta"])
    eps = tuple(F.of(v) for v in obj["eps"])
    A = GradedFrobeniusAlgebra(
        F, n, parity,
        tuple(tuple(tuple(row) for row in plane) for plane in mu), eta, eps)
    errs = A.basis_errors()
    if errs:
        raise ValueError("invalid algebra file: " + "; ".join(errs))
    return A


def load(path: str) -> GradedFrobeniusAlgebra:
    with open(path) as fh:
        return from_json(json.load(fh))
