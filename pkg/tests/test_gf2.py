import itertools

from spinsum import gf2


def test_solve_affine_consistent():
    # x0 + x1 = 1, x1 + x2 = 0 over F2^3
    space = gf2.solve_affine(3, [(0b011, 1), (0b110, 0)])
    assert space is not None
    assert space.dim == 1
    sols = set(space)
    assert len(sols) == 2
    for x in sols:
        assert gf2.parity(x & 0b011) == 1
        assert gf2.parity(x & 0b110) == 0
        assert space.contains(x)
    assert not space.contains(next(iter(sols)) ^ 0b001)


def test_solve_affine_inconsistent():
    assert gf2.solve_affine(2, [(0b11, 0), (0b11, 1)]) is None


def test_solve_affine_brute_force_agreement():
    rows = [(0b10110, 1), (0b01011, 0), (0b11101, 1)]
    space = gf2.solve_affine(5, rows)
    brute = {x for x in range(32)
             if all(gf2.parity(x & m) == r for m, r in rows)}
    assert set(space) == brute


def test_echelon_basis_and_rank():
    vecs = [0b110, 0b011, 0b101]  # rank 2: third = first xor second
    assert gf2.span_rank(vecs) == 2
    basis = gf2.echelon_basis(vecs)
    assert len(basis) == 2
    assert gf2.reduce_against(basis, 0b101) == 0


def test_coset_representatives_partition():
    space = gf2.solve_affine(4, [(0b1111, 0)])  # 8 solutions
    sub = [0b0011]
    reps = gf2.coset_representatives(space, sub)
    assert len(reps) == 4
    # no two representatives differ by a subspace element
    for a, b in itertools.combinations(reps, 2):
        assert gf2.reduce_against(sub, a ^ b) != 0
    # every solution is reachable from some representative
    covered = {r ^ m for r in reps for m in (0, 0b0011)}
    assert covered == set(space)
