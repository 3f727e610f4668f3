from fractions import Fraction

import pytest

from spinsum.fields import QQ
from spinsum.tensor import BudgetExceeded, GradedTensor

EVEN_ODD = (0, 1)  # one even, one odd basis vector


def _rand_tensor(rng, n_out, n_in, leg=EVEN_ODD):
    t = GradedTensor(QQ, (leg,) * n_out, (leg,) * n_in, {})
    for key in _keys(len(leg), n_out + n_in):
        if rng.random() < 0.6:
            t.data[key] = Fraction(rng.randint(-5, 5))
    t.data = {k: v for k, v in t.data.items() if v}
    return t


def _keys(dim, n):
    if n == 0:
        yield ()
        return
    for k in _keys(dim, n - 1):
        for i in range(dim):
            yield k + (i,)


def test_braiding_is_involutive_up_to_swap():
    s = GradedTensor.braiding(QQ, EVEN_ODD, EVEN_ODD)
    assert s.compose(s) == GradedTensor.identity(QQ, EVEN_ODD, 2)


def test_braiding_koszul_sign():
    s = GradedTensor.braiding(QQ, EVEN_ODD, EVEN_ODD)
    assert s.data[(1, 1, 1, 1)] == Fraction(-1)  # odd x odd
    assert s.data[(0, 1, 1, 0)] == Fraction(1)   # odd x even


def test_permute_out_equals_braiding():
    import random
    rng = random.Random(0)
    t = _rand_tensor(rng, 2, 1)
    s = GradedTensor.braiding(QQ, EVEN_ODD, EVEN_ODD)
    ident = GradedTensor.identity(QQ, EVEN_ODD)
    assert t.permute_out([1, 0]) == s.compose(t)
    u = _rand_tensor(rng, 3, 0)
    assert u.permute_out([1, 0, 2]) == s.tensor(ident).compose(u)
    assert u.permute_out([0, 2, 1]) == ident.tensor(s).compose(u)


def test_permutation_coherence():
    import random
    rng = random.Random(1)
    t = _rand_tensor(rng, 4, 0)
    p, q = [2, 0, 3, 1], [1, 3, 0, 2]
    assert (t.permute_out(p).permute_out(q)
            == t.permute_out([p[q[i]] for i in range(4)]))
    inv = sorted(range(4), key=lambda i: p[i])
    assert t.permute_out(p).permute_out(inv) == t


def test_permute_in_matches_permute_out_through_transpose():
    import random
    rng = random.Random(2)
    t = _rand_tensor(rng, 1, 3)
    p = [2, 0, 1]
    direct = t.permute_in(p)
    for key, v in direct.data.items():
        assert v != 0
    # round trip
    inv = sorted(range(3), key=lambda i: p[i])
    assert direct.permute_in(inv) == t


def test_interchange_of_tensor_and_compose():
    import random
    rng = random.Random(3)
    f = _rand_tensor(rng, 1, 1)
    g = _rand_tensor(rng, 1, 1)
    h = _rand_tensor(rng, 1, 1)
    k = _rand_tensor(rng, 1, 1)
    assert (f.compose(g)).tensor(h.compose(k)) == \
        f.tensor(h).compose(g.tensor(k))


def test_scalar_and_zero():
    s = GradedTensor.scalar(QQ, Fraction(3))
    assert s.scalar_value() == 3
    z = GradedTensor.zero(QQ, (EVEN_ODD,), ())
    assert z.is_zero()


def test_budget_errors():
    t = GradedTensor.identity(QQ, EVEN_ODD, 3)
    with pytest.raises(BudgetExceeded, match="open legs"):
        t.check_budget(5, 10**6)
    with pytest.raises(BudgetExceeded, match="coefficients"):
        t.check_budget(100, 3)
