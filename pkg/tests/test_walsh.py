import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncyclepp.errors import CapExceeded
from ncyclepp.polyperm import (
    PermMap, SparsePoly, compose, functional_power, identity_perm, invert,
    perm_order, require_perm,
)
from ncyclepp.walsh import (
    WalshValue, walsh_coefficient, walsh_involution_test,
)
from conftest import field


def naive_walsh(ctx, images, u, v):
    """Oracle: direct residue counting with scalar arithmetic."""
    counts = [0] * ctx.p
    tr1 = ctx.tr1_table()
    for x in range(ctx.order):
        arg = ctx.add_idx(ctx.mul_idx(u, x), ctx.mul_idx(v, int(images[x])))
        counts[int(tr1[arg])] += 1
    m = min(counts)
    return tuple(c - m for c in counts)


def test_walsh_value_basics():
    w = WalshValue.from_counts(2, [5, 3])
    assert w.counts == (2, 0)
    assert w.signed == 2
    assert w.to_json() == {"counts": [2, 0], "signed": 2}
    w3 = WalshValue.from_counts(3, [4, 4, 1])
    assert w3.counts == (3, 3, 0)
    with pytest.raises(ValueError):
        w3.signed
    assert abs(w3.approx() - (3 + 3 * np.exp(2j * np.pi / 3))) < 1e-9


@pytest.mark.parametrize("pn", [(2, 3), (3, 2), (5, 1)])
def test_walsh_coefficient_matches_oracle(pn):
    ctx = field(*pn)
    f = require_perm(ctx, SparsePoly.from_text(ctx, "x^" + str(ctx.p)))
    for u in range(ctx.order):
        for v in range(ctx.order):
            got = walsh_coefficient(ctx, f, u, v)
            assert got.counts == naive_walsh(ctx, f.images, u, v)


def test_trivial_coefficient_is_field_size():
    ctx = field(2, 4)
    f = identity_perm(ctx)
    w = walsh_coefficient(ctx, f, 0, 0)
    assert w.signed == ctx.order


def test_char2_row_energy():
    # for a permutation the squared coefficients of a fixed v sum to q^2
    ctx = field(2, 4)
    f = require_perm(ctx, SparsePoly.from_text(ctx, "x^14"))
    for v in (1, 5):
        total = sum(walsh_coefficient(ctx, f, u, v).signed ** 2
                    for u in range(ctx.order))
        assert total == ctx.order ** 2


@pytest.mark.parametrize("pn,poly,expect", [
    ((2, 4), "x^14", True),    # x^(q-2) inverts itself
    ((2, 4), "x^2", False),    # squaring has order 4
    ((2, 4), "x + 1", True),   # translation in characteristic 2
    ((2, 4), "x^8", False),    # 8 has order 4 mod 15
    ((3, 2), "2*x", True),     # negation
    ((3, 2), "x + 1", False),  # translation has order 3
    ((3, 2), "x^3", True),     # Frobenius of a degree-2 extension
])
def test_involution_test_structured(pn, poly, expect):
    ctx = field(*pn)
    f = require_perm(ctx, SparsePoly.from_text(ctx, poly))
    truth = compose(f, f) == identity_perm(ctx)
    assert truth == expect
    flag, witness = walsh_involution_test(ctx, f)
    assert flag == expect
    if not flag:
        u, v = witness
        assert walsh_coefficient(ctx, f, u, v) != walsh_coefficient(ctx, f, v, u)


@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (5, 1), (7, 1)]),
       st.integers(0, 2**32 - 1))
def test_involution_test_random_perms(pn, seed):
    ctx = field(*pn)
    rng = np.random.default_rng(seed)
    f = PermMap(ctx, rng.permutation(ctx.order).astype(np.int64))
    truth = compose(f, f) == identity_perm(ctx)
    flag, witness = walsh_involution_test(ctx, f)
    assert flag == truth
    if not flag:
        u, v = witness
        assert walsh_coefficient(ctx, f, u.i, v.i) != walsh_coefficient(ctx, f, v.i, u.i)


@given(st.sampled_from([(2, 4), (3, 2)]), st.integers(0, 2**32 - 1))
def test_involution_test_forced_involutions(pn, seed):
    # conjugates of an order-2 map stay order 2; the test must accept them
    ctx = field(*pn)
    rng = np.random.default_rng(seed)
    imgs = np.arange(ctx.order, dtype=np.int64)
    pairs = rng.permutation(ctx.order)[: 2 * (ctx.order // 4)].reshape(-1, 2)
    for a, b in pairs:
        imgs[[a, b]] = imgs[[b, a]]
    f = PermMap(ctx, imgs)
    assert perm_order(f) in (1, 2)
    flag, witness = walsh_involution_test(ctx, f)
    assert flag


def test_cap_enforced():
    ctx = field(2, 13)
    with pytest.raises(CapExceeded):
        walsh_involution_test(ctx, identity_perm(ctx))
