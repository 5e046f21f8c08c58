"""Surjectivity gadget, the table-plus-blocks function, and the composition
identity that splices them together."""

import itertools
import random
from fractions import Fraction

import pytest

from formulalab import (
    SurjInstance,
    adversary_to_hiding,
    am_cert_value,
    am_from_khrapchenko,
    and_table,
    andreev_F,
    andreev_arity,
    andreev_ratio_rows,
    andreev_size_depth4,
    andreev_textbook,
    andreev_textbook_size,
    composition_identity_check,
    eval_formula,
    formula_depth,
    formula_size,
    formula_vars,
    khrapchenko_cert_value,
    majority_block,
    majority_table,
    p_random_restriction,
    pair_distribution,
    params_from_n,
    parity_table,
    surj_params_from_n,
    surj_pair_distribution,
    surj_tt,
    surj_uformula,
    tt_from_formula,
)
from formulalab.measures import index_word


@pytest.mark.parametrize("s,sigma,r,c,n", [(1, 3, 4, 2, 8), (2, 5, 7, 3, 21)])
def test_instance_shape(s, sigma, r, c, n):
    inst = SurjInstance(s)
    assert (inst.sigma, inst.r, inst.c, inst.n) == (sigma, r, c, n)


def test_instance_rejects_s0():
    with pytest.raises(ValueError):
        SurjInstance(0)


def test_encode_decode_round_trip():
    inst = SurjInstance(1)
    words = list(inst.all_words())
    assert len(words) == 81
    for w in words:
        assert inst.decode(inst.encode(w)) == w
    # code 3 is unused by the 3-symbol alphabet
    assert inst.decode(0b11)[0] is None
    with pytest.raises(ValueError):
        inst.encode((0, 1, 2))  # wrong length
    with pytest.raises(ValueError):
        inst.encode((0, 1, 2, 3))


def test_reference_table_semantics():
    inst = SurjInstance(1)
    t = surj_tt(1)
    assert t.n == 8
    assert sum(t.value(x) for x in range(256)) == 36
    full = set(range(inst.sigma))
    for x in range(256):
        w = inst.decode(x)
        want = int(None not in w and set(w) == full)
        assert t.value(x) == want


def test_reference_table_cap():
    with pytest.raises(ValueError):
        surj_tt(3)
    with pytest.raises(ValueError):
        surj_tt(0)


@pytest.mark.parametrize("s,leaves", [(1, 24), (2, 105)])
def test_uformula_shape(s, leaves):
    phi = surj_uformula(s)
    inst = SurjInstance(s)
    assert formula_size(phi) == leaves == inst.sigma * inst.r * inst.c
    assert formula_depth(phi) == 3


def test_uformula_agrees_on_valid_words():
    inst = SurjInstance(1)
    phi = surj_uformula(1)
    t = surj_tt(1)
    for w in inst.all_words():
        x = inst.encode(w)
        assert eval_formula(phi, x) == t.value(x)


def test_uformula_agrees_s2_sampled():
    inst = SurjInstance(2)
    phi = surj_uformula(2)
    t = surj_tt(2)
    rng = random.Random(20260823)
    for _ in range(300):
        w = tuple(rng.randrange(inst.sigma) for _ in range(inst.r))
        x = inst.encode(w)
        assert eval_formula(phi, x) == t.value(x)


def test_uformula_base_offset():
    phi = surj_uformula(1, base=3)
    assert formula_vars(phi) == tuple(range(4, 12))
    # shifting the input by the base reproduces the unshifted table
    t = surj_tt(1)
    rng = random.Random(7)
    for _ in range(50):
        x = rng.randrange(256)
        assert eval_formula(phi, x << 3) == eval_formula(surj_uformula(1), x)


def test_pair_distribution_counts():
    pd = surj_pair_distribution(1)
    assert pd.sigma == 3 and pd.r == 4
    assert len(pd.support) == 72
    b_mass: dict = {}
    for a, b, w in pd.support:
        b_mass[b] = b_mass.get(b, Fraction(0)) + w
    assert len(b_mass) == 18
    assert set(b_mass.values()) == {Fraction(1, 18)}


def test_pair_distribution_word_structure():
    inst = SurjInstance(1)
    t = surj_tt(1)
    for a, b, _ in surj_pair_distribution(1).support:
        assert t.value(inst.encode(a)) == 1
        assert t.value(inst.encode(b)) == 0
        assert sum(x != y for x, y in zip(a, b)) == 1


def test_pair_distribution_certificate():
    pd = surj_pair_distribution(1)
    assert khrapchenko_cert_value(pd) == 8
    enc = am_from_khrapchenko(pd)
    assert enc.sigma == 2 and enc.r == 8
    assert am_cert_value(enc) == 8


def test_pair_distribution_s2():
    pd = surj_pair_distribution(2)
    assert len(pd.support) == 75600
    assert khrapchenko_cert_value(pd) == 18


def test_pair_distribution_cap():
    with pytest.raises(ValueError):
        surj_pair_distribution(3)


def test_distributed_form_shape():
    F, _ = andreev_F(2, 1)
    assert formula_size(F) == 400 == andreev_size_depth4(2, 1)
    assert formula_depth(F) == 4
    assert max(formula_vars(F)) <= andreev_arity(2, 1) == 20


def test_distributed_form_small_exhaustive():
    # k = 1 is small enough to sweep every validly encoded input
    F, ev = andreev_F(1, 1)
    assert formula_size(F) == andreev_size_depth4(1, 1) == 52
    assert formula_depth(F) == 4
    inst = SurjInstance(1)
    for f_bits in range(4):
        for w in inst.all_words():
            x = f_bits | (inst.encode(w) << 2)
            assert eval_formula(F, x) == ev(x)


def test_distributed_form_k2_sampled():
    F, ev = andreev_F(2, 1)
    inst = SurjInstance(1)
    rng = random.Random(99)
    for _ in range(400):
        x = rng.randrange(16)
        for i in range(2):
            w = tuple(rng.randrange(3) for _ in range(4))
            x |= inst.encode(w) << (4 + 8 * i)
        assert eval_formula(F, x) == ev(x)


def test_textbook_form():
    T = andreev_textbook(2, 1)
    assert formula_size(T) == 196 == andreev_textbook_size(2, 1)
    assert formula_depth(T) == 5
    # same function as the distributed form wherever the blocks decode
    F, _ = andreev_F(2, 1)
    inst = SurjInstance(1)
    rng = random.Random(4242)
    for _ in range(400):
        x = rng.randrange(16)
        for i in range(2):
            w = tuple(rng.randrange(3) for _ in range(4))
            x |= inst.encode(w) << (4 + 8 * i)
        assert eval_formula(T, x) == eval_formula(F, x)


def test_builder_caps():
    with pytest.raises(ValueError):
        andreev_F(0)
    with pytest.raises(ValueError):
        andreev_F(13)


@pytest.mark.parametrize("n,k", [(24, 2), (12, 2), (11, 1), (4, 1)])
def test_params_from_n(n, k):
    assert params_from_n(n) == k


def test_params_from_n_too_small():
    with pytest.raises(ValueError):
        params_from_n(3)


@pytest.mark.parametrize("n,s", [(8, 1), (20, 1), (21, 2)])
def test_surj_params_from_n(n, s):
    assert surj_params_from_n(n) == s


def test_surj_params_too_small():
    with pytest.raises(ValueError):
        surj_params_from_n(7)


def test_ratio_rows():
    rows = andreev_ratio_rows()
    assert [(s, k, n, size) for s, k, n, size, _ in rows] == [
        (1, 3, 32, 584),
        (2, 5, 137, 16832),
        (3, 5, 182, 33632),
    ]
    ratios = [r for *_, r in rows]
    assert ratios == sorted(ratios)
    assert all(1 < r < 3 for r in ratios)


def _parity2_hiding():
    f = parity_table(2)
    items = []
    for a in f.ones():
        for j in range(2):
            b = a ^ (1 << j)
            items.append((index_word(a, 2), index_word(b, 2), Fraction(1, 4)))
    return adversary_to_hiding(pair_distribution(2, 2, items))


@pytest.mark.parametrize(
    "f,g,dist,points,L_inner",
    [
        (and_table(2), parity_table(2), "par", 16, 2),
        (parity_table(2), parity_table(2), "par", 16, 4),
        (parity_table(2), majority_table(3), "maj", 36, 4),
    ],
)
def test_composition_identity(f, g, dist, points, L_inner):
    d = _parity2_hiding() if dist == "par" else majority_block(3)
    rep = composition_identity_check(f, g, d)
    assert rep
    assert rep.points == points
    assert rep.L_inner == L_inner
    assert len(rep.masks) == points
    assert all(0 <= m < (1 << f.n) for m in rep.masks)
    assert rep.witness is None


def test_composition_identity_fails_for_plain_restrictions():
    # a p-restriction keeps whole blocks alive or kills them outright, so the
    # restricted composition is almost never the outer function again
    bad = composition_identity_check(
        and_table(2), parity_table(2), p_random_restriction(2, Fraction(1, 2))
    )
    assert not bad
    assert bad.points == 81
    assert bad.witness is not None
