import random

import pytest

from formulalab.formula import (
    And,
    AndN,
    Const,
    Leaf,
    Or,
    OrN,
    apply_projection,
    balance,
    compose_formulas,
    demorgan_negate,
    eval_formula,
    format_formula,
    formula_depth,
    formula_size,
    formula_vars,
    parity_formula,
    parse_formula,
    random_formula,
    simplify,
    tt_from_formula,
)
from formulalab.projection import Projection, identity_restriction
from formulalab.truthtable import parity_table, random_table


XOR2 = Or(And(Leaf(1), Leaf(2, negated=True)), And(Leaf(1, negated=True), Leaf(2)))


def test_size_depth_vars():
    assert formula_size(XOR2) == 4
    assert formula_depth(XOR2) == 2
    assert formula_vars(XOR2) == (1, 2)
    assert formula_size(Const(1)) == 0
    assert formula_depth(Leaf(3)) == 0


def test_nary_counts():
    phi = AndN((Leaf(1), Leaf(2), OrN((Leaf(3), Leaf(4), Leaf(5)))))
    assert formula_size(phi) == 5
    assert formula_depth(phi) == 2


def test_tt_round_trip():
    assert tt_from_formula(XOR2, 2) == parity_table(2)
    for x in range(4):
        assert eval_formula(XOR2, x) == parity_table(2).value(x)


def test_demorgan_negate():
    neg = demorgan_negate(XOR2)
    assert formula_size(neg) == formula_size(XOR2)
    f = tt_from_formula(XOR2, 2)
    g = tt_from_formula(neg, 2)
    assert g.bits == f.bits ^ 0b1111


def test_simplify_removes_constants():
    phi = Or(And(Const(1), Leaf(1)), Const(0))
    s = simplify(phi)
    assert s == Leaf(1)
    assert simplify(And(Const(0), Leaf(5))) == Const(0)


def test_apply_projection_semantics():
    rng = random.Random(3)
    for _ in range(60):
        phi = random_formula(rng, 3, rng.randint(1, 7))
        images = tuple(rng.choice([0, 1, 2, 4, 3, 5]) for _ in range(3))
        p = Projection(3, 2, images)
        lhs = tt_from_formula(apply_projection(phi, p), 2)
        rhs_full = tt_from_formula(phi, 3)
        from formulalab.truthtable import restrict_tt

        assert lhs == restrict_tt(rhs_full, p)


def test_apply_projection_never_grows():
    rng = random.Random(4)
    for _ in range(60):
        phi = random_formula(rng, 3, rng.randint(1, 8))
        p = Projection(3, 3, (0, 4, 6))
        assert formula_size(apply_projection(phi, p)) <= formula_size(phi)


def test_parity_formula_shape():
    for t in (1, 2, 3):
        phi = parity_formula(t)
        assert formula_size(phi) == 4**t
        assert formula_depth(phi) == 2 * t
        assert tt_from_formula(phi, 1 << t) == parity_table(1 << t)


def test_compose_formulas():
    phi = compose_formulas(XOR2, XOR2, 2)
    assert tt_from_formula(phi, 4) == parity_table(4)


def test_balance_preserves_function():
    rng = random.Random(9)
    phi = random_formula(rng, 3, 12)
    bal = balance(phi)
    assert tt_from_formula(bal, 3) == tt_from_formula(phi, 3)


def test_format_parse_round_trip():
    rng = random.Random(21)
    for _ in range(40):
        phi = random_formula(rng, 3, rng.randint(1, 9))
        text = format_formula(phi)
        back = parse_formula(text)
        assert tt_from_formula(back, 3) == tt_from_formula(phi, 3)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_formula("x1 &")
    with pytest.raises(ValueError):
        parse_formula("(x1 | x2")
    with pytest.raises(ValueError):
        parse_formula("z3")


def test_random_formula_leaf_budget():
    rng = random.Random(6)
    for _ in range(50):
        want = rng.randint(1, 10)
        phi = random_formula(rng, 4, want)
        assert formula_size(phi) == want
        assert max(formula_vars(phi), default=0) <= 4


def test_identity_projection_noop():
    rng = random.Random(8)
    phi = random_formula(rng, 3, 6)
    p = identity_restriction(3)
    assert tt_from_formula(apply_projection(phi, p, do_simplify=False), 3) == tt_from_formula(phi, 3)
