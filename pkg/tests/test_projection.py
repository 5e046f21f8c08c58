import random

import pytest

from formulalab.projection import (
    Projection,
    assignment_projection,
    format_projection,
    identity_restriction,
    lit,
    neg,
    parse_projection,
    pos,
    random_projection,
)


def test_image_codes():
    assert pos(1) == 2 and neg(1) == 3
    assert pos(3) == 6 and neg(3) == 7
    assert lit(2, False) == 4 and lit(2, True) == 5


def test_projection_validation():
    with pytest.raises(ValueError):
        Projection(2, 1, (2,))  # wrong image count
    with pytest.raises(ValueError):
        Projection(1, 1, (4,))  # y2 exceeds target arity
    Projection(1, 0, (0,))  # all-constant needs no outputs


def test_substitute():
    p = Projection(3, 2, (pos(1), neg(1), pos(2)))
    q = p.substitute(1, 0)
    assert q.images == (0, 1, pos(2))
    r = p.substitute(1, 1)
    assert r.images == (1, 0, pos(2))
    assert p.substitute(2, 1).images == (pos(1), neg(1), 1)
    with pytest.raises(IndexError):
        p.substitute(3, 0)


def test_used_outputs_and_assignment():
    p = Projection(3, 2, (pos(2), 1, neg(2)))
    assert p.used_outputs() == (2,)
    assert not p.is_assignment()
    a = assignment_projection(3, 0b101)
    assert a.is_assignment()
    assert a.assignment_index() == 0b101
    with pytest.raises(ValueError):
        p.assignment_index()


def test_identity_restriction():
    p = identity_restriction(3)
    assert p.images == (pos(1), pos(2), pos(3))
    assert p.used_outputs() == (1, 2, 3)


def test_format_parse_round_trip():
    rng = random.Random(13)
    for _ in range(50):
        p = random_projection(rng, 4, 2)
        text = format_projection(p)
        assert parse_projection(text, 4, 2) == p


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_projection("x1 = 0\n", 2, 0)  # missing x2
    with pytest.raises(ValueError):
        parse_projection("x1 = 0\nx1 = 1\nx2 = 0\n", 2, 0)
    with pytest.raises(ValueError):
        parse_projection("x1 = z9\nx2 = 0\n", 2, 0)


def test_random_projection_const_only_when_no_outputs():
    rng = random.Random(1)
    for _ in range(20):
        p = random_projection(rng, 3, 0)
        assert p.is_assignment()
