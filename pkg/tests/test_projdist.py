"""Distributions over projections: parameter checks, conversions, products."""

import math
import random
from fractions import Fraction

import pytest

from formulalab.measures import index_word, pair_distribution
from formulalab.projdist import (
    ExactProjDist,
    FilterClosureError,
    NotFixingError,
    SamplerProjDist,
    adversary_to_hiding,
    condition_on_filter,
    exact_dist,
    format_proj_dist,
    generalized_hiding_check,
    hiding_to_fixing,
    is_fixing,
    is_hiding,
    join,
    m_fold,
    majority_block,
    p_random_restriction,
    parse_proj_dist,
    random_edge,
    random_exact_dist,
    random_m_alive,
    tightest_fixing,
    tightest_hiding,
)
from formulalab.projection import Projection, neg, pos
from formulalab.truthtable import parity_table


def test_restriction_support_and_weights():
    d = p_random_restriction(2, Fraction(1, 2))
    assert len(d.support) == 9
    assert sum(w for w, _ in d.support) == 1
    # all-alive point has weight p^2
    ident = Projection(2, 2, (pos(1), pos(2)))
    assert d.weight(ident) == Fraction(1, 4)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)])
def test_restriction_tightest_fixing(n, p):
    q = 2 * p / (1 - p)
    assert tightest_fixing(p_random_restriction(n, p)) == (q, q)


def test_fixing_check_boundary():
    d = p_random_restriction(2, Fraction(1, 3))
    q0, q1 = tightest_fixing(d)
    assert is_fixing(d, q0, q1)
    below = q0 * Fraction(99, 100)
    res = is_fixing(d, below, q1)
    assert not res
    assert res.witness.sigma == 0
    assert res.witness.lhs > res.witness.rhs


def test_edge_family_not_fixing():
    # substituting the single alive variable lands outside the support
    with pytest.raises(NotFixingError) as exc:
        tightest_fixing(random_edge(3))
    assert exc.value.witness is not None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_edge_tightest_hiding(n):
    d = random_edge(n)
    # alive variable x literal sign x constants on the rest
    assert len(d.support) == n * (1 << n)
    assert d.m == 1
    assert tightest_hiding(d) == (Fraction(1, n), Fraction(1, n))


@pytest.mark.parametrize("n,m", [(3, 1), (4, 2), (6, 2)])
def test_m_alive_parameters(n, m):
    d = random_m_alive(n, m)
    assert len(d.support) == math.perm(n, m) * (1 << n)
    q = Fraction(1, n - m + 1)
    assert tightest_hiding(d) == (q, q)


def test_majority_block_parameters():
    d = majority_block(3)
    assert len(d.support) == 6
    assert tightest_hiding(d) == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(NotFixingError):
        tightest_fixing(d)


def test_hiding_check_negative_witness():
    d = random_edge(2)
    res = is_hiding(d, Fraction(1, 3), Fraction(1, 3))
    assert not res
    assert res.witness.lhs == Fraction(1, 2)


def test_exact_dist_merges_and_validates():
    p = Projection(1, 1, (pos(1),))
    q = Projection(1, 1, (0,))
    d = exact_dist(1, 1, [(Fraction(1, 2), p), (Fraction(1, 2), p)])
    assert len(d.support) == 1
    with pytest.raises(ValueError):
        exact_dist(1, 1, [(Fraction(1, 2), p)])  # mass 1/2
    # zero-weight items are dropped rather than kept
    d = exact_dist(1, 1, [(Fraction(0), p), (Fraction(1), q)])
    assert len(d.support) == 1 and d.weight(p) == 0
    with pytest.raises(ValueError):
        exact_dist(1, 1, [(Fraction(-1, 2), p), (Fraction(3, 2), q)])


def test_draw_and_sample_deterministic():
    d = p_random_restriction(3, Fraction(1, 3))
    assert d.sample(7, 0) == d.sample(7, 0)
    seen = {d.sample(7, k).images for k in range(200)}
    assert len(seen) > 10  # actually explores the support
    rng = random.Random(42)
    a = [d.draw(random.Random(f"s:{k}")).images for k in range(20)]
    b = [d.draw(random.Random(f"s:{k}")).images for k in range(20)]
    assert a == b


def test_join_shapes_and_weights():
    d1 = p_random_restriction(1, Fraction(1, 2))
    d2 = random_edge(2)
    j = join(d1, d2)
    assert isinstance(j, ExactProjDist)
    assert (j.n, j.m) == (3, 2)
    assert len(j.support) == len(d1.support) * len(d2.support)
    assert sum(w for w, _ in j.support) == 1
    # second component's targets are shifted past the first namespace
    for _, p in j.support:
        img = p.image(1)
        if img >= 2:
            assert (img >> 1) == 1
        for i in (2, 3):
            img = p.image(i)
            if img >= 2:
                assert (img >> 1) == 2


def test_m_fold_exact_and_identity():
    d = random_edge(2)
    assert m_fold(d, 1) is d
    f2 = m_fold(d, 2)
    assert (f2.n, f2.m) == (4, 2)
    assert len(f2.support) == len(d.support) ** 2
    assert tightest_hiding(f2) == tightest_hiding(d)


def test_m_fold_sampler_fallback():
    d = p_random_restriction(3, Fraction(1, 2))  # 27 points
    big = m_fold(d, 6)  # 27^6 > 10^7
    assert isinstance(big, SamplerProjDist)
    assert (big.n, big.m) == (18, 18)
    assert big.sample(3, 5).images == big.sample(3, 5).images
    assert not hasattr(big, "support")  # samplers cannot enumerate


def test_hiding_to_fixing_edge3():
    d = random_edge(3)
    q = Fraction(1, 3)
    conv = hiding_to_fixing(d)
    m = d.m  # single target variable
    assert m == 1
    assert is_fixing(conv.dist, 4 * m * m * q, 4 * m * m * q)
    # every support point uses exactly one target, so the identity event
    # is independent of p with probability 1 - 1/2m
    assert conv.independent
    assert conv.identity_prob == Fraction(1, 2)


def _parity2_adversary():
    f = parity_table(2)
    items = []
    for a in f.ones():
        for j in range(2):
            b = a ^ (1 << j)
            items.append((index_word(a, 2), index_word(b, 2), Fraction(1, 4)))
    return adversary_to_hiding(pair_distribution(2, 2, items))


def test_adversary_to_hiding_parity2():
    d = _parity2_adversary()
    assert (d.n, d.m) == (2, 1)
    assert len(d.support) == 4
    assert tightest_hiding(d) == (Fraction(1, 2), Fraction(1, 2))
    # substituting recovers the two sides of each pair
    f = parity_table(2)
    for _, p in d.support:
        assert f.value(p.substitute(1, 1).assignment_index()) == 1
        assert f.value(p.substitute(1, 0).assignment_index()) == 0


def test_hiding_to_fixing_folded_adversary():
    d2 = m_fold(_parity2_adversary(), 2)
    conv = hiding_to_fixing(d2)
    assert conv.independent
    assert conv.identity_prob == Fraction(9, 16)
    q0, q1 = tightest_hiding(d2)
    m = d2.m
    assert is_fixing(conv.dist, 4 * m * m * q0, 4 * m * m * q1)


def test_hiding_to_fixing_dependent_case():
    # one point uses a target, the other does not: conditionals differ
    d = exact_dist(
        1,
        1,
        [
            (Fraction(1, 2), Projection(1, 1, (pos(1),))),
            (Fraction(1, 2), Projection(1, 1, (0,))),
        ],
    )
    conv = hiding_to_fixing(d)
    assert not conv.independent
    assert conv.identity_prob == Fraction(3, 4)
    q0, q1 = tightest_hiding(d)
    assert is_fixing(conv.dist, 4 * q0, 4 * q1)


def test_filter_conditioning_keeps_fixing():
    d = p_random_restriction(3, Fraction(1, 3))
    q0, q1 = tightest_fixing(d)
    cond = condition_on_filter(d, lambda pi: pi.image(1) == 0)
    assert sum(w for w, _ in cond.support) == 1
    assert len(cond.support) == 9
    assert is_fixing(cond, q0, q1)


def test_filter_closure_rejected():
    # "x1 not fixed to 1" keeps alive points whose substitution escapes
    d = p_random_restriction(2, Fraction(1, 2))
    with pytest.raises(FilterClosureError):
        condition_on_filter(d, lambda pi: pi.image(1) != 1)


def test_generalized_hiding_full_and_single_sets():
    d = random_edge(3)
    all_images = frozenset(
        p.substitute(1, 0).images for _, p in d.support
    )
    lhs, bound, holds = generalized_hiding_check(d, [(Fraction(1), all_images)], 1, 1, 0)
    assert holds and bound == Fraction(1, 3)
    assert lhs == Fraction(1, 3)
    one = frozenset([next(iter(all_images))])
    lhs, bound, holds = generalized_hiding_check(d, [(Fraction(1), one)], 2, 1, 0)
    assert holds
    # a set no substituted projection can hit: y1 literals survive nowhere
    lhs, _, holds = generalized_hiding_check(
        d, [(Fraction(1), frozenset([(2, 2, 2)]))], 1, 1, 0
    )
    assert lhs is None and holds


def test_format_parse_round_trip():
    rng = random.Random(77)
    for _ in range(20):
        d = random_exact_dist(rng, 3, 2, rng.randint(1, 5))
        text = format_proj_dist(d)
        back = parse_proj_dist(text)
        assert back == d


def test_parse_rejects_bad_mass():
    d = p_random_restriction(1, Fraction(1, 2))
    text = format_proj_dist(d)
    truncated = "\n".join(text.splitlines()[:3]) + "\n"
    with pytest.raises(ValueError):
        parse_proj_dist(truncated)


def test_support_cap_enforced():
    with pytest.raises(ValueError):
        random_m_alive(12, 6)  # perm(12,6) * 2^6 is way past the cap
