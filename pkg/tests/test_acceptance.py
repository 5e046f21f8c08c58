"""Eleven go/no-go gates for the whole package, one test per gate.

Every numeric claim is checked at its stated tolerance -- exact rational
comparison unless a line says otherwise.  Each test ends with a single
summary line (visible under pytest -s); the pytest verdict itself is the
pass/fail signal.
"""

import random
import time
from fractions import Fraction

import numpy as np

from formulalab import (
    Projection,
    TruthTable,
    adversary_to_hiding,
    am_cert_value,
    amb_relation_value,
    and_table,
    andreev_F,
    composition_identity_check,
    eval_formula,
    expected_L_exact,
    formula_depth,
    formula_size,
    hiding_to_fixing,
    info_inequality_check,
    is_fixing,
    is_hiding,
    join,
    khrapchenko_K,
    khrapchenko_Kmin,
    khrapchenko_cert_value,
    kmin_all,
    kmin_witness,
    kw_protocol,
    kw_verify,
    leaf_count,
    literal_table,
    m_fold,
    majority_block,
    majority_table,
    negate_inputs,
    p_random_restriction,
    pair_distribution,
    parity_curve_row,
    parity_formula,
    parity_table,
    random_edge,
    random_formula,
    random_m_alive,
    random_projection,
    reduction_bound_check,
    relation_from_sets,
    restrict_tt,
    single_literal_check,
    surj_pair_distribution,
    surj_tt,
    surj_uformula,
    SurjInstance,
    tightest_fixing,
    tightest_hiding,
    uniform_khrapchenko_distribution,
    witness_formula,
)
from formulalab.measures import index_word, random_pair_distribution
from formulalab.projdist import random_exact_dist
from formulalab.sizetable import build_size_table, get_table
from formulalab.verify import _random_fixing_dist


def _all_tables(n):
    return (TruthTable(n, bits) for bits in range(1 << (1 << n)))


def test_criterion_01_size_oracle():
    t0 = time.perf_counter()
    tab3 = build_size_table(3)
    dt3 = time.perf_counter() - t0
    assert dt3 < 5.0

    t0 = time.perf_counter()
    tab4 = build_size_table(4)
    dt4 = time.perf_counter() - t0
    assert dt4 < 1800.0

    assert tab3.L[0] == 0 and tab3.L[255] == 0
    assert tab3.L[literal_table(1, 3).bits] == 1
    assert get_table(2).L[parity_table(2).bits] == 4
    assert tab4.L[parity_table(4).bits] == 16

    # single-variable substitutions never grow L or D
    for f in _all_tables(3):
        Lf, Df = int(tab3.L[f.bits]), int(tab3.D[f.bits])
        for j in (1, 2, 3):
            for c in (0, 1):
                images = tuple(c if i == j else 2 * i for i in (1, 2, 3))
                g = restrict_tt(f, Projection(3, 3, images))
                assert tab3.L[g.bits] <= Lf
                assert tab3.D[g.bits] <= Df

    # negating inputs or the output never moves L
    for f in _all_tables(3):
        Lf = int(tab3.L[f.bits])
        assert tab3.L[f.bits ^ 255] == Lf
        for mask in range(8):
            assert tab3.L[negate_inputs(f, mask).bits] == Lf

    print(f"criterion 1: PASS  oracle built in {dt3:.2f}s / {dt4:.1f}s, "
          "anchors + monotonicity + negation invariance exact on all 256")


def test_criterion_02_cut_measures():
    t0 = time.perf_counter()
    for f in _all_tables(3):
        if f.is_constant():
            continue  # both sides 0, nothing to compare
        K = khrapchenko_K(f)
        Kmin = khrapchenko_Kmin(f)
        assert K / 4 <= Kmin <= K
        km, A, B = kmin_witness(f)
        assert km == Kmin
        assert amb_relation_value(f, relation_from_sets(f, A, B)) >= Kmin
    p3 = parity_table(3)
    assert khrapchenko_K(p3) == 9 and khrapchenko_Kmin(p3) == 9
    dt = time.perf_counter() - t0
    assert dt < 60.0
    print(f"criterion 2: PASS  K/4 <= Kmin <= K, witness-cut adversary >= Kmin, "
          f"all 256 tables in {dt:.2f}s")


def test_criterion_03_lower_bounds():
    for m in (2, 3, 4):
        L = get_table(m).L.astype(np.int64)
        km = kmin_all(m).astype(np.int64)
        assert np.all(L >= km)

    rng = random.Random("acceptance:quadratic-cap")
    checked = 0
    for f in _all_tables(3):
        if f.is_constant():
            continue
        for _ in range(1000):
            d = random_pair_distribution(f, rng)
            assert am_cert_value(d) <= 9
            checked += 1
    print(f"criterion 3: PASS  L >= Kmin on arities 2-4; soft adversary <= 9 "
          f"for {checked} sampled distributions")


def test_criterion_04_tightest_parameters():
    for n in (1, 2, 3):
        for p in (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)):
            q = 2 * p / (1 - p)
            assert tightest_fixing(p_random_restriction(n, p)) == (q, q)
    for n in (2, 3, 4):
        assert tightest_hiding(random_edge(n)) == (Fraction(1, n), Fraction(1, n))
    for n, m in ((3, 1), (4, 2)):
        q = Fraction(1, n - m + 1)
        assert tightest_hiding(random_m_alive(n, m)) == (q, q)
    assert tightest_hiding(majority_block(3, 1)) == (Fraction(1, 2), Fraction(1, 2))
    print("criterion 4: PASS  2p/(1-p), 1/n, 1/(n-m+1) and (1/2,1/2), all exact")


def test_criterion_05_single_literal():
    t0 = time.perf_counter()
    checked = 0
    for n in (1, 2, 3):
        dists = [p_random_restriction(n, p)
                 for p in (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2))]
        for f in _all_tables(n):
            for d in dists:
                assert single_literal_check(f, d).holds
                checked += 1
    dt = time.perf_counter() - t0
    assert dt < 300.0
    print(f"criterion 5: PASS  squared inequality exact for {checked} "
          f"(table, family) pairs in {dt:.1f}s")


def test_criterion_06_reduction_bound():
    rng = random.Random("acceptance:reduction")
    violations = 0
    for _ in range(10_000):
        phi = random_formula(rng, 3, rng.randint(2, 8))
        pi = random_projection(rng, 3, rng.randint(1, 2))
        lhs, rhs, holds = reduction_bound_check(phi, pi)
        if not holds:
            violations += 1
    assert violations == 0
    print("criterion 6: PASS  substitution bound held on 10^4 random "
          "(formula, projection) pairs, zero violations")


def _parity2_hiding():
    f = parity_table(2)
    items = []
    for a in f.ones():
        for j in range(2):
            b = a ^ (1 << j)
            items.append((index_word(a, 2), index_word(b, 2), Fraction(1, 4)))
    return adversary_to_hiding(pair_distribution(2, 2, items))


def test_criterion_07_conversion_and_products():
    for d in (random_edge(3), _parity2_hiding()):
        q0, q1 = tightest_hiding(d)
        m = d.m
        conv = hiding_to_fixing(d)
        assert is_fixing(conv.dist, 4 * m * m * q0, 4 * m * m * q1)
        assert conv.identity_prob >= Fraction(1, 2)

    rng = random.Random("acceptance:products")
    for _ in range(50):
        d1, (a0, a1) = _random_fixing_dist(rng, rng.randint(1, 2), 1)
        d2, (b0, b1) = _random_fixing_dist(rng, rng.randint(1, 2), 1)
        assert is_fixing(join(d1, d2), max(a0, b0), max(a1, b1))
    for _ in range(50):
        d1 = random_exact_dist(rng, rng.randint(1, 2), 1, rng.randint(2, 4))
        d2 = random_exact_dist(rng, rng.randint(1, 2), 1, rng.randint(2, 4))
        a0, a1 = tightest_hiding(d1)
        b0, b1 = tightest_hiding(d2)
        assert is_hiding(join(d1, d2), max(a0, b0), max(a1, b1))
    d = p_random_restriction(2, Fraction(1, 3))
    q0, q1 = tightest_fixing(d)
    for k in (2, 3):
        assert is_fixing(m_fold(d, k), q0, q1)
    print("criterion 7: PASS  conversion fixing at (4m^2 q0, 4m^2 q1) with "
          "identity >= 1/2; 100 joins + fold powers kept their parameters")


def test_criterion_08_composition_identity():
    cases = (
        (and_table(2), parity_table(2), _parity2_hiding()),
        (parity_table(2), parity_table(2), _parity2_hiding()),
        (parity_table(2), majority_table(3), majority_block(3)),
    )
    pts = []
    for f, g, d in cases:
        rep = composition_identity_check(f, g, d)
        assert rep.ok
        assert len(rep.masks) == rep.points
        pts.append(rep.points)
    print(f"criterion 8: PASS  {pts} joint restrictions each equal the outer "
          "function up to negations with L unchanged")


def test_criterion_09_surjectivity():
    phi = surj_uformula(1)
    assert formula_size(phi) == 24 and formula_depth(phi) == 3
    inst = SurjInstance(1)
    t = surj_tt(1)
    for w in inst.all_words():
        x = inst.encode(w)
        assert eval_formula(phi, x) == t.value(x)

    assert khrapchenko_cert_value(surj_pair_distribution(1)) == 8
    assert khrapchenko_cert_value(surj_pair_distribution(2)) >= 18 == 3 * 6

    F, ev = andreev_F(2, 1)
    assert formula_depth(F) == 4
    rng = random.Random("acceptance:andreev")
    for _ in range(1000):
        x = rng.randrange(16)
        for i in range(2):
            word = tuple(rng.randrange(3) for _ in range(4))
            x |= inst.encode(word) << (4 + 8 * i)
        assert eval_formula(F, x) == ev(x)
    print("criterion 9: PASS  24-leaf depth-3 gadget exact on valid words, "
          "certificates 8 and 18, depth-4 outer form matched 10^3 samples")


def test_criterion_10_shrinkage():
    assert expected_L_exact(parity_table(2), p_random_restriction(2, Fraction(1, 2))) \
        == Fraction(3, 2)
    assert expected_L_exact(parity_table(6), random_m_alive(6, 2)) == 4

    ratios = []
    for t in (2, 3):
        for p in (Fraction(1, 4), Fraction(1, 8)):
            if t == 2:
                row = parity_curve_row(t, "restriction", p)
                assert row.mode == "exact"
            else:
                row = parity_curve_row(t, "restriction", p, mode="mc",
                                       seed=20260823, trials=2000)
            assert float(row.ratio) <= 10.0
            ratios.append(float(row.ratio))

    a = parity_curve_row(3, "restriction", Fraction(1, 4), mode="mc",
                         seed=7, trials=500)
    b = parity_curve_row(3, "restriction", Fraction(1, 4), mode="mc",
                         seed=7, trials=500)
    assert (a.EL, a.stderr) == (b.EL, b.stderr)
    print(f"criterion 10: PASS  exact anchors 3/2 and 4; curve ratios "
          f"max {max(ratios):.3g} <= 10; MC bit-stable under a fixed seed")


def test_criterion_11_kw_information():
    funcs = [TruthTable(2, bits) for bits in range(16)
             if not TruthTable(2, bits).is_constant()]
    rng = random.Random("acceptance:kw")
    while len(funcs) < 14 + 50:
        f = TruthTable(3, rng.randrange(1, 255))
        if not f.is_constant():
            funcs.append(f)

    for f in funcs:
        phi = witness_formula(f)
        P = kw_protocol(phi, f)
        assert leaf_count(P) == formula_size(phi)
        assert kw_verify(P, f)

        class Runner:
            def run(self, a, b, P=P):
                return P.run(a, b).leaf_id

        lhs, rhs, ok = info_inequality_check(
            Runner(), uniform_khrapchenko_distribution(f))
        assert ok and lhs >= rhs - 1e-9
    print(f"criterion 11: PASS  {len(funcs)} protocols with matching leaf "
          "counts, verified games and the information inequality at 1e-9")
