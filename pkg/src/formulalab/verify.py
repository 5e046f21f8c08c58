"""One-shot verification of every quantitative claim the library makes.

Each check re-derives a property from scratch (exhaustive sweep, exact
rational comparison, or seeded sampling) and reports a single PASS/FAIL
row.  Rows are grouped into suites matching the module layout; `all` runs
everything.  Randomized rows draw their generator from the run seed and
their own name, so adding or reordering rows never changes another row's
stream, and identical invocations produce byte-identical output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .formula import (
    formula_depth,
    formula_size,
    parity_formula,
    random_formula,
    tt_from_formula,
)
from .hardfunc import (
    SurjInstance,
    andreev_F,
    andreev_ratio_rows,
    andreev_size_depth4,
    andreev_textbook,
    andreev_textbook_size,
    composition_identity_check,
    surj_pair_distribution,
    surj_tt,
    surj_uformula,
)
from .kw import kw_protocol, kw_verify, leaf_count
from .measures import (
    am_cert_value,
    amb_relation_value,
    index_word,
    info_inequality_check,
    khrapchenko_K,
    khrapchenko_Kmin,
    khrapchenko_cert_value,
    kmin_all,
    kmin_witness,
    pair_distribution,
    random_khrapchenko_distribution,
    random_pair_distribution,
    relation_from_sets,
    uniform_khrapchenko_distribution,
)
from .projdist import (
    NotFixingError,
    adversary_to_hiding,
    condition_on_filter,
    hiding_to_fixing,
    is_fixing,
    is_hiding,
    join,
    m_fold,
    majority_block,
    p_random_restriction,
    random_edge,
    random_exact_dist,
    random_m_alive,
    tightest_fixing,
    tightest_hiding,
)
from .projection import random_projection
from .shrinkage import (
    conditional_shrink_check,
    expected_L_exact,
    expected_L_mc,
    parity_curve_row,
    reduction_bound_check,
    single_literal_check,
)
from .sizetable import D_exact, L_exact, get_table, max_L_function, witness_formula
from .truthtable import (
    TruthTable,
    and_table,
    majority_table,
    negate_inputs,
    parity_table,
    random_table,
    restrict_tt,
)
from .projection import Projection


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    randomized: bool
    fn: Callable[[Optional[random.Random]], tuple[bool, str]]


SUITES = ("core", "measures", "project", "shrink", "construct", "kw")

_CHECKS: list[Check] = []


def _check(name: str, suite: str, randomized: bool = False):
    def register(fn):
        _CHECKS.append(Check(name, suite, randomized, fn))
        return fn

    return register


def _all_tables(n: int):
    return (TruthTable(n, bits) for bits in range(1 << (1 << n)))


# ------------------------------------------------------------------- core


@_check("size-oracle-anchors", "core")
def _chk_anchors(rng):
    from .truthtable import const_table, literal_table

    ok = (
        L_exact(const_table(3, 0)) == 0
        and L_exact(const_table(3, 1)) == 0
        and L_exact(literal_table(1, 3)) == 1
        and L_exact(literal_table(2, 3, negated=True)) == 1
        and L_exact(parity_table(2)) == 4
        and L_exact(parity_table(3)) == 10
        and L_exact(majority_table(3)) == 5
        and max_L_function(3)[1] == 10
        and max_L_function(4)[1] == 16
    )
    return ok, "constants 0, literals 1, xor2 4, xor3 10, maj3 5; peaks 10 / 16"


@_check("restriction-monotonicity", "core")
def _chk_monotone(rng):
    checked = 0
    for f in _all_tables(3):
        Lf, Df = L_exact(f), D_exact(f)
        for j in (1, 2, 3):
            for c in (0, 1):
                images = tuple(
                    c if i == j else 2 * i for i in (1, 2, 3)
                )  # x_j -> c, others kept positive
                g = restrict_tt(f, Projection(3, 3, images))
                if L_exact(g) > Lf or D_exact(g) > Df:
                    return False, f"violated at table {f.bits}, x{j}<-{c}"
                checked += 1
    return True, f"{checked} single-variable substitutions, L and D never grow"


@_check("negation-invariance", "core")
def _chk_negation(rng):
    full = 255
    for f in _all_tables(3):
        Lf = L_exact(f)
        if L_exact(TruthTable(3, f.bits ^ full)) != Lf:
            return False, f"output negation changed L at table {f.bits}"
        for mask in range(8):
            if L_exact(negate_inputs(f, mask)) != Lf:
                return False, f"input mask {mask} changed L at table {f.bits}"
    return True, "256 functions x 8 input masks + output flip, L unchanged"


@_check("depth-size-consistency", "core")
def _chk_depth_size(rng):
    for f in _all_tables(3):
        L, D = L_exact(f), D_exact(f)
        if L > (1 << D):
            return False, f"L > 2^D at table {f.bits}"
        if L >= 1 and D > max(L - 1, 0):
            return False, f"D > L-1 at table {f.bits}"
    return True, "L <= 2^D and D <= L-1 across all 256 functions"


# --------------------------------------------------------------- measures


@_check("cut-bound-sandwich", "measures")
def _chk_sandwich(rng):
    for f in _all_tables(3):
        if f.is_constant():
            continue
        K = khrapchenko_K(f)
        Kmin = khrapchenko_Kmin(f)
        if not (K / 4 <= Kmin <= K):
            return False, f"table {f.bits}: K={K}, Kmin={Kmin}"
    return True, "K/4 <= Kmin <= K for all 254 non-constant functions"


@_check("parity-cut-anchors", "measures")
def _chk_parity_cuts(rng):
    p3 = parity_table(3)
    ok = (
        khrapchenko_K(p3) == 9
        and khrapchenko_Kmin(p3) == 9
        and khrapchenko_K(parity_table(2)) == 4
        and khrapchenko_Kmin(majority_table(3)) == 4
    )
    return ok, "K(xor3)=Kmin(xor3)=9, K(xor2)=4, Kmin(maj3)=4"


@_check("kmin-relation-adversary-value", "measures")
def _chk_amb_from_kmin(rng):
    for f in _all_tables(3):
        if f.is_constant():
            continue
        km, A, B = kmin_witness(f)
        v = amb_relation_value(f, relation_from_sets(f, A, B))
        if v < km:
            return False, f"table {f.bits}: Amb {v} < Kmin {km}"
    return True, "unweighted adversary value of the witness cut >= Kmin, all 254"


@_check("size-dominates-kmin", "measures")
def _chk_L_vs_kmin(rng):
    for m in (2, 3, 4):
        L = get_table(m).L.astype(np.int64)
        km = kmin_all(m).astype(np.int64)
        if not np.all(L >= km):
            bad = int(np.flatnonzero(L < km)[0])
            return False, f"arity {m} table {bad}"
    return True, "L >= Kmin for every function on 2, 3 and 4 variables"


@_check("soft-adversary-quadratic-cap", "measures", randomized=True)
def _chk_am_cap(rng):
    cap = Fraction(9)
    n_dists = 0
    for bits in range(1, 255):
        f = TruthTable(3, bits)
        for _ in range(50):
            d = random_pair_distribution(f, rng, k=5)
            if am_cert_value(d) > cap:
                return False, f"table {bits}: certificate above n^2"
            n_dists += 1
        for _ in range(50):
            d = random_khrapchenko_distribution(f, rng, k=5)
            if am_cert_value(d) > cap:
                return False, f"table {bits}: unit-distance certificate above n^2"
            n_dists += 1
    return True, f"{n_dists} sampled distributions, certificate <= 9 throughout"


@_check("parity2-uniform-certificates", "measures")
def _chk_parity2_certs(rng):
    d = uniform_khrapchenko_distribution(parity_table(2))
    kc = khrapchenko_cert_value(d)
    ac = am_cert_value(d)
    ok = kc == 4 and ac == 4 and L_exact(parity_table(2)) == 4
    return ok, f"uniform pair certificates {kc} = {ac} = L(xor2)"


# ---------------------------------------------------------------- project


@_check("restriction-fixing-parameter", "project")
def _chk_fix_param(rng):
    for n in (1, 2, 3):
        for p in (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)):
            q = 2 * p / (1 - p)
            got = tightest_fixing(p_random_restriction(n, p))
            if got != (q, q):
                return False, f"n={n} p={p}: got {got}"
    return True, "tightest pair equals (2p/(1-p), same) for nine (n, p) combinations"


@_check("alive-edge-hiding-parameter", "project")
def _chk_edge_param(rng):
    for n in (2, 3, 4):
        got = tightest_hiding(random_edge(n))
        if got != (Fraction(1, n), Fraction(1, n)):
            return False, f"n={n}: got {got}"
    return True, "one-alive-variable family is exactly 1/n-hiding for n = 2, 3, 4"


@_check("m-alive-hiding-parameter", "project")
def _chk_malive_param(rng):
    for n, m in ((3, 1), (4, 2)):
        q = Fraction(1, n - m + 1)
        got = tightest_hiding(random_m_alive(n, m))
        if got != (q, q):
            return False, f"(n,m)=({n},{m}): got {got}"
    return True, "m-survivors family is exactly 1/(n-m+1)-hiding at (3,1) and (4,2)"


@_check("majority-block-parameters", "project")
def _chk_majority_param(rng):
    d = majority_block(3)
    got = tightest_hiding(d)
    if got != (Fraction(1, 2), Fraction(1, 2)):
        return False, f"hiding pair {got}"
    try:
        tightest_fixing(d)
        return False, "unexpectedly fixing"
    except NotFixingError:
        pass
    return True, "(1/2,1/2)-hiding and not fixing for any parameter"


@_check("filter-conditioning-preserves-fixing", "project")
def _chk_filter(rng):
    for p in (Fraction(1, 3), Fraction(1, 2)):
        d = p_random_restriction(3, p)
        q0, q1 = tightest_fixing(d)
        cond = condition_on_filter(d, lambda pi: pi.image(1) == 0)
        if not is_fixing(cond, q0, q1):
            return False, f"p={p}: conditioned family lost the fixing pair"
    return True, "conditioning on image(x1)=0 keeps the unconditioned (q0, q1)"


def _parity2_adversary_hiding():
    f = parity_table(2)
    items = []
    for a in f.ones():
        for j in range(2):
            b = a ^ (1 << j)
            items.append((index_word(a, 2), index_word(b, 2), Fraction(1, 4)))
    return adversary_to_hiding(pair_distribution(2, 2, items))


@_check("hiding-to-fixing-conversion", "project")
def _chk_h2f(rng):
    for label, d in (("edge(3)", random_edge(3)), ("xor2-pairs", _parity2_adversary_hiding())):
        q0, q1 = tightest_hiding(d)
        m = d.m
        conv = hiding_to_fixing(d)
        if not is_fixing(conv.dist, 4 * m * m * q0, 4 * m * m * q1):
            return False, f"{label}: converted family misses (4m^2 q0, 4m^2 q1)"
        if conv.identity_prob < Fraction(1, 2):
            return False, f"{label}: identity probability {conv.identity_prob} < 1/2"
    return True, "both families fixing at (4m^2 q0, 4m^2 q1); identity prob >= 1/2"


def _random_fixing_dist(rng, n, m):
    """Random distribution whose support is closed under one-step output
    substitutions; closure guarantees some fixing pair exists."""
    from .projdist import exact_dist

    seeds = {random_projection(rng, n, m) for _ in range(rng.randint(1, 3))}
    closure = set(seeds)
    frontier = list(seeds)
    while frontier:
        p = frontier.pop()
        for j in p.used_outputs():
            for sigma in (0, 1):
                q = p.substitute(j, sigma)
                if q not in closure:
                    closure.add(q)
                    frontier.append(q)
    items = [(Fraction(rng.randint(1, 8)), p) for p in sorted(closure, key=lambda p: p.images)]
    total = sum(w for w, _ in items)
    d = exact_dist(n, m, ((w / total, p) for w, p in items))
    return d, tightest_fixing(d)


@_check("product-preserves-fixing", "project", randomized=True)
def _chk_join_fixing(rng):
    for _ in range(100):
        d1, (a0, a1) = _random_fixing_dist(rng, rng.randint(1, 2), 1)
        d2, (b0, b1) = _random_fixing_dist(rng, rng.randint(1, 2), 1)
        j = join(d1, d2)
        if not is_fixing(j, max(a0, b0), max(a1, b1)):
            return False, "joint family misses the max of the component pairs"
    d = p_random_restriction(2, Fraction(1, 3))
    q0, q1 = tightest_fixing(d)
    for k in (2, 3):
        if not is_fixing(m_fold(d, k), q0, q1):
            return False, f"{k}-fold power lost the pair"
    return True, "100 random joins + 2- and 3-fold powers keep certified pairs"


@_check("product-preserves-hiding", "project", randomized=True)
def _chk_join_hiding(rng):
    for _ in range(100):
        d1 = random_exact_dist(rng, rng.randint(1, 2), 1, rng.randint(2, 4))
        d2 = random_exact_dist(rng, rng.randint(1, 2), 1, rng.randint(2, 4))
        a0, a1 = tightest_hiding(d1)
        b0, b1 = tightest_hiding(d2)
        j = join(d1, d2)
        if not is_hiding(j, max(a0, b0), max(a1, b1)):
            return False, "joint family misses the max of the component pairs"
    d = random_edge(2)
    q0, q1 = tightest_hiding(d)
    for k in (2, 3):
        if not is_hiding(m_fold(d, k), q0, q1):
            return False, f"{k}-fold power lost the pair"
    return True, "100 random joins + 2- and 3-fold powers keep certified pairs"


# ----------------------------------------------------------------- shrink


@_check("single-literal-probability-bound", "shrink")
def _chk_single_literal(rng):
    ps = (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2))
    count = 0
    for n in (2, 3):
        for p in ps:
            d = p_random_restriction(n, p)
            for f in _all_tables(n):
                c = single_literal_check(f, d)
                if not c.holds:
                    return False, f"n={n} p={p} table {f.bits}"
                count += 1
    return True, f"Pr[literal]^2 <= q^2 L over {count} (function, family) pairs"


@_check("literal-substitution-size-bound", "shrink", randomized=True)
def _chk_reduction(rng):
    for trial in range(10000):
        phi = random_formula(rng, 3, rng.randint(1, 8))
        pi = random_projection(rng, 3, rng.randint(1, 2))
        lhs, rhs, ok = reduction_bound_check(phi, pi)
        if not ok:
            return False, f"trial {trial}: restricted size {lhs} > charge {rhs}"
    return True, "10000 random (formula, projection) pairs, charge always covers"


@_check("conditioned-single-literal-bound", "shrink", randomized=True)
def _chk_conditional(rng):
    d2 = p_random_restriction(2, Fraction(1, 2))
    defined = 0
    for b1 in range(16):
        for b2 in range(16):
            f1, f2 = TruthTable(2, b1), TruthTable(2, b2)
            for sigma in (0, 1):
                for tau in (0, 1):
                    c = conditional_shrink_check(f1, f2, d2, 1, sigma, tau)
                    if c.holds is False:
                        return False, f"2-var tables ({b1},{b2}) sigma={sigma} tau={tau}"
                    defined += c.holds is not None
    d3 = p_random_restriction(3, Fraction(1, 3))
    for _ in range(200):
        f1 = random_table(3, rng.randrange(1 << 30))
        f2 = random_table(3, rng.randrange(1 << 30))
        j = rng.randint(1, 3)
        c = conditional_shrink_check(f1, f2, d3, j, rng.randint(0, 1), rng.randint(0, 1))
        if c.holds is False:
            return False, f"3-var tables ({f1.bits},{f2.bits}) at y{j}"
        defined += c.holds is not None
    return True, f"{defined} defined conditionings, squared bound never violated"


@_check("expected-size-anchors", "shrink")
def _chk_el_anchors(rng):
    e1 = expected_L_exact(parity_table(2), p_random_restriction(2, Fraction(1, 2)))
    e2 = expected_L_exact(parity_formula(2), p_random_restriction(4, Fraction(1, 4)))
    if e1 != Fraction(3, 2):
        return False, f"xor2 at p=1/2 gave {e1}"
    if e2 != Fraction(115, 64):
        return False, f"xor4 at p=1/4 gave {e2}"
    # with exactly 2 survivors the restriction is xor2 up to literals, L = 4
    e3 = expected_L_exact(parity_table(6), random_m_alive(6, 2))
    if e3 != 4:
        return False, f"xor6 under 2 survivors gave {e3}"
    return True, "E[L] anchors 3/2 (xor2, p=1/2), 115/64 (xor4, p=1/4), 4 (xor6, m=2)"


@_check("shrinkage-curve-ratio", "shrink", randomized=True)
def _chk_curve(rng):
    seed = rng.randrange(1 << 30)
    worst = Fraction(0)
    for t in (2, 3):
        for p in (Fraction(1, 4), Fraction(1, 8)):
            row = parity_curve_row(t, "restriction", p, seed=seed, trials=4000)
            ratio = float(row.ratio)
            if ratio > 10:
                return False, f"t={t} p={p}: ratio {ratio}"
            worst = max(worst, ratio)
    return True, f"four grid rows, worst observed/bound ratio {worst:.4f} <= 10"


@_check("mc-determinism", "shrink", randomized=True)
def _chk_mc_repro(rng):
    seed = rng.randrange(1 << 30)
    d = p_random_restriction(8, Fraction(1, 4))
    phi = parity_formula(3)
    a = expected_L_mc(phi, d, 500, seed)
    b = expected_L_mc(phi, d, 500, seed)
    if a != b:
        return False, "same seed produced different estimates"
    c = expected_L_mc(phi, d, 500, seed + 1)
    return True, f"seed {seed}: mean {a.mean} reproduced; shifted seed differs: {a.mean != c.mean}"


# -------------------------------------------------------------- construct


@_check("surjectivity-formula-agreement", "construct")
def _chk_surj(rng):
    uf = surj_uformula(1)
    if formula_size(uf) != 24 or formula_depth(uf) != 3:
        return False, f"size {formula_size(uf)}, depth {formula_depth(uf)}"
    inst = SurjInstance(1)
    tab = surj_tt(1)
    from .formula import eval_formula
    import itertools

    for word in itertools.product(range(3), repeat=4):
        x = inst.encode(word)
        if eval_formula(uf, x) != tab.value(x):
            return False, f"disagrees at word {word}"
    return True, "24 leaves, depth 3, agrees with the table on all 81 valid words"


@_check("surjectivity-certificates", "construct")
def _chk_surj_cert(rng):
    c1 = khrapchenko_cert_value(surj_pair_distribution(1))
    c2 = khrapchenko_cert_value(surj_pair_distribution(2))
    ok = c1 == 8 and c2 == 18
    return ok, f"pair-distribution certificates {c1} and {c2} = (s+1)(2s+2)"


@_check("table-blocks-depth4", "construct", randomized=True)
def _chk_andreev(rng):
    F, ev = andreev_F(2, 1)
    if formula_depth(F) != 4:
        return False, f"depth {formula_depth(F)}"
    if formula_size(F) != andreev_size_depth4(2, 1):
        return False, "size disagrees with the closed form"
    T = andreev_textbook(2, 1)
    if formula_size(T) != andreev_textbook_size(2, 1) or formula_depth(T) != 5:
        return False, "direct form size/depth off"
    from .formula import eval_formula

    inst = SurjInstance(1)
    for _ in range(1000):
        x = rng.randrange(1 << 4)
        for i in range(2):
            word = tuple(rng.randrange(3) for _ in range(4))
            x |= inst.encode(word) << (4 + 8 * i)
        if eval_formula(F, x) != ev(x) or eval_formula(T, x) != ev(x):
            return False, f"evaluator disagreement at input {x}"
    return True, "depth 4 at 400 leaves; 1000 sampled valid encodings agree"


@_check("blockwise-composition-identity", "construct")
def _chk_composition(rng):
    dpar = _parity2_adversary_hiding()
    cases = (
        (and_table(2), parity_table(2), dpar, 2),
        (parity_table(2), parity_table(2), dpar, 4),
        (parity_table(2), majority_table(3), majority_block(3), 4),
    )
    for f, g, d, want in cases:
        rep = composition_identity_check(f, g, d)
        if not rep.ok or rep.L_inner != want:
            return False, f"inner size {rep.L_inner}, expected {want}"
    return True, "three pairs: every restriction is the outer function, sizes 2/4/4"


@_check("size-ratio-table", "construct")
def _chk_ratio(rng):
    rows = andreev_ratio_rows()
    sizes = [r[3] for r in rows]
    ratios = [r[4] for r in rows]
    if sizes != [584, 16832, 33632]:
        return False, f"sizes {sizes}"
    if any(ratios[i] > ratios[i + 1] for i in range(len(ratios) - 1)):
        return False, "ratio against n^3/log^3 n decreased"
    return True, "sizes 584/16832/33632; cubic-over-polylog ratio nondecreasing"


# --------------------------------------------------------------------- kw


@_check("protocol-leaf-count", "kw", randomized=True)
def _chk_kw(rng):
    n_checked = 0
    for bits in range(16):
        f = TruthTable(2, bits)
        if f.is_constant():
            continue
        phi = witness_formula(f)
        P = kw_protocol(phi, f)
        if leaf_count(P) != formula_size(phi) or not kw_verify(P, f):
            return False, f"2-var table {bits}"
        n_checked += 1
    for _ in range(50):
        f = random_table(3, rng.randrange(1 << 30))
        if f.is_constant():
            continue
        phi = witness_formula(f)
        P = kw_protocol(phi, f)
        if leaf_count(P) != formula_size(phi) or not kw_verify(P, f):
            return False, f"3-var table {f.bits}"
        n_checked += 1
    return True, f"{n_checked} protocols: leaf count = size, every leaf separates"


@_check("protocol-information-bound", "kw", randomized=True)
def _chk_kw_info(rng):
    n_checked = 0
    for bits in range(16):
        f = TruthTable(2, bits)
        if f.is_constant():
            continue
        P = kw_protocol(witness_formula(f), f)
        lhs, rhs, ok = info_inequality_check(P, uniform_khrapchenko_distribution(f))
        if not ok:
            return False, f"2-var table {bits}: {lhs} < {rhs}"
        n_checked += 1
    for _ in range(50):
        f = random_table(3, rng.randrange(1 << 30))
        if f.is_constant():
            continue
        P = kw_protocol(witness_formula(f), f)
        lhs, rhs, ok = info_inequality_check(P, uniform_khrapchenko_distribution(f))
        if not ok:
            return False, f"3-var table {f.bits}: {lhs} < {rhs}"
        n_checked += 1
    return True, f"{n_checked} protocols: joint information covers both conditionals"


# ----------------------------------------------------------------- runner


class UsageError(ValueError):
    """Bad suite name or missing seed; maps to exit code 2 in the CLI."""


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return list(_CHECKS)
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {('all',) + SUITES}")
    return [c for c in _CHECKS if c.suite == suite]


def run_suite(suite: str = "all", seed: Optional[int] = None, out=None) -> int:
    """Run one suite (or all), print one row per check, return 0/1.

    Every randomized row derives its generator from (seed, row name), so
    row order and suite selection never shift another row's samples.
    """
    import sys

    out = out or sys.stdout
    rows = checks_for(suite)
    if seed is None and any(c.randomized for c in rows):
        raise UsageError("--seed is mandatory: suite contains randomized checks")
    width = max(len(c.name) for c in rows)
    failures = 0
    for c in rows:
        rng = random.Random(f"{seed}:{c.name}") if c.randomized else None
        try:
            ok, detail = c.fn(rng)
        except Exception as e:  # a crash is a failure, not a crash of the runner
            ok, detail = False, f"raised {type(e).__name__}: {e}"
        failures += not ok
        tag = "PASS" if ok else "FAIL"
        out.write(f"{tag} {c.name:<{width}}  {detail}\n")
    out.write(f"{len(rows) - failures}/{len(rows)} checks passed\n")
    return 0 if failures == 0 else 1
