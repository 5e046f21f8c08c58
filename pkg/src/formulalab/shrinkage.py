"""Expected formula size under random projections, exact and sampled.

The exact path enumerates a distribution's support, restricts the truth
table at every point and reads minimum sizes off the oracle; everything is
a rational.  The Monte Carlo path is for formulas whose restricted arity
exceeds the oracle cap: samples whose alive-variable count still fits are
scored exactly, the rest fall back to the size of the simplified formula,
which only ever overestimates (the fraction of such samples is reported).

Inequalities with an irrational right-hand side (q * sqrt(L)) are verified
by squaring both sides, so no verdict ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .formula import (
    Formula,
    apply_projection,
    eval_formula,
    formula_depth,
    formula_size,
    formula_vars,
    parity_formula,
    tt_from_formula,
)
from .projection import Projection
from .projdist import (
    ExactProjDist,
    p_random_restriction,
    random_m_alive,
    tightest_fixing,
    tightest_hiding,
)
from .sizetable import L_exact
from .truthtable import TruthTable, literal_table, restrict_tt

ORACLE_CAP = 4


def _restricted_L(f: TruthTable, pi: Projection) -> int:
    g = restrict_tt(f, pi)
    return 0 if g.is_constant() else L_exact(g)


def _as_table(f, n: int) -> TruthTable:
    if isinstance(f, TruthTable):
        return f
    return tt_from_formula(f, n)


def expected_L_exact(f, d: ExactProjDist) -> Fraction:
    """Sum of w(pi) * L(f restricted by pi) over the support.

    `f` may be a truth table or a formula on d.n variables; the target
    arity d.m must stay within the exact-size oracle cap.
    """
    if d.m > ORACLE_CAP:
        raise ValueError(f"target arity {d.m} above oracle cap {ORACLE_CAP}")
    tab = _as_table(f, d.n)
    total = Fraction(0)
    for w, pi in d.support:
        total += w * _restricted_L(tab, pi)
    return total


def prob_single_literal(f, d: ExactProjDist) -> Fraction:
    """Exact probability that f restricted by a support point is a literal."""
    if d.m > ORACLE_CAP:
        raise ValueError(f"target arity {d.m} above oracle cap {ORACLE_CAP}")
    tab = _as_table(f, d.n)
    total = Fraction(0)
    for w, pi in d.support:
        if _restricted_L(tab, pi) == 1:
            total += w
    return total


@dataclass(frozen=True)
class LiteralCheck:
    """Single-literal inequality Pr[L(f|p)=1] <= q*sqrt(L(f)), squared.

    `holds` compares prob^2 against q0*q1*L(f) in exact rationals (q is
    the geometric mean of the tightest fixing pair).
    """

    prob: Fraction
    q_sq: Fraction
    size: int

    @property
    def holds(self) -> bool:
        return self.prob * self.prob <= self.q_sq * self.size

    @property
    def bound(self) -> float:
        return math.sqrt(float(self.q_sq * self.size))


def single_literal_check(f, d: ExactProjDist) -> LiteralCheck:
    q0, q1 = tightest_fixing(d)
    tab = _as_table(f, d.n)
    L = 0 if tab.is_constant() else L_exact(tab)
    return LiteralCheck(prob_single_literal(tab, d), q0 * q1, L)


@dataclass(frozen=True)
class CondCheck:
    """Conditional variant: given f1|p equal to a fixed literal, the chance
    that f2 collapses to size one under the substituted projection.

    lhs is None when the conditioning event has probability zero, in which
    case holds is None too (undefined, not vacuously true).
    """

    lhs: Optional[Fraction]
    q_sq: Fraction
    size2: int

    @property
    def holds(self) -> Optional[bool]:
        if self.lhs is None:
            return None
        return self.lhs * self.lhs <= self.q_sq * self.size2

    @property
    def bound(self) -> float:
        return math.sqrt(float(self.q_sq * self.size2))


def conditional_shrink_check(
    f1, f2, d: ExactProjDist, j: int, sigma: int, tau: int
) -> CondCheck:
    """Check Pr[L(f2 | p with y_j<-sigma) = 1 | f1|p = y_j^tau] against
    q*sqrt(L(f2)), squared-exact, with q from the tightest fixing pair.
    """
    if d.m > ORACLE_CAP:
        raise ValueError(f"target arity {d.m} above oracle cap {ORACLE_CAP}")
    q0, q1 = tightest_fixing(d)
    t1 = _as_table(f1, d.n)
    t2 = _as_table(f2, d.n)
    size2 = 0 if t2.is_constant() else L_exact(t2)
    target = literal_table(j, d.m, negated=(tau == 0))
    den = Fraction(0)
    num = Fraction(0)
    for w, pi in d.support:
        if restrict_tt(t1, pi) != target:
            continue
        den += w
        if _restricted_L(t2, pi.substitute(j, sigma)) == 1:
            num += w
    if den == 0:
        return CondCheck(None, q0 * q1, size2)
    return CondCheck(num / den, q0 * q1, size2)


def _internal_gates(phi: Formula):
    """Yield (gate, depth, left, right) for every binary gate, root depth 0."""
    stack = [(phi, 0)]
    while stack:
        node, dep = stack.pop()
        kind = type(node).__name__
        if kind in ("And", "Or"):
            yield node, dep, node.left, node.right
            stack.append((node.left, dep + 1))
            stack.append((node.right, dep + 1))


def _literal_of(table: TruthTable) -> Optional[tuple[int, int]]:
    """Identify a table that is exactly y_j or its negation -> (j, sigma)."""
    for j in range(1, table.n + 1):
        if table == literal_table(j, table.n, negated=False):
            return j, 1
        if table == literal_table(j, table.n, negated=True):
            return j, 0
    return None


def reduction_bound_check(phi: Formula, pi: Projection):
    """Gate-by-gate upper bound on the restricted size of a formula.

    For each binary gate whose left child restricts to a literal y_j^sigma
    and whose right child collapses to size one after substituting that
    literal's forcing bit (sigma for OR, its complement for AND), charge
    depth+2; add one if the whole restriction is a single literal.  Returns
    (lhs, rhs, holds) with lhs the true restricted size.
    """
    if pi.m > ORACLE_CAP:
        raise ValueError(f"target arity {pi.m} above oracle cap {ORACLE_CAP}")
    n = pi.n
    whole = tt_from_formula(phi, n)
    lhs = _restricted_L(whole, pi)
    rhs = 1 if lhs == 1 else 0
    for node, dep, left, right in _internal_gates(phi):
        la = _literal_of(restrict_tt(tt_from_formula(left, n), pi))
        if la is None:
            continue
        j, sigma = la
        sub = sigma if type(node).__name__ == "Or" else 1 - sigma
        if _restricted_L(tt_from_formula(right, n), pi.substitute(j, sub)) == 1:
            rhs += dep + 2
    return lhs, rhs, lhs <= rhs


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: Optional[float]  # None when trials == 1
    trials: int
    flagged: int  # samples scored by the simplification upper bound
    exact_mean: Fraction  # per-sample values are integers, so this is exact

    @property
    def flagged_fraction(self) -> float:
        return self.flagged / self.trials


def _sample_value(phi: Formula, pi: Projection) -> tuple[int, bool]:
    """Exact restricted size when few enough variables stay alive, else the
    simplified formula's leaf count (an upper bound); flag says which."""
    psi = apply_projection(phi, pi)
    alive = formula_vars(psi)
    if not alive:
        return formula_size(psi), False  # constant after simplification
    if len(alive) > ORACLE_CAP:
        return formula_size(psi), True
    k = len(alive)
    bits = 0
    for a in range(1 << k):
        x = 0
        for t in range(k):
            if (a >> t) & 1:
                x |= 1 << (alive[t] - 1)
        bits |= eval_formula(psi, x) << a
    tab = TruthTable(k, bits)
    return (0 if tab.is_constant() else L_exact(tab)), False


def expected_L_mc(phi: Formula, d, trials: int, seed) -> MCEstimate:
    """Seeded estimate of the expected restricted size.

    Per-trial generators derive from (seed, index), so results are
    bit-identical for a fixed (seed, trials) no matter how the loop is
    scheduled.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    values = []
    flagged = 0
    for i in range(trials):
        pi = d.sample(seed, i)
        v, fl = _sample_value(phi, pi)
        values.append(v)
        flagged += fl
    total = sum(values)
    mean = Fraction(total, trials)
    if trials == 1:
        return MCEstimate(float(mean), None, 1, flagged, mean)
    var = sum((Fraction(v) - mean) ** 2 for v in values) / (trials * (trials - 1))
    return MCEstimate(float(mean), math.sqrt(float(var)), trials, flagged, mean)


# ---------------------------------------------------------------------------
# shrinkage-curve experiments


def sqrt_or_float(s: int):
    r = math.isqrt(s)
    return Fraction(r) if r * r == s else math.sqrt(s)


def fixing_bound(q, d: int, s: int):
    """q^2 d^2 s + q sqrt(s); exact when s is a perfect square."""
    return q * q * d * d * s + q * sqrt_or_float(s)


def hiding_bound(m: int, q, d: int, s: int):
    """m^4 q^2 d^2 s + m^2 q sqrt(s)."""
    return m**4 * q * q * d * d * s + m**2 * q * sqrt_or_float(s)


CSV_HEADER = "n,s,d,param,q_num,q_den,EL,bound,ratio,mode,seed,trials"


@dataclass(frozen=True)
class ShrinkRow:
    n: int
    s: int
    d: int
    param: Fraction | int
    q: Fraction
    EL: Fraction | float
    bound: Fraction | float
    ratio: Fraction | float
    dfree_bound: Fraction | float  # q^2 s + q sqrt(s) variant, not asserted
    dfree_ratio: Fraction | float
    mode: str
    seed: object = None
    trials: Optional[int] = None
    stderr: Optional[float] = None
    flagged: int = 0


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def curve_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    str(r.s),
                    str(r.d),
                    _fmt(r.param),
                    str(r.q.numerator),
                    str(r.q.denominator),
                    _fmt(r.EL),
                    _fmt(r.bound),
                    _fmt(r.ratio),
                    r.mode,
                    "" if r.seed is None else str(r.seed),
                    "" if r.trials is None else str(r.trials),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _ratio(el, bound):
    if isinstance(el, Fraction) and isinstance(bound, Fraction):
        return el / bound
    return float(el) / float(bound)


def parity_curve_row(
    t: int, family: str, param, mode: str = "auto", seed=None, trials: int = 10000
) -> ShrinkRow:
    """One experiment row: parity formula of 2^t variables under either the
    keep-alive restriction family (param = p) or the m-survivors hiding
    family (param = m).  Exact expectation when the restricted arity fits
    the oracle cap, Monte Carlo otherwise.
    """
    phi = parity_formula(t)
    n = 1 << t
    s = formula_size(phi)
    dep = formula_depth(phi)
    if family == "restriction":
        p = Fraction(param)
        dist = p_random_restriction(n, p)
        q = 2 * p / (1 - p)
        bound = fixing_bound(q, dep, s)
        dfree = q * q * s + q * sqrt_or_float(s)
    elif family == "m_alive":
        m = int(param)
        dist = random_m_alive(n, m)
        q = Fraction(1, n - m + 1)
        bound = hiding_bound(m, q, dep, s)
        dfree = m**4 * q * q * s + m**2 * q * sqrt_or_float(s)
    else:
        raise ValueError(f"unknown family {family!r}")
    if mode == "auto":
        mode = "exact" if dist.m <= ORACLE_CAP else "mc"
    if mode == "exact":
        el = expected_L_exact(phi, dist)
        return ShrinkRow(
            n, s, dep, Fraction(param) if family == "restriction" else int(param),
            q, el, bound, _ratio(el, bound), dfree, _ratio(el, dfree), "exact",
        )
    if seed is None:
        raise ValueError("seed is mandatory in mc mode")
    est = expected_L_mc(phi, dist, trials, seed)
    el = est.mean
    return ShrinkRow(
        n, s, dep, Fraction(param) if family == "restriction" else int(param),
        q, el, bound, _ratio(el, bound), dfree, _ratio(el, dfree), "mc",
        seed, trials, est.stderr, est.flagged,
    )


def shrinkage_curve(
    t_grid, family: str, params, mode: str = "auto", seed=None, trials: int = 10000
) -> str:
    """CSV over the (t, param) grid; empty grid gives just the header."""
    rows = [
        parity_curve_row(t, family, param, mode=mode, seed=seed, trials=trials)
        for t in t_grid
        for param in params
    ]
    return curve_csv(rows)
