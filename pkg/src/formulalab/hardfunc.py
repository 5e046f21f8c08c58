"""Surjectivity over a small odd alphabet, its shallow formulas, and the
table-plus-blocks function built on top of it.

Symbols are 0-based internally: the alphabet of size 2s+1 is {0..2s},
each symbol encoded as its own value in c = ceil(log2(2s+1)) bits,
low bit first.  Binary codewords with value >= 2s+1 decode to nothing;
the reference table maps any word containing one to 0 (the shallow
formulas are only required to agree on validly encoded inputs).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .formula import AndN, Leaf, OrN, UFormula
from .measures import PairDistribution, pair_distribution
from .projdist import ExactProjDist, m_fold
from .sizetable import L_exact
from .truthtable import TruthTable, compose, negate_inputs, restrict_tt

SURJ_TABLE_CAP = 2  # largest s whose reference table we materialize


@dataclass(frozen=True)
class SurjInstance:
    """Shape of one surjectivity instance: alphabet 2s+1, word length 3s+1."""

    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("need s >= 1")

    @property
    def sigma(self) -> int:
        return 2 * self.s + 1

    @property
    def r(self) -> int:
        return 3 * self.s + 1

    @property
    def c(self) -> int:
        return (self.sigma - 1).bit_length()

    @property
    def n(self) -> int:
        return self.r * self.c

    def encode(self, word) -> int:
        """Pack a word in Sigma^r into a table index, low position first."""
        if len(word) != self.r:
            raise ValueError("word length mismatch")
        x = 0
        for j, sym in enumerate(word):
            if not 0 <= sym < self.sigma:
                raise ValueError(f"symbol {sym} outside alphabet")
            x |= sym << (j * self.c)
        return x

    def decode(self, x: int) -> tuple:
        """Per-position symbols; invalid codewords decode to None."""
        mask = (1 << self.c) - 1
        out = []
        for j in range(self.r):
            code = (x >> (j * self.c)) & mask
            out.append(code if code < self.sigma else None)
        return tuple(out)

    def all_words(self):
        return itertools.product(range(self.sigma), repeat=self.r)


_surj_cache: dict = {}


def surj_tt(s: int) -> TruthTable:
    """Reference table: 1 iff every symbol appears among the r positions
    and every codeword is valid."""
    if not 1 <= s <= SURJ_TABLE_CAP:
        raise ValueError(f"reference table only materialized for s <= {SURJ_TABLE_CAP}")
    if s in _surj_cache:
        return _surj_cache[s]
    inst = SurjInstance(s)
    idx = np.arange(1 << inst.n, dtype=np.uint32)
    mask = (1 << inst.c) - 1
    valid = np.ones(idx.shape, dtype=bool)
    seen = np.zeros(idx.shape, dtype=np.uint32)
    for j in range(inst.r):
        sym = (idx >> np.uint32(j * inst.c)) & mask
        valid &= sym < inst.sigma
        seen |= np.left_shift(np.uint32(1), sym)
    full = np.uint32((1 << inst.sigma) - 1)
    vals = valid & (seen & full == full)
    packed = np.packbits(vals, bitorder="little").tobytes()
    table = TruthTable(inst.n, int.from_bytes(packed, "little"))
    _surj_cache[s] = table
    return table


def _eq_test(inst: SurjInstance, base: int, j: int, gamma: int, neg: bool) -> UFormula:
    """(sigma_j = gamma) as a c-literal AND, or its negation as a c-literal
    OR; `base` is the variable offset of the whole word."""
    leaves = []
    for t in range(inst.c):
        var = base + (j - 1) * inst.c + t + 1
        bit = (gamma >> t) & 1
        want = bool(bit) if not neg else not bit
        leaves.append(Leaf(var, negated=not want))
    return OrN(tuple(leaves)) if neg else AndN(tuple(leaves))


def surj_uformula(s: int, base: int = 0) -> UFormula:
    """Depth-3 unbounded fan-in formula: AND over symbols of an OR over
    positions of the c-literal equality test; exactly sigma*r*c leaves.
    Agrees with the reference table on every validly encoded input.
    """
    inst = SurjInstance(s)
    return AndN(
        tuple(
            OrN(tuple(_eq_test(inst, base, j, gamma, neg=False) for j in range(1, inst.r + 1)))
            for gamma in range(inst.sigma)
        )
    )


# ---------------------------------------------------------------------------
# the pair distribution certifying the quadratic lower bound

SURJ_PAIRS_CAP = 2  # full enumeration blows past the support cap at s = 3


def surj_pair_distribution(s: int) -> PairDistribution:
    """b uniform over words where s+1 symbols appear twice, s-1 once and one
    not at all; the differing coordinate is uniform over the 2s+2 doubled
    positions, and a replaces it with the absent symbol.
    """
    if not 1 <= s <= SURJ_PAIRS_CAP:
        raise ValueError(f"enumeration capped at s <= {SURJ_PAIRS_CAP}")
    inst = SurjInstance(s)
    sigma = inst.sigma
    b_words = set()
    for absent in range(sigma):
        rest = [x for x in range(sigma) if x != absent]
        for doubled in itertools.combinations(rest, s + 1):
            singles = [x for x in rest if x not in doubled]
            multiset = sorted(list(doubled) * 2 + singles)
            b_words.update(
                (absent, word) for word in set(itertools.permutations(multiset))
            )
    per_b = Fraction(1, len(b_words) * (2 * s + 2))
    items = []
    for absent, b in b_words:
        counts = [0] * sigma
        for sym in b:
            counts[sym] += 1
        for i, sym in enumerate(b):
            if counts[sym] == 2:
                a = b[:i] + (absent,) + b[i + 1 :]
                items.append((a, b, per_b))
    return pair_distribution(sigma, inst.r, items)


# ---------------------------------------------------------------------------
# table-plus-blocks outer function

# Variable layout, 1-based and low-to-high:
#   vars 1 .. 2^k                      bits of the outer table (bit y <-> var y+1)
#   block i in 1..k                    vars 2^k+(i-1)*n_s+1 .. 2^k+i*n_s


def andreev_arity(k: int, s: int) -> int:
    return (1 << k) + k * SurjInstance(s).n


def _block_base(k: int, s: int, i: int) -> int:
    return (1 << k) + (i - 1) * SurjInstance(s).n


def andreev_F(k: int, s: int = 1):
    """Depth-4 formula for "look up the table at the blocks' surjectivity
    pattern", plus the reference evaluator.

    The branch for table row y requires block i to be surjective when
    y_i = 1 and non-surjective when y_i = 0.  Non-surjectivity is an OR
    over missing symbols, which would sit at the wrong polarity under the
    branch AND; distributing it into the top OR (one branch per choice of
    missing symbol for every zero coordinate) restores depth 4 at the cost
    of (1+sigma)^k branches.  The evaluator takes a packed input index and
    uses the reference table, so it is only meaningful on valid encodings.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if k > 12:
        raise ValueError("formula object capped at k <= 12")
    inst = SurjInstance(s)
    sigma = inst.sigma
    branches = []
    for y in range(1 << k):
        zeros = [i for i in range(1, k + 1) if not (y >> (i - 1)) & 1]
        ones = [i for i in range(1, k + 1) if (y >> (i - 1)) & 1]
        for missing in itertools.product(range(sigma), repeat=len(zeros)):
            parts: list = [Leaf(y + 1)]
            for i, gamma in zip(zeros, missing):
                base = _block_base(k, s, i)
                # the whole word avoids gamma: r negated equality tests
                parts.extend(
                    _eq_test(inst, base, j, gamma, neg=True)
                    for j in range(1, inst.r + 1)
                )
            for i in ones:
                base = _block_base(k, s, i)
                parts.extend(
                    OrN(
                        tuple(
                            _eq_test(inst, base, j, gamma, neg=False)
                            for j in range(1, inst.r + 1)
                        )
                    )
                    for gamma in range(sigma)
                )
            branches.append(AndN(tuple(parts)))
    formula = OrN(tuple(branches))

    table = surj_tt(s) if s <= SURJ_TABLE_CAP else None

    def evaluator(x: int) -> int:
        if table is None:
            raise ValueError("evaluator needs the reference table (s too large)")
        f_bits = x & ((1 << (1 << k)) - 1)
        y = 0
        for i in range(1, k + 1):
            block = (x >> _block_base(k, s, i)) & ((1 << inst.n) - 1)
            y |= table.value(block) << (i - 1)
        return (f_bits >> y) & 1

    return formula, evaluator


def andreev_size_depth4(k: int, s: int) -> int:
    """Leaf count of the distributed depth-4 form, in closed form."""
    inst = SurjInstance(s)
    sigma, rc = inst.sigma, inst.n
    return (1 + sigma) ** k + 2 * sigma * rc * k * (1 + sigma) ** (k - 1)


def andreev_textbook(k: int, s: int = 1) -> UFormula:
    """The direct form: one branch per table row, negated surjectivity kept
    as its depth-3 dual.  Smaller (2^k (1 + k*sigma*r*c) leaves) but the
    dual's top OR under the branch AND makes the tree depth 5 whenever
    some row has a zero coordinate.
    """
    inst = SurjInstance(s)
    sigma = inst.sigma
    branches = []
    for y in range(1 << k):
        parts: list = [Leaf(y + 1)]
        for i in range(1, k + 1):
            base = _block_base(k, s, i)
            if (y >> (i - 1)) & 1:
                parts.extend(
                    OrN(
                        tuple(
                            _eq_test(inst, base, j, gamma, neg=False)
                            for j in range(1, inst.r + 1)
                        )
                    )
                    for gamma in range(sigma)
                )
            else:
                parts.append(
                    OrN(
                        tuple(
                            AndN(
                                tuple(
                                    _eq_test(inst, base, j, gamma, neg=True)
                                    for j in range(1, inst.r + 1)
                                )
                            )
                            for gamma in range(sigma)
                        )
                    )
                )
        branches.append(AndN(tuple(parts)))
    return OrN(tuple(branches))


def andreev_textbook_size(k: int, s: int) -> int:
    inst = SurjInstance(s)
    return (1 << k) * (1 + k * inst.sigma * inst.n)


def params_from_n(n: int) -> int:
    """Largest k with 2^k * (k+1) <= n."""
    k = 1
    if (1 << 1) * 2 > n:
        raise ValueError(f"n = {n} too small for k >= 1")
    while (1 << (k + 1)) * (k + 2) <= n:
        k += 1
    return k


def surj_params_from_n(n: int) -> int:
    """Largest s with (3s+1) * ceil(log2(2s+1)) <= n."""
    if SurjInstance(1).n > n:
        raise ValueError(f"n = {n} too small for s >= 1")
    s = 1
    while SurjInstance(s + 1).n <= n:
        s += 1
    return s


def andreev_ratio_rows(s_values=(1, 2, 3)):
    """Size of the direct form against n^3 / log2(n)^3, per s.

    k is matched to the surjectivity arity (k = ceil(log2 n_surj)) so the
    table bits stay comparable to one block.  Rows: (s, k, n, size, ratio).
    """
    rows = []
    for s in s_values:
        n_s = SurjInstance(s).n
        k = max(1, math.ceil(math.log2(n_s)))
        n = andreev_arity(k, s)
        size = andreev_textbook_size(k, s)
        ratio = size / (n**3 / math.log2(n) ** 3)
        rows.append((s, k, n, size, ratio))
    return rows


# ---------------------------------------------------------------------------
# the composition identity under per-block projections


@dataclass(frozen=True)
class CompositionReport:
    ok: bool
    points: int
    L_inner: int  # L of the outer function; every restriction matches it
    masks: tuple  # negation mask per support point, in support order
    witness: object = None  # first offending projection

    def __bool__(self) -> bool:
        return self.ok


def composition_identity_check(f: TruthTable, g: TruthTable, d) -> CompositionReport:
    """Restricting blockwise-composed f by independent per-block projections
    that send g to a single literal must reproduce f up to input negations,
    with the exact minimum size unchanged.

    d is a distribution over projections from g's inputs to one variable
    (adversary-derived, or any family with g|_pi always a literal); the
    check runs over the full support of f.n independent copies.
    """
    m = f.n
    fold = m_fold(d, m)
    if not isinstance(fold, ExactProjDist):
        raise ValueError("joint support too large for an exhaustive check")
    comp = compose(f, g)
    Lf = 0 if f.is_constant() else L_exact(f)
    masks = []
    for _w, pi in fold.support:
        h = restrict_tt(comp, pi)
        mask = next(
            (msk for msk in range(1 << m) if h == negate_inputs(f, msk)), None
        )
        if mask is None:
            return CompositionReport(False, len(fold.support), Lf, tuple(masks), pi)
        if (0 if h.is_constant() else L_exact(h)) != Lf:
            return CompositionReport(False, len(fold.support), Lf, tuple(masks), pi)
        masks.append(mask)
    return CompositionReport(True, len(fold.support), Lf, tuple(masks))
