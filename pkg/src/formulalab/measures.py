"""Lower-bound measures for formula size.

Cut-based edge-counting bounds (max |E(A,B)|^2/(|A||B|) and the min-degree
variant), adversary-style certificates evaluated on explicit pair
distributions, a weighted scheme evaluator, and a small exact-rational
entropy toolkit.  All probabilities and certificate values are Fractions;
only Shannon entropies are floats.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import log2

import numpy as np

from .truthtable import TruthTable, table_mask

Word = tuple  # of symbols in range(sigma)

_K_CAP = 4


def _hamming(a: Word, b: Word) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def _word_index(w: Word) -> int:
    # coordinate j is bit j-1 of the table index
    out = 0
    for j, bit in enumerate(w):
        out |= bit << j
    return out


def index_word(x: int, n: int) -> Word:
    return tuple((x >> j) & 1 for j in range(n))


@dataclass(frozen=True)
class PairDistribution:
    """Weighted pairs (a, b) of words; a is the 1-side, b the 0-side."""

    sigma: int
    r: int
    support: tuple

    def __post_init__(self):
        if self.sigma < 2:
            raise ValueError("alphabet size must be at least 2")
        if not self.support:
            raise ValueError("empty support")
        seen = set()
        total = Fraction(0)
        for a, b, w in self.support:
            if len(a) != self.r or len(b) != self.r:
                raise ValueError("word length mismatch")
            for s in (*a, *b):
                if not 0 <= s < self.sigma:
                    raise ValueError(f"symbol {s} outside alphabet")
            if w <= 0:
                raise ValueError("weights must be positive")
            if (a, b) in seen:
                raise ValueError(f"duplicate pair {(a, b)}")
            seen.add((a, b))
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    @cached_property
    def khrapchenko(self) -> bool:
        """True when every support pair differs in exactly one coordinate."""
        return all(_hamming(a, b) == 1 for a, b, _ in self.support)

    def diff_coord(self, a: Word, b: Word) -> int:
        coords = [j + 1 for j in range(self.r) if a[j] != b[j]]
        if len(coords) != 1:
            raise ValueError(f"pair {(a, b)} not at distance 1")
        return coords[0]

    def check_consistent(self, f: TruthTable):
        if self.sigma != 2 or self.r != f.n:
            raise ValueError("distribution shape does not match function")
        for a, b, _ in self.support:
            if f.value(_word_index(a)) != 1 or f.value(_word_index(b)) != 0:
                raise ValueError(f"pair {(a, b)} inconsistent with function")


def pair_distribution(sigma: int, r: int, items) -> PairDistribution:
    """Normalize (a, b, weight) items: merge duplicates, sort, exact weights."""
    acc: dict = {}
    for a, b, w in items:
        key = (tuple(a), tuple(b))
        acc[key] = acc.get(key, Fraction(0)) + Fraction(w)
    support = tuple((a, b, w) for (a, b), w in sorted(acc.items()))
    return PairDistribution(sigma, r, support)


@dataclass(frozen=True)
class Relation:
    """Unweighted set of (1-input word, 0-input word) pairs, binary words."""

    n: int
    pairs: tuple

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("empty relation")
        if len(set(self.pairs)) != len(self.pairs):
            raise ValueError("duplicate pairs")
        for a, b in self.pairs:
            if len(a) != self.n or len(b) != self.n:
                raise ValueError("word length mismatch")


def relation(n: int, pairs) -> Relation:
    return Relation(n, tuple(sorted(set((tuple(a), tuple(b)) for a, b in pairs))))


def relation_from_sets(f: TruthTable, A, B) -> Relation:
    """The unit-distance relation on A x B (indices into f's table)."""
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    for a in A:
        if f.value(a) != 1:
            raise ValueError(f"index {a} not a 1-input")
    for b in B:
        if f.value(b) != 0:
            raise ValueError(f"index {b} not a 0-input")
    pairs = [(index_word(a, f.n), index_word(b, f.n))
             for a in A for b in B if bin(a ^ b).count("1") == 1]
    if not pairs:
        raise ValueError("no unit-distance pairs between A and B")
    return relation(f.n, pairs)


# ---------------------------------------------------------------- cut bounds

def _ones_zeros(f: TruthTable):
    return f.ones(), f.zeros()


def khrapchenko_K(f: TruthTable) -> Fraction:
    """Exact max over cuts (A,B) of |E(A,B)|^2 / (|A|*|B|); 0 for constants.

    E is the unit-distance bipartite graph between 1-inputs and 0-inputs.
    Exhaustive over all subset pairs, so capped at 4 variables.
    """
    if f.n > _K_CAP:
        raise ValueError(f"arity {f.n} above exhaustive cap {_K_CAP}")
    ones, zeros = _ones_zeros(f)
    if not ones or not zeros:
        return Fraction(0)
    adj = []
    for a in ones:
        mask = 0
        for k, z in enumerate(zeros):
            if bin(a ^ z).count("1") == 1:
                mask |= 1 << k
        adj.append(mask)
    best = Fraction(0)
    # for fixed B, the optimal A is a prefix of 1-inputs sorted by degree
    for bmask in range(1, 1 << len(zeros)):
        size_b = bin(bmask).count("1")
        degs = sorted((bin(m & bmask).count("1") for m in adj), reverse=True)
        acc = 0
        for k, dg in enumerate(degs, start=1):
            if dg == 0:
                break
            acc += dg
            val = Fraction(acc * acc, k * size_b)
            if val > best:
                best = val
    return best


def _unit_neighbour_masks(n: int):
    return [sum(1 << (v ^ (1 << j)) for j in range(n)) for v in range(1 << n)]


def kmin_witness(f: TruthTable):
    """(value, A indices, B indices) for the max min-degree product cut.

    For each degree target (d1, d2) the union of all cuts whose min degrees
    meet the target is itself such a cut, so iterated peeling of low-degree
    vertices finds the unique maximal one.  Ties between maximizing targets
    go to the lexicographically smallest (d1, d2).
    """
    if f.n > _K_CAP:
        raise ValueError(f"arity {f.n} above exhaustive cap {_K_CAP}")
    full = table_mask(f.n)
    nbr = _unit_neighbour_masks(f.n)
    best, best_sets = 0, ((), ())
    for d1 in range(1, f.n + 1):
        for d2 in range(1, f.n + 1):
            if d1 * d2 <= best:
                continue
            A, B = f.bits, ~f.bits & full
            while A and B:
                newA = newB = 0
                v = 0
                a, b = A, B
                while a or b:
                    if a & 1 and bin(nbr[v] & B).count("1") >= d1:
                        newA |= 1 << v
                    if b & 1 and bin(nbr[v] & A).count("1") >= d2:
                        newB |= 1 << v
                    a >>= 1
                    b >>= 1
                    v += 1
                if (newA, newB) == (A, B):
                    break
                A, B = newA, newB
            if A and B:
                best = d1 * d2
                best_sets = (tuple(v for v in range(1 << f.n) if A >> v & 1),
                             tuple(v for v in range(1 << f.n) if B >> v & 1))
    return best, best_sets[0], best_sets[1]


def khrapchenko_Kmin(f: TruthTable) -> int:
    """Exact max over cuts of (min degree into B) * (min degree into A)."""
    return kmin_witness(f)[0]


def km_binary(f: TruthTable) -> int:
    """Binary-alphabet min-entropy cut bound; coincides with khrapchenko_Kmin."""
    return khrapchenko_Kmin(f)


def kmin_all(n: int):
    """khrapchenko_Kmin for every n-variable function, as a uint8 array.

    Vectorized peeling over all 2^(2^n) functions at once; used by the
    exhaustive L >= Kmin sweep at n = 4.
    """
    if n > _K_CAP:
        raise ValueError(f"arity {n} above exhaustive cap {_K_CAP}")
    N = 1 << n
    M = 1 << N
    full = np.uint32(table_mask(n))
    tables = np.arange(M, dtype=np.uint32)
    v = np.arange(1 << N, dtype=np.uint32)
    v = v - ((v >> 1) & 0x55555555)
    v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
    pop = ((((v + (v >> 4)) & 0x0F0F0F0F) * 0x01010101) >> 24).astype(np.uint8)
    nbr = np.array(_unit_neighbour_masks(n), np.uint32)
    bits = np.uint32(1) << np.arange(N, dtype=np.uint32)
    best = np.zeros(M, np.uint8)
    for d1 in range(1, n + 1):
        for d2 in range(1, n + 1):
            A = tables.copy()
            B = (~tables) & full
            while True:
                newA = np.zeros(M, np.uint32)
                newB = np.zeros(M, np.uint32)
                for v in range(N):
                    degB = pop[nbr[v] & B]
                    degA = pop[nbr[v] & A]
                    newA |= np.where((A & bits[v] != 0) & (degB >= d1),
                                     bits[v], np.uint32(0))
                    newB |= np.where((B & bits[v] != 0) & (degA >= d2),
                                     bits[v], np.uint32(0))
                if np.array_equal(newA, A) and np.array_equal(newB, B):
                    break
                A, B = newA, newB
            ok = (A != 0) & (B != 0)
            np.maximum(best, np.where(ok, np.uint8(d1 * d2), np.uint8(0)),
                       out=best)
    return best


# ------------------------------------------------------------- certificates

def khrapchenko_cert_value(d: PairDistribution) -> Fraction:
    """Exact 2^{Hm(i|a)} * 2^{Hm(i|b)} for a unit-distance pair distribution.

    i is the coordinate where the pair differs; each factor is the reciprocal
    of the largest conditional probability of i given one side.
    """
    pa: dict = {}
    pb: dict = {}
    pia: dict = {}
    pib: dict = {}
    for a, b, w in d.support:
        i = d.diff_coord(a, b)
        pa[a] = pa.get(a, Fraction(0)) + w
        pb[b] = pb.get(b, Fraction(0)) + w
        pia[a, i] = pia.get((a, i), Fraction(0)) + w
        pib[b, i] = pib.get((b, i), Fraction(0)) + w
    qa = max(w / pa[a] for (a, _), w in pia.items())
    qb = max(w / pb[b] for (b, _), w in pib.items())
    return (1 / qa) * (1 / qb)


def am_cert_value(d: PairDistribution) -> Fraction:
    """Soft-adversary certificate: product over the two sides of
    1 / max Pr[a_i != b_i | side], exact."""
    if d.sigma != 2:
        raise ValueError("soft-adversary certificate needs a binary alphabet")
    pa: dict = {}
    pb: dict = {}
    flip_a: dict = {}
    flip_b: dict = {}
    for a, b, w in d.support:
        pa[a] = pa.get(a, Fraction(0)) + w
        pb[b] = pb.get(b, Fraction(0)) + w
        for j in range(d.r):
            if a[j] != b[j]:
                flip_a[a, j] = flip_a.get((a, j), Fraction(0)) + w
                flip_b[b, j] = flip_b.get((b, j), Fraction(0)) + w
    qa = max(w / pa[a] for (a, _), w in flip_a.items())
    qb = max(w / pb[b] for (b, _), w in flip_b.items())
    return (1 / qa) * (1 / qb)


def am_from_uniform_relation(R: Relation) -> PairDistribution:
    w = Fraction(1, len(R.pairs))
    return pair_distribution(2, R.n, ((a, b, w) for a, b in R.pairs))


def encode_word(w: Word, sigma: int) -> Word:
    """Binary encoding: symbol value in ceil(log2 sigma) bits, low bit first."""
    c = max(1, (sigma - 1).bit_length())
    return tuple((s >> j) & 1 for s in w for j in range(c))


def am_from_khrapchenko(d: PairDistribution) -> PairDistribution:
    """The same weights over binary encodings of the words."""
    if not d.khrapchenko:
        raise ValueError("distribution is not unit-distance")
    if d.sigma == 2:
        return d
    c = max(1, (d.sigma - 1).bit_length())
    return pair_distribution(
        2, d.r * c,
        ((encode_word(a, d.sigma), encode_word(b, d.sigma), w)
         for a, b, w in d.support))


def amb_relation_value(f: TruthTable, R: Relation) -> Fraction:
    """min-degree product over max per-coordinate degree product for R."""
    if R.n != f.n:
        raise ValueError("relation arity mismatch")
    r_a: dict = {}
    r_b: dict = {}
    for a, b in R.pairs:
        if f.value(_word_index(a)) != 1 or f.value(_word_index(b)) != 0:
            raise ValueError(f"pair {(a, b)} inconsistent with function")
        r_a.setdefault(a, []).append(b)
        r_b.setdefault(b, []).append(a)
    min_a = min(len(v) for v in r_a.values())
    min_b = min(len(v) for v in r_b.values())
    max_ai = max(sum(1 for b in bs if a[i] != b[i])
                 for a, bs in r_a.items() for i in range(f.n))
    max_bi = max(sum(1 for a in as_ if a[i] != b[i])
                 for b, as_ in r_b.items() for i in range(f.n))
    return Fraction(min_a * min_b, max_ai * max_bi)


def amb_exact_max(f: TruthTable, max_pairs: int = 12):
    """(value, best Relation) by enumerating every nonempty subrelation.

    Exponential in the number of (1-input, 0-input) pairs; refused above
    max_pairs of them.
    """
    ones, zeros = _ones_zeros(f)
    all_pairs = [(index_word(a, f.n), index_word(b, f.n))
                 for a in ones for b in zeros]
    if not all_pairs:
        raise ValueError("constant function has no pairs")
    if len(all_pairs) > max_pairs:
        raise ValueError(
            f"{len(all_pairs)} pairs exceed exhaustive cap {max_pairs}")
    best, best_R = Fraction(0), None
    for mask in range(1, 1 << len(all_pairs)):
        R = relation(f.n, (p for k, p in enumerate(all_pairs) if mask >> k & 1))
        val = amb_relation_value(f, R)
        if val > best:
            best, best_R = val, R
    return best, best_R


# --------------------------------------------------------- weighted schemes

@dataclass(frozen=True)
class WeightScheme:
    """w on pairs plus directed w' on (word, other word, coordinate)."""

    w: dict
    wprime: dict


def scheme_violation(R: Relation, scheme: WeightScheme):
    """First (a, b, i) violating positivity or w'(a,b,i)w'(b,a,i) >= w(a,b)^2."""
    for a, b in R.pairs:
        w = scheme.w.get((a, b))
        if w is None or w <= 0:
            return (a, b, None)
        for i in range(1, R.n + 1):
            if a[i - 1] == b[i - 1]:
                continue
            u = scheme.wprime.get((a, b, i))
            v = scheme.wprime.get((b, a, i))
            if u is None or v is None or u <= 0 or v <= 0 or u * v < w * w:
                return (a, b, i)
    return None


def wa2_scheme_value(f: TruthTable, R: Relation, scheme: WeightScheme) -> Fraction:
    """Exact weighted-adversary value of a valid scheme on R."""
    bad = scheme_violation(R, scheme)
    if bad is not None:
        raise ValueError(f"invalid weighting scheme at {bad}")
    r_a: dict = {}
    r_b: dict = {}
    for a, b in R.pairs:
        if f.value(_word_index(a)) != 1 or f.value(_word_index(b)) != 0:
            raise ValueError(f"pair {(a, b)} inconsistent with function")
        r_a.setdefault(a, []).append(b)
        r_b.setdefault(b, []).append(a)

    fac_a = fac_b = None
    for a, bs in r_a.items():
        tot = sum(scheme.w[a, b] for b in bs)
        for i in range(1, R.n + 1):
            den = sum(scheme.wprime[a, b, i] for b in bs if a[i - 1] != b[i - 1])
            if den and (fac_a is None or tot / den < fac_a):
                fac_a = tot / den
    for b, as_ in r_b.items():
        tot = sum(scheme.w[a, b] for a in as_)
        for i in range(1, R.n + 1):
            den = sum(scheme.wprime[b, a, i] for a in as_ if a[i - 1] != b[i - 1])
            if den and (fac_b is None or tot / den < fac_b):
                fac_b = tot / den
    return fac_a * fac_b


def wa2_from_am(d: PairDistribution):
    """Scheme with w = pair probabilities and w' = w in both orientations."""
    if d.sigma != 2:
        raise ValueError("needs a binary alphabet")
    R = relation(d.r, ((a, b) for a, b, _ in d.support))
    w = {(a, b): wt for a, b, wt in d.support}
    wprime: dict = {}
    for a, b, wt in d.support:
        for i in range(1, d.r + 1):
            if a[i - 1] != b[i - 1]:
                wprime[a, b, i] = wt
                wprime[b, a, i] = wt
    return R, WeightScheme(w, wprime)


# ------------------------------------------------------------ entropy tools

@dataclass(frozen=True)
class FiniteJointDist:
    """Finitely supported joint distribution over named coordinates."""

    coords: tuple
    support: tuple  # of (point tuple, Fraction)

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty distribution")
        total = Fraction(0)
        seen = set()
        for point, w in self.support:
            if len(point) != len(self.coords):
                raise ValueError("point arity mismatch")
            if w <= 0:
                raise ValueError("weights must be positive")
            if point in seen:
                raise ValueError(f"duplicate point {point}")
            seen.add(point)
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    def _axes(self, names):
        if isinstance(names, str):
            names = (names,)
        return tuple(self.coords.index(nm) for nm in names)

    def marginal(self, names) -> dict:
        axes = self._axes(names)
        out: dict = {}
        for point, w in self.support:
            key = tuple(point[k] for k in axes)
            out[key] = out.get(key, Fraction(0)) + w
        return out


def joint_dist(coords, items) -> FiniteJointDist:
    acc: dict = {}
    for point, w in items:
        point = tuple(point)
        acc[point] = acc.get(point, Fraction(0)) + Fraction(w)
    return FiniteJointDist(tuple(coords), tuple(sorted(acc.items())))


def H(dist: FiniteJointDist, names=None) -> float:
    """Shannon entropy (bits) of the marginal on names (all coords if None)."""
    marg = dist.marginal(names if names is not None else dist.coords)
    return -sum(float(w) * log2(float(w)) for w in marg.values())


def Hm_cond(dist: FiniteJointDist, target, given):
    """Conditional min-entropy of target given `given`.

    Returns (2^Hm as an exact Fraction, Hm as float bits); the first value is
    the reciprocal of the largest conditional probability.
    """
    t_axes = dist._axes(target)
    g_axes = dist._axes(given)
    pg = dist.marginal(given)
    joint: dict = {}
    for point, w in dist.support:
        key = (tuple(point[k] for k in t_axes), tuple(point[k] for k in g_axes))
        joint[key] = joint.get(key, Fraction(0)) + w
    maxp = max(w / pg[g] for (_, g), w in joint.items())
    pow2 = 1 / maxp
    return pow2, log2(float(pow2))


def I(dist: FiniteJointDist, X, Y) -> float:
    """Mutual information I(X;Y) in bits."""
    X = (X,) if isinstance(X, str) else tuple(X)
    Y = (Y,) if isinstance(Y, str) else tuple(Y)
    return H(dist, X) + H(dist, Y) - H(dist, X + Y)


def I_cond(dist: FiniteJointDist, X, Y, Z) -> float:
    """Conditional mutual information I(X;Y|Z) in bits."""
    X = (X,) if isinstance(X, str) else tuple(X)
    Y = (Y,) if isinstance(Y, str) else tuple(Y)
    Z = (Z,) if isinstance(Z, str) else tuple(Z)
    return H(dist, X + Z) + H(dist, Y + Z) - H(dist, X + Y + Z) - H(dist, Z)


def khrapchenko_joint(d: PairDistribution) -> FiniteJointDist:
    """Joint (a, b, i) distribution with i the differing coordinate."""
    return joint_dist(("a", "b", "i"),
                      (((a, b, d.diff_coord(a, b)), w) for a, b, w in d.support))


def shannon_khrapchenko_cert_value(d: PairDistribution) -> float:
    """Shannon-entropy analogue 2^{H(i|a)+H(i|b)}; exploratory, unasserted."""
    joint = khrapchenko_joint(d)

    def h_cond(target, given):
        pg = joint.marginal(given)
        pj = joint.marginal((target, given))
        return sum(float(w) * log2(float(pg[g,] / w)) for (_, g), w in pj.items())

    return 2.0 ** (h_cond("i", "a") + h_cond("i", "b"))


def info_inequality_check(protocol, d: PairDistribution):
    """Check I(x,y;leaf) >= I(x;leaf|y) + I(y;leaf|x) on a protocol run.

    The protocol object only needs run(a_index, b_index) -> leaf id; the
    distribution must be binary so words map to table indices.
    """
    if d.sigma != 2:
        raise ValueError("needs a binary alphabet")
    items = []
    for a, b, w in d.support:
        leaf = protocol.run(_word_index(a), _word_index(b))
        items.append(((a, b, leaf), w))
    joint = joint_dist(("x", "y", "l"), items)
    lhs = I(joint, ("x", "y"), "l")
    rhs = I_cond(joint, "x", "l", "y") + I_cond(joint, "y", "l", "x")
    return lhs, rhs, lhs >= rhs - 1e-9


# ------------------------------------------------------------------ samplers

def random_pair_distribution(f: TruthTable, rng: random.Random,
                             k: int = 6) -> PairDistribution:
    """Random rationally-weighted distribution on pairs of f (binary words)."""
    ones, zeros = _ones_zeros(f)
    if not ones or not zeros:
        raise ValueError("constant function has no pairs")
    items = []
    for _ in range(k):
        a = index_word(rng.choice(ones), f.n)
        b = index_word(rng.choice(zeros), f.n)
        items.append((a, b, Fraction(rng.randint(1, 8))))
    total = sum(w for _, _, w in items)
    return pair_distribution(2, f.n, ((a, b, w / total) for a, b, w in items))


def random_khrapchenko_distribution(f: TruthTable, rng: random.Random,
                                    k: int = 6) -> PairDistribution:
    """Like random_pair_distribution but restricted to unit-distance pairs."""
    ones, zeros = _ones_zeros(f)
    edges = [(a, b) for a in ones for b in zeros
             if bin(a ^ b).count("1") == 1]
    if not edges:
        raise ValueError("no unit-distance pairs")
    items = []
    for _ in range(k):
        a, b = rng.choice(edges)
        items.append((index_word(a, f.n), index_word(b, f.n),
                      Fraction(rng.randint(1, 8))))
    total = sum(w for _, _, w in items)
    return pair_distribution(2, f.n, ((a, b, w / total) for a, b, w in items))


def uniform_khrapchenko_distribution(f: TruthTable) -> PairDistribution:
    """Uniform over every unit-distance pair crossing the function's cut."""
    ones, zeros = _ones_zeros(f)
    edges = [(a, b) for a in ones for b in zeros
             if bin(a ^ b).count("1") == 1]
    if not edges:
        raise ValueError("no unit-distance pairs")
    w = Fraction(1, len(edges))
    return pair_distribution(2, f.n, ((index_word(a, f.n), index_word(b, f.n), w)
                                      for a, b in edges))


# ------------------------------------------------------------------ file I/O

def _word_str(w: Word) -> str:
    return "".join(str(s) for s in w)


def _parse_word(text: str, sigma: int, r: int) -> Word:
    w = tuple(int(ch) for ch in text)
    if len(w) != r or any(not 0 <= s < sigma for s in w):
        raise ValueError(f"bad word {text!r}")
    return w


def format_pair_distribution(d: PairDistribution) -> str:
    if d.sigma > 10:
        raise ValueError("digit word format needs alphabet size <= 10")
    lines = [f"pairs {d.sigma} {d.r}"]
    for a, b, w in d.support:
        lines.append(f"{_word_str(a)} {_word_str(b)} {w}")
    return "\n".join(lines) + "\n"


def parse_pair_distribution(text: str) -> PairDistribution:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("pairs "):
        raise ValueError("missing 'pairs <sigma> <r>' header")
    _, sigma, r = lines[0].split()
    sigma, r = int(sigma), int(r)
    items = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad line {ln!r}")
        items.append((_parse_word(parts[0], sigma, r),
                      _parse_word(parts[1], sigma, r), Fraction(parts[2])))
    return pair_distribution(sigma, r, items)


def format_relation(R: Relation) -> str:
    lines = [f"pairs 2 {R.n}"]
    for a, b in R.pairs:
        lines.append(f"{_word_str(a)} {_word_str(b)}")
    return "\n".join(lines) + "\n"


def parse_relation(text: str) -> Relation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("pairs "):
        raise ValueError("missing 'pairs 2 <n>' header")
    _, sigma, n = lines[0].split()
    if int(sigma) != 2:
        raise ValueError("relations use the binary alphabet")
    n = int(n)
    pairs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad line {ln!r}")
        pairs.append((_parse_word(parts[0], 2, n), _parse_word(parts[1], 2, n)))
    return relation(n, pairs)
