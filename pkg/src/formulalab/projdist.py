"""Distributions over projections, with exact fixing/hiding certification.

A random projection is represented either exactly -- a finite weighted
support of `Projection` values with rational weights -- or as a seeded
sampler.  All property checkers operate on the exact form: fixing and
hiding are universally quantified inequalities whose left-hand sides are
supported only on one-step substitutions of support points, so with
rational weights every verdict is exact.

Restrictions are the special case where the target namespace coincides
with the source (each x_i maps to itself, 0 or 1).
"""

from __future__ import annotations

import itertools
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional

from .projection import (
    Projection,
    const,
    is_const,
    is_negated,
    lit,
    var_of,
)

SUPPORT_CAP = 10**7


class NotFixingError(ValueError):
    """Raised when a distribution is not q-fixing for any finite q.

    Happens when some one-step substitution has positive probability of
    producing a projection that itself has probability zero; the offending
    (projection, variable, sigma) triple is attached as `witness`.
    """

    def __init__(self, pi: Projection, var: int, sigma: int):
        super().__init__(
            f"not fixing for any q: substituting sigma={sigma} at x{var} "
            f"reaches a zero-probability projection"
        )
        self.witness = (pi, var, sigma)


@dataclass(frozen=True)
class FixingViolation:
    var: int  # x_i, 1-based
    sigma: int
    pi: Projection
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        return (
            f"fixing violated at x{self.var}, sigma={self.sigma}: "
            f"lhs {self.lhs} > {self.rhs} for projection [{self.pi}]"
        )


@dataclass(frozen=True)
class HidingViolation:
    var: int
    target: int  # y_j
    sigma: int
    pi: Projection
    lhs: Fraction  # conditional probability
    bound: Fraction

    def __str__(self) -> str:
        return (
            f"hiding violated at x{self.var}, y{self.target}, "
            f"sigma={self.sigma}: Pr = {self.lhs} > {self.bound} "
            f"given [{self.pi}]"
        )


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ExactProjDist:
    """Finite distribution over projections from x_1..x_n to y_1..y_m.

    `support` holds (weight, projection) pairs sorted by image tuple;
    weights are positive rationals summing to one, projections distinct.
    Use the `exact_dist` factory rather than the constructor.
    """

    n: int
    m: int
    support: tuple[tuple[Fraction, Projection], ...]

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty support")
        if len(self.support) > SUPPORT_CAP:
            raise ValueError("support cap exceeded")
        total = Fraction(0)
        seen = set()
        for w, p in self.support:
            if not isinstance(w, Fraction) or w <= 0:
                raise ValueError("weights must be positive rationals")
            if p.n != self.n or p.m != self.m:
                raise ValueError("projection arity mismatch")
            if p.images in seen:
                raise ValueError("duplicate projection in support")
            seen.add(p.images)
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    @cached_property
    def _weight_of(self) -> dict:
        return {p.images: w for w, p in self.support}

    def weight(self, p: Projection) -> Fraction:
        return self._weight_of.get(p.images, Fraction(0))

    @cached_property
    def _cumulative(self) -> list[float]:
        acc, out = 0.0, []
        for w, _ in self.support:
            acc += float(w)
            out.append(acc)
        return out

    def draw(self, rng: random.Random) -> Projection:
        u = rng.random()
        # nudge for float round-off at the top of the ladder
        i = min(bisect_right(self._cumulative, u), len(self.support) - 1)
        return self.support[i][1]

    def sample(self, seed, index: int) -> Projection:
        return self.draw(random.Random(f"{seed}:{index}"))

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class SamplerProjDist:
    """Seeded sampler form, for supports too large to enumerate.

    `draw_fn(rng)` must be deterministic given the generator state; per-draw
    generators are derived as Random(f"{seed}:{index}") so trial i of a run
    never depends on how many other trials executed.
    """

    n: int
    m: int
    draw_fn: Callable[[random.Random], Projection]
    label: str = ""

    def draw(self, rng: random.Random) -> Projection:
        return self.draw_fn(rng)

    def sample(self, seed, index: int) -> Projection:
        return self.draw(random.Random(f"{seed}:{index}"))


ProjDist = object  # ExactProjDist | SamplerProjDist, duck-typed


def exact_dist(n: int, m: int, items) -> ExactProjDist:
    """Build an ExactProjDist, merging duplicate projections."""
    acc: dict = {}
    for w, p in items:
        w = Fraction(w)
        if w == 0:
            continue
        if p.images in acc:
            acc[p.images] = (acc[p.images][0] + w, p)
        else:
            acc[p.images] = (w, p)
    support = tuple(
        sorted(((w, p) for w, p in acc.values()), key=lambda t: t[1].images)
    )
    return ExactProjDist(n, m, support)


def _require_exact(d) -> ExactProjDist:
    if not isinstance(d, ExactProjDist):
        raise TypeError("exact distribution required (sampler form refused)")
    return d


# ---------------------------------------------------------------------------
# fixing / hiding checkers


def _fixing_constraints(d: ExactProjDist, i: int, sigma: int):
    """Left-hand masses Pr[p(x_i) is a literal of v and p_{v<-sigma} = pi],
    grouped by the substituted projection pi.  Yields (pi, lhs) sorted."""
    acc: dict = {}
    for w, p in d.support:
        img = p.image(i)
        if is_const(img):
            continue
        q = p.substitute(var_of(img), sigma)
        if q.images in acc:
            acc[q.images] = (acc[q.images][0] + w, q)
        else:
            acc[q.images] = (w, q)
    for key in sorted(acc):
        yield acc[key][1], acc[key][0]


def is_fixing(d, q0, q1) -> CheckResult:
    """Check the fixing inequality at (q0, q1), exactly.

    For every source variable x_i, bit sigma and projection pi:
    Pr[p(x_i) not constant and p with its target set to sigma equals pi]
    must be at most q_sigma * Pr[p = pi].  Only one-step substitutions of
    support points can make the left side positive, so those are the only
    candidates examined.  Returns the lowest-index violation as witness.
    """
    d = _require_exact(d)
    qs = (Fraction(q0), Fraction(q1))
    for i in range(1, d.n + 1):
        for sigma in (0, 1):
            for pi, lhs in _fixing_constraints(d, i, sigma):
                rhs = qs[sigma] * d.weight(pi)
                if lhs > rhs:
                    return CheckResult(False, FixingViolation(i, sigma, pi, lhs, rhs))
    return CheckResult(True)


def tightest_fixing(d) -> tuple[Fraction, Fraction]:
    """Smallest (q0, q1) for which `is_fixing` passes.

    Each constraint pins q_sigma >= lhs / Pr[p = pi]; the maximum ratio per
    sigma is exact.  Raises NotFixingError when some lhs is positive on a
    zero-probability projection.
    """
    d = _require_exact(d)
    best = [Fraction(0), Fraction(0)]
    for i in range(1, d.n + 1):
        for sigma in (0, 1):
            for pi, lhs in _fixing_constraints(d, i, sigma):
                w = d.weight(pi)
                if w == 0:
                    raise NotFixingError(pi, i, sigma)
                ratio = lhs / w
                if ratio > best[sigma]:
                    best[sigma] = ratio
    return best[0], best[1]


def _hiding_groups(d: ExactProjDist, j: int, sigma: int):
    """Group support by the substituted projection p_{y_j<-sigma}.

    Yields (pi, denom, numerators) where numerators[i-1] is the mass of
    support points mapping x_i to a y_j literal within the group.  Groups
    always have positive mass, so the zero-probability proviso in the
    definition never fires here.
    """
    acc: dict = {}
    for w, p in d.support:
        q = p.substitute(j, sigma)
        entry = acc.get(q.images)
        if entry is None:
            entry = acc[q.images] = [q, Fraction(0), [Fraction(0)] * d.n]
        entry[1] += w
        for i in range(1, d.n + 1):
            img = p.image(i)
            if not is_const(img) and var_of(img) == j:
                entry[2][i - 1] += w
    for key in sorted(acc):
        yield acc[key]


def is_hiding(d, q0, q1) -> CheckResult:
    """Check the hiding inequality at (q0, q1), exactly.

    For every x_i, target y_j, and sigma: conditioned on the projection
    with y_j set to sigma, the probability that x_i maps to a y_j literal
    is at most q_sigma.  Conditions of probability zero are skipped (they
    cannot arise from support grouping).
    """
    d = _require_exact(d)
    qs = (Fraction(q0), Fraction(q1))
    for j in range(1, d.m + 1):
        for sigma in (0, 1):
            for pi, denom, nums in _hiding_groups(d, j, sigma):
                for i in range(1, d.n + 1):
                    cond = nums[i - 1] / denom
                    if cond > qs[sigma]:
                        return CheckResult(
                            False, HidingViolation(i, j, sigma, pi, cond, qs[sigma])
                        )
    return CheckResult(True)


def tightest_hiding(d) -> tuple[Fraction, Fraction]:
    """Smallest (q0, q1) for which `is_hiding` passes (max conditional)."""
    d = _require_exact(d)
    best = [Fraction(0), Fraction(0)]
    for j in range(1, d.m + 1):
        for sigma in (0, 1):
            for _pi, denom, nums in _hiding_groups(d, j, sigma):
                top = max(nums)
                if top / denom > best[sigma]:
                    best[sigma] = top / denom
    return best[0], best[1]


def generalized_hiding_check(d, esets, var: int, target: int, sigma: int):
    """Conditional hiding bound against a random *set* of projections.

    `esets` is a finite distribution [(weight, frozenset-of-images)] over
    sets E, sampled independently of p.  Checks
    Pr[p(x_var) hits a y_target literal | p_{y_target<-sigma} in E] <= q_sigma
    with q_sigma the tightest hiding parameter of d.
    Returns (lhs, bound, holds); lhs is None when the condition has
    probability zero.
    """
    d = _require_exact(d)
    bound = tightest_hiding(d)[sigma]
    num = Fraction(0)
    den = Fraction(0)
    for we, es in esets:
        we = Fraction(we)
        for w, p in d.support:
            if p.substitute(target, sigma).images not in es:
                continue
            den += we * w
            img = p.image(var)
            if not is_const(img) and var_of(img) == target:
                num += we * w
    if den == 0:
        return None, bound, True
    lhs = num / den
    return lhs, bound, lhs <= bound


# ---------------------------------------------------------------------------
# combining distributions


def _shift_images(p: Projection, target_shift: int) -> tuple[int, ...]:
    return tuple(
        img if is_const(img) else lit(var_of(img) + target_shift, is_negated(img))
        for img in p.images
    )


def join(d1, d2):
    """Independent join: disjoint source and target namespaces side by side.

    The second distribution's sources become x_{n1+1}..x_{n1+n2} and its
    targets y_{m1+1}..y_{m1+m2}.  Product weights; fixing and hiding
    certificates of the pieces carry over unchanged.
    """
    n, m = d1.n + d2.n, d1.m + d2.m
    if isinstance(d1, ExactProjDist) and isinstance(d2, ExactProjDist):
        if len(d1.support) * len(d2.support) > SUPPORT_CAP:
            raise ValueError("support cap exceeded")
        items = []
        for w1, p1 in d1.support:
            for w2, p2 in d2.support:
                images = p1.images + _shift_images(p2, d1.m)
                items.append((w1 * w2, Projection(n, m, images)))
        return exact_dist(n, m, items)

    def draw_fn(rng: random.Random) -> Projection:
        p1 = d1.draw(rng)
        p2 = d2.draw(rng)
        return Projection(n, m, p1.images + _shift_images(p2, d1.m))

    return SamplerProjDist(n, m, draw_fn, label="join")


def m_fold(d, k: int):
    """k independent copies of d joined; k=1 returns d itself.

    Falls back to sampler form when the exact product support would
    exceed the cap.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if k == 1:
        return d
    if isinstance(d, ExactProjDist) and len(d.support) ** k <= SUPPORT_CAP:
        out = d
        for _ in range(k - 1):
            out = join(out, d)
        return out
    base_n, base_m = d.n, d.m

    def draw_fn(rng: random.Random) -> Projection:
        images: tuple[int, ...] = ()
        for c in range(k):
            p = d.draw(rng)
            images = images + tuple(
                img if is_const(img) else lit(var_of(img) + c * base_m, is_negated(img))
                for img in p.images
            )
        return Projection(base_n * k, base_m * k, images)

    return SamplerProjDist(base_n * k, base_m * k, draw_fn, label=f"fold{k}")


# ---------------------------------------------------------------------------
# hiding -> fixing conversion


@dataclass(frozen=True)
class HidingToFixing:
    """Result of composing with the keep-or-fix restriction on targets.

    `identity_prob` is the exact probability that the composed projection
    equals the original one; `conditionals` lists that probability
    conditioned on each support point (all equal iff the identity event is
    independent of the input projection, which `independent` records).
    """

    dist: ExactProjDist
    identity_prob: Fraction
    conditionals: tuple[tuple[Projection, Fraction], ...]
    independent: bool


def hiding_to_fixing(d) -> HidingToFixing:
    """Compose with a target-side restriction keeping each y_j alive
    with probability 1 - 1/2m, else fixing it to a uniform bit.

    A (q0, q1)-hiding input becomes a (4m^2 q0, 4m^2 q1)-fixing output,
    and the composed projection equals the original with probability at
    least 1/2.  Only target variables actually used by a support point
    affect its image under composition, so the per-point expansion is
    3^(used) rather than 3^m.
    """
    d = _require_exact(d)
    m = d.m
    keep = Fraction(2 * m - 1, 2 * m)
    fix = Fraction(1, 4 * m)
    items: dict = {}
    conditionals = []
    identity = Fraction(0)
    for w, p in d.support:
        used = p.used_outputs()
        cond = keep ** len(used)
        conditionals.append((p, cond))
        identity += w * cond
        for choice in itertools.product((None, 0, 1), repeat=len(used)):
            mult = Fraction(1)
            sub = dict(zip(used, choice))
            for c in choice:
                mult *= keep if c is None else fix
            images = []
            for img in p.images:
                if is_const(img):
                    images.append(img)
                    continue
                c = sub[var_of(img)]
                if c is None:
                    images.append(img)
                else:
                    images.append(const(c ^ 1 if is_negated(img) else c))
            key = tuple(images)
            if key in items:
                items[key] += w * mult
            else:
                items[key] = w * mult
    out = exact_dist(
        d.n, m, ((w, Projection(d.n, m, imgs)) for imgs, w in items.items())
    )
    base = conditionals[0][1]
    independent = all(c == base for _, c in conditionals)
    return HidingToFixing(out, identity, tuple(conditionals), independent)


# ---------------------------------------------------------------------------
# adversary pairs -> hiding projections


def adversary_to_hiding(pd):
    """Turn a distribution over (1-input, 0-input) pairs into a random
    projection onto a single variable y.

    Coordinates where the pair agrees become that constant; coordinates
    where (a_i, b_i) = (1, 0) map to y and (0, 1) to its negation, so
    setting y to 1 recovers a and setting it to 0 recovers b.  The result
    hides y at q1 = max over (a, i) of Pr[a_i != b_i | a] and q0 the same
    over b, and f restricted to any support projection is exactly y or
    its negation -- never constant.
    """
    if pd.sigma != 2:
        raise ValueError("binary alphabet required")
    items = []
    for a, b, w in pd.support:
        images = []
        for ai, bi in zip(a, b):
            if ai == bi:
                images.append(const(ai))
            elif ai == 1:
                images.append(lit(1, False))
            else:
                images.append(lit(1, True))
        items.append((w, Projection(pd.r, 1, tuple(images))))
    return exact_dist(pd.r, 1, items)


# ---------------------------------------------------------------------------
# filters


class FilterClosureError(ValueError):
    def __init__(self, pi: Projection, target: int, sigma: int):
        super().__init__(
            f"predicate not closed under assignment: accepts a projection "
            f"but rejects it after y{target} <- {sigma}"
        )
        self.witness = (pi, target, sigma)


def condition_on_filter(d, predicate: Callable[[Projection], bool]) -> ExactProjDist:
    """Condition on a set of projections closed under target assignments.

    Closure is verified on the assignment-closure of the accepted support:
    starting from accepted support points, every single assignment
    y_j <- sigma must stay accepted (checked exhaustively; the closure is
    finite).  Conditioning on such a set preserves any fixing certificate.
    """
    d = _require_exact(d)
    accepted = [(w, p) for w, p in d.support if predicate(p)]
    total = sum((w for w, _ in accepted), Fraction(0))
    if total == 0:
        raise ValueError("filter has probability zero")
    seen = {p.images for _, p in accepted}
    queue = [p for _, p in accepted]
    while queue:
        p = queue.pop()
        for j in range(1, d.m + 1):
            for sigma in (0, 1):
                q = p.substitute(j, sigma)
                if q.images in seen:
                    continue
                if not predicate(q):
                    raise FilterClosureError(p, j, sigma)
                seen.add(q.images)
                queue.append(q)
    return exact_dist(d.n, d.m, ((w / total, p) for w, p in accepted))


# ---------------------------------------------------------------------------
# named families


def p_random_restriction(n: int, p) -> ExactProjDist:
    """Each variable stays alive with probability p, else becomes a
    uniform constant.  Represented over the identity target namespace.
    Tightest fixing parameter is 2p/(1-p) for both bits.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("need 0 < p < 1")
    per_var = [
        (p, None),
        ((1 - p) / 2, 0),
        ((1 - p) / 2, 1),
    ]
    items = []
    for combo in itertools.product(per_var, repeat=n):
        w = Fraction(1)
        images = []
        for i, (wv, val) in enumerate(combo, start=1):
            w *= wv
            images.append(lit(i, False) if val is None else const(val))
        items.append((w, Projection(n, n, tuple(images))))
    return exact_dist(n, n, items)


def random_edge(n: int) -> ExactProjDist:
    """One uniformly chosen variable maps to a uniform literal of y, the
    rest to uniform bits; 1/n-hiding, not fixing for any q.
    """
    items = []
    weight = Fraction(1, n * 2**n)
    for i in range(1, n + 1):
        for tau in (False, True):
            for bits in itertools.product((0, 1), repeat=n - 1):
                it = iter(bits)
                images = tuple(
                    lit(1, tau) if k == i else const(next(it))
                    for k in range(1, n + 1)
                )
                items.append((weight, Projection(n, 1, images)))
    return exact_dist(n, 1, items)


def random_m_alive(n: int, m: int) -> ExactProjDist:
    """m uniformly chosen distinct variables survive as literals of
    y_1..y_m (in choice order), the rest become uniform bits.
    1/(n-m+1)-hiding.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    count = math.perm(n, m) * 2**n
    if count > SUPPORT_CAP:
        raise ValueError("support cap exceeded")
    weight = Fraction(1, count)
    items = []
    for alive in itertools.permutations(range(1, n + 1), m):
        pos_of = {i: j for j, i in enumerate(alive, start=1)}
        for taus in itertools.product((False, True), repeat=m):
            for bits in itertools.product((0, 1), repeat=n - m):
                it = iter(bits)
                images = tuple(
                    lit(pos_of[k], taus[pos_of[k] - 1])
                    if k in pos_of
                    else const(next(it))
                    for k in range(1, n + 1)
                )
                items.append((weight, Projection(n, m, images)))
    return exact_dist(n, m, items)


def _majority_single_block(m: int) -> ExactProjDist:
    half = (m - 1) // 2
    items = []
    for i in range(1, m + 1):
        rest = [k for k in range(1, m + 1) if k != i]
        for ones in itertools.combinations(rest, half):
            images = [0] * m
            images[i - 1] = lit(1, False)
            for k in rest:
                images[k - 1] = const(1 if k in ones else 0)
            items.append((Fraction(1), Projection(m, 1, tuple(images))))
    total = len(items)
    return exact_dist(m, 1, ((Fraction(1, total), p) for _, p in items))


def majority_block(m: int, k: int = 1):
    """k-fold join of the single-block distribution: in each block of m
    variables (m odd) one uniform variable maps to the block's output
    variable and the rest are fixed in a uniformly chosen balanced way,
    so an m-bit majority on the block collapses to that single literal.
    """
    if m % 2 == 0:
        raise ValueError("block size must be odd")
    return m_fold(_majority_single_block(m), k)


# ---------------------------------------------------------------------------
# misc helpers


def random_exact_dist(rng: random.Random, n: int, m: int, points: int) -> ExactProjDist:
    """Small random distribution for property tests: `points` projections
    (deduplicated) with random positive rational weights."""
    from .projection import random_projection

    raw = {}
    for _ in range(points):
        p = random_projection(rng, n, m)
        raw[p.images] = (rng.randint(1, 20), p)
    total = sum(c for c, _ in raw.values())
    return exact_dist(n, m, ((Fraction(c, total), p) for c, p in raw.values()))


def format_proj_dist(d: ExactProjDist) -> str:
    from .projection import format_projection

    lines = [f"projdist {d.n} {d.m}"]
    for w, p in d.support:
        lines.append(f"w {w.numerator}/{w.denominator}")
        lines.append(format_projection(p).rstrip("\n"))
    return "\n".join(lines) + "\n"


def parse_proj_dist(text: str) -> ExactProjDist:
    from .projection import parse_projection_lines

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("projdist "):
        raise ValueError("missing projdist header")
    _, n_s, m_s = lines[0].split()
    n, m = int(n_s), int(m_s)
    items = []
    pos = 1
    while pos < len(lines):
        head = lines[pos]
        if not head.startswith("w "):
            raise ValueError(f"expected weight line, got {head!r}")
        w = Fraction(head[2:].strip())
        block = lines[pos + 1 : pos + 1 + n]
        items.append((w, parse_projection_lines(block, n, m)))
        pos += 1 + n
    return exact_dist(n, m, items)
