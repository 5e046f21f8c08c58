"""Formula trees over literals: binary AND/OR trees and unbounded fan-in trees.

Size is the number of literal leaves (constants count zero) and depth is the
longest root-to-leaf path.  Subtrees may be shared between nodes; metric and
evaluation helpers memoise on object identity so shared structure is cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .projection import (Projection, const_value, is_const, is_negated,
                         var_of)
from .truthtable import TruthTable, table_mask, var_table


@dataclass(frozen=True)
class Leaf:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("constant must be 0 or 1")


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class AndN:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 1:
            raise ValueError("n-ary gate needs at least one child")


@dataclass(frozen=True)
class OrN:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 1:
            raise ValueError("n-ary gate needs at least one child")


Formula = Leaf | Const | And | Or
UFormula = Formula | AndN | OrN


def _children(node) -> tuple:
    if isinstance(node, (And, Or)):
        return (node.left, node.right)
    if isinstance(node, (AndN, OrN)):
        return node.children
    return ()


def formula_size(phi: UFormula) -> int:
    """Number of literal leaves; constants contribute nothing."""
    memo: dict[int, int] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            out = 1
        elif isinstance(node, Const):
            out = 0
        else:
            out = sum(go(c) for c in _children(node))
        memo[key] = out
        return out

    return go(phi)


def formula_depth(phi: UFormula) -> int:
    memo: dict[int, int] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        kids = _children(node)
        out = 0 if not kids else 1 + max(go(c) for c in kids)
        memo[key] = out
        return out

    return go(phi)


def formula_metrics(phi: UFormula) -> tuple[int, int]:
    return formula_size(phi), formula_depth(phi)


def max_var(phi: UFormula) -> int:
    memo: dict[int, int] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            out = node.var
        elif isinstance(node, Const):
            out = 0
        else:
            out = max(go(c) for c in _children(node))
        memo[key] = out
        return out

    return go(phi)


def formula_vars(phi: UFormula) -> tuple[int, ...]:
    """Sorted variable indices that occur as leaves."""
    seen: set[int] = set()
    visited: set[int] = set()

    def go(node):
        key = id(node)
        if key in visited:
            return
        visited.add(key)
        if isinstance(node, Leaf):
            seen.add(node.var)
        else:
            for c in _children(node):
                go(c)

    go(phi)
    return tuple(sorted(seen))


def tt_from_formula(phi: UFormula, n: int | None = None) -> TruthTable:
    """Evaluate the tree bit-parallel into a packed truth table."""
    if n is None:
        n = max_var(phi)
    mask = table_mask(n)
    var_bits = {}
    memo: dict[int, int] = {}

    def go(node) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            if node.var not in var_bits:
                var_bits[node.var] = var_table(node.var, n).bits
            out = var_bits[node.var]
            if node.negated:
                out ^= mask
        elif isinstance(node, Const):
            out = mask if node.value else 0
        elif isinstance(node, (And, AndN)):
            out = mask
            for c in _children(node):
                out &= go(c)
        else:
            out = 0
            for c in _children(node):
                out |= go(c)
        memo[key] = out
        return out

    return TruthTable(n, go(phi))


def eval_formula(phi: UFormula, x: int) -> int:
    memo: dict[int, int] = {}

    def go(node) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            out = ((x >> (node.var - 1)) & 1) ^ int(node.negated)
        elif isinstance(node, Const):
            out = node.value
        elif isinstance(node, (And, AndN)):
            out = 1
            for c in _children(node):
                out &= go(c)
        else:
            out = 0
            for c in _children(node):
                out |= go(c)
        memo[key] = out
        return out

    return go(phi)


def demorgan_negate(phi: UFormula) -> UFormula:
    """Negation pushed to the leaves; leaf count is preserved."""
    if isinstance(phi, Leaf):
        return Leaf(phi.var, not phi.negated)
    if isinstance(phi, Const):
        return Const(1 - phi.value)
    if isinstance(phi, And):
        return Or(demorgan_negate(phi.left), demorgan_negate(phi.right))
    if isinstance(phi, Or):
        return And(demorgan_negate(phi.left), demorgan_negate(phi.right))
    if isinstance(phi, AndN):
        return OrN(tuple(demorgan_negate(c) for c in phi.children))
    return AndN(tuple(demorgan_negate(c) for c in phi.children))


def substitute_var(phi: Formula, j: int, value: int) -> Formula:
    """Replace every leaf on variable j by the constant value."""
    if isinstance(phi, Leaf):
        if phi.var == j:
            return Const(value ^ int(phi.negated))
        return phi
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, And):
        return And(substitute_var(phi.left, j, value),
                   substitute_var(phi.right, j, value))
    return Or(substitute_var(phi.left, j, value),
              substitute_var(phi.right, j, value))


def _absorb(phi: Formula) -> Formula:
    """One bottom-up pass of constant absorption."""
    if isinstance(phi, (Leaf, Const)):
        return phi
    left = _absorb(phi.left)
    right = _absorb(phi.right)
    if isinstance(phi, And):
        if left == Const(0) or right == Const(0):
            return Const(0)
        if left == Const(1):
            return right
        if right == Const(1):
            return left
        return And(left, right)
    if left == Const(1) or right == Const(1):
        return Const(1)
    if left == Const(0):
        return right
    if right == Const(0):
        return left
    return Or(left, right)


def _literal_rules(phi: Formula) -> Formula:
    """One bottom-up pass of the literal substitution rules.

    For an OR gate with a literal child y_j (negated: sigma = 1), substitute
    y_j <- sigma in the sibling; for an AND gate substitute y_j <- 1 - sigma.
    The literal is false (resp. true) exactly at the substituted point, so the
    truth table is unchanged.
    """
    if isinstance(phi, (Leaf, Const)):
        return phi
    left = _literal_rules(phi.left)
    right = _literal_rules(phi.right)
    if isinstance(phi, And):
        if isinstance(left, Leaf):
            right = substitute_var(right, left.var, 1 - int(left.negated))
        if isinstance(right, Leaf):
            left = substitute_var(left, right.var, 1 - int(right.negated))
        return And(left, right)
    if isinstance(left, Leaf):
        right = substitute_var(right, left.var, int(left.negated))
    if isinstance(right, Leaf):
        left = substitute_var(left, right.var, int(right.negated))
    return Or(left, right)


def simplify(phi: Formula) -> Formula:
    """Constant absorption plus literal rules, iterated to a fixpoint."""
    while True:
        new = _absorb(_literal_rules(phi))
        if new == phi:
            return new
        phi = new


def apply_projection(phi: Formula, p: Projection,
                     do_simplify: bool = True) -> Formula:
    """Replace leaves by their images under p, optionally simplifying."""
    def go(node):
        if isinstance(node, Leaf):
            img = p.image(node.var)
            if is_const(img):
                return Const(const_value(img) ^ int(node.negated))
            return Leaf(var_of(img), is_negated(img) ^ node.negated)
        if isinstance(node, Const):
            return node
        if isinstance(node, And):
            return And(go(node.left), go(node.right))
        return Or(go(node.left), go(node.right))

    out = go(phi)
    return simplify(out) if do_simplify else out


def compose_formulas(phi_f: Formula, phi_g: Formula, block: int) -> Formula:
    """Substitute a copy of phi_g (on `block` variables) for every leaf of phi_f.

    Leaf x_i of phi_f becomes phi_g re-indexed onto variables
    (i-1)*block+1 .. i*block, negated via De Morgan when the leaf is negated.
    The result has exactly size(phi_f) * size(phi_g) leaves.
    """
    def shift(node, offset):
        if isinstance(node, Leaf):
            return Leaf(node.var + offset, node.negated)
        if isinstance(node, Const):
            return node
        if isinstance(node, And):
            return And(shift(node.left, offset), shift(node.right, offset))
        return Or(shift(node.left, offset), shift(node.right, offset))

    def go(node):
        if isinstance(node, Leaf):
            inner = shift(phi_g, (node.var - 1) * block)
            return demorgan_negate(inner) if node.negated else inner
        if isinstance(node, Const):
            return node
        if isinstance(node, And):
            return And(go(node.left), go(node.right))
        return Or(go(node.left), go(node.right))

    return go(phi_f)


def parity_formula(t: int) -> Formula:
    """Parity of 2^t variables as the t-fold XOR-gadget tree: size 4^t, depth 2t."""
    if t < 1:
        raise ValueError("parity gadget needs t >= 1")

    def build(level: int, offset: int) -> Formula:
        if level == 1:
            a, b = offset + 1, offset + 2
            return Or(And(Leaf(a), Leaf(b, True)),
                      And(Leaf(a, True), Leaf(b)))
        half = 1 << (level - 1)
        u = build(level - 1, offset)
        v = build(level - 1, offset + half)
        return Or(And(u, demorgan_negate(v)), And(demorgan_negate(u), v))

    return build(t, 0)


# Balancing constant: rebuilt trees satisfy depth <= C_BAL * log2(size + 1).
# The separator subtree found below has between s/3 and 2s/3 of the s leaves,
# so depth obeys D(s) <= 2 + D(2s/3), i.e. roughly 3.42 * log2(s); C_BAL = 4
# absorbs the additive slack at small sizes.
C_BAL = 4


def _find_separator(phi: Formula, total: int) -> list[str]:
    """Path to the topmost subtree with at most 2/3 of the leaves."""
    path = []
    node = phi
    while formula_size(node) * 3 > 2 * total:
        left, right = node.left, node.right
        if formula_size(left) >= formula_size(right):
            path.append("L")
            node = left
        else:
            path.append("R")
            node = right
    return path


def _subtree_at(phi: Formula, path: list[str]) -> Formula:
    for step in path:
        phi = phi.left if step == "L" else phi.right
    return phi


def _replace_at(phi: Formula, path: list[str], sub: Formula) -> Formula:
    if not path:
        return sub
    if path[0] == "L":
        return type(phi)(_replace_at(phi.left, path[1:], sub), phi.right)
    return type(phi)(phi.left, _replace_at(phi.right, path[1:], sub))


def balance(phi: Formula) -> Formula:
    """Equivalent formula of depth <= C_BAL * log2(size+1); size may grow polynomially.

    Shannon expansion on a separator subtree t: phi = (t and phi[t<-1]) or
    (!t and phi[t<-0]), recursing on all four pieces.
    """
    s = formula_size(phi)
    if s <= 2:
        return phi
    path = _find_separator(phi, s)
    sub = _subtree_at(phi, path)
    phi1 = _absorb(_replace_at(phi, path, Const(1)))
    phi0 = _absorb(_replace_at(phi, path, Const(0)))
    pos_branch = _absorb(And(balance(sub), balance(phi1)))
    neg_branch = _absorb(And(balance(demorgan_negate(sub)), balance(phi0)))
    return _absorb(Or(pos_branch, neg_branch))


def format_formula(phi: UFormula, prefix: str = "x") -> str:
    """Fully parenthesised infix text with &, |, ~ and numbered variables."""
    if isinstance(phi, Leaf):
        return ("~" if phi.negated else "") + f"{prefix}{phi.var}"
    if isinstance(phi, Const):
        return str(phi.value)
    op = " & " if isinstance(phi, (And, AndN)) else " | "
    return "(" + op.join(format_formula(c, prefix) for c in _children(phi)) + ")"


class _Parser:
    def __init__(self, text: str):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.prefix: str | None = None

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "()&|~01":
                tokens.append(ch)
                i += 1
            elif ch in "xy":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ValueError(f"variable without index at {text[i:]!r}")
                tokens.append(text[i:j])
                i = j
            else:
                raise ValueError(f"unexpected character {ch!r} in formula")
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of formula")
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        out = self.parse_or()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens from {self.peek()!r}")
        return out

    def parse_or(self) -> Formula:
        out = self.parse_and()
        while self.peek() == "|":
            self.take()
            out = Or(out, self.parse_and())
        return out

    def parse_and(self) -> Formula:
        out = self.parse_atom()
        while self.peek() == "&":
            self.take()
            out = And(out, self.parse_atom())
        return out

    def parse_atom(self) -> Formula:
        tok = self.take()
        if tok == "(":
            out = self.parse_or()
            if self.take() != ")":
                raise ValueError("unbalanced parentheses")
            return out
        if tok == "~":
            inner = self.parse_atom()
            if isinstance(inner, Leaf):
                return Leaf(inner.var, not inner.negated)
            if isinstance(inner, Const):
                return Const(1 - inner.value)
            return demorgan_negate(inner)
        if tok in ("0", "1"):
            return Const(int(tok))
        letter, idx = tok[0], int(tok[1:])
        if self.prefix is None:
            self.prefix = letter
        elif self.prefix != letter:
            raise ValueError("mixed x/y variables in one formula")
        return Leaf(idx)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def random_formula(rng: random.Random, n_vars: int, n_leaves: int) -> Formula:
    """Random binary tree with literal leaves on x_1..x_{n_vars}."""
    if n_leaves < 1:
        raise ValueError("need at least one leaf")
    if n_leaves == 1:
        return Leaf(rng.randint(1, n_vars), rng.random() < 0.5)
    split = rng.randint(1, n_leaves - 1)
    left = random_formula(rng, n_vars, split)
    right = random_formula(rng, n_vars, n_leaves - split)
    op = And if rng.random() < 0.5 else Or
    return op(left, right)
