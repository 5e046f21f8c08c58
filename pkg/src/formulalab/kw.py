"""Communication protocols for the find-a-differing-coordinate game.

A formula for f maps directly onto a protocol: one player holds a 1-input,
the other a 0-input, and each gate becomes a round.  At an OR gate the
1-input player names a child that still evaluates to 1 on their input; at
an AND gate the 0-input player names a child evaluating to 0.  A literal
leaf then pins a coordinate on which the two inputs must differ, so the
protocol has exactly one leaf per formula leaf.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Const, Formula, Leaf, tt_from_formula
from .truthtable import TruthTable


@dataclass(frozen=True)
class ProtocolLeaf:
    coord: int  # output coordinate (1-based)
    leaf_id: int  # depth-first numbering


@dataclass(frozen=True)
class ProtocolNode:
    speaker: str  # "A" moves on the 1-input, "B" on the 0-input
    children: tuple
    tables: tuple[TruthTable, ...]  # child functions, guiding the move


@dataclass(frozen=True)
class Protocol:
    n: int
    f: TruthTable
    root: object

    def run(self, a: int, b: int) -> ProtocolLeaf:
        """Walk the tree for inputs a in f^-1(1), b in f^-1(0)."""
        if self.f.value(a) != 1 or self.f.value(b) != 0:
            raise ValueError("run needs a 1-input and a 0-input")
        node = self.root
        while isinstance(node, ProtocolNode):
            if node.speaker == "A":
                want, x = 1, a
            else:
                want, x = 0, b
            for child, tab in zip(node.children, node.tables):
                if tab.value(x) == want:
                    node = child
                    break
            else:
                raise AssertionError("no admissible child; tree is malformed")
        return node

    def leaves(self) -> list[ProtocolLeaf]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, ProtocolLeaf):
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return sorted(out, key=lambda l: l.leaf_id)


def leaf_count(P: Protocol) -> int:
    return len(P.leaves())


def kw_protocol(phi: Formula, f: TruthTable) -> Protocol:
    """Protocol solving the differing-coordinate game for f, mirroring phi.

    phi must compute f exactly, and f must be non-constant (the game is
    undefined otherwise).
    """
    if f.is_constant():
        raise ValueError("game undefined for constant functions")
    if tt_from_formula(phi, f.n) != f:
        raise ValueError("formula does not compute the given function")
    counter = [0]

    def build(node) -> object:
        if isinstance(node, Const):
            # cannot appear on a path consistent with both players, but a
            # formula containing constants would not compute a simplified f
            raise ValueError("constant leaf inside the formula")
        if isinstance(node, Leaf):
            out = ProtocolLeaf(node.var, counter[0])
            counter[0] += 1
            return out
        speaker = "A" if type(node).__name__ == "Or" else "B"
        kids = (node.left, node.right)
        tables = tuple(tt_from_formula(k, f.n) for k in kids)
        return ProtocolNode(speaker, tuple(build(k) for k in kids), tables)

    return Protocol(f.n, f, build(phi))


@dataclass(frozen=True)
class KWVerdict:
    ok: bool
    pairs: int
    witness: object = None  # (a, b, coord) on failure

    def __bool__(self) -> bool:
        return self.ok


def kw_verify(P: Protocol, f: TruthTable) -> KWVerdict:
    """Exhaustively check that every (1-input, 0-input) pair reaches a leaf
    whose coordinate actually separates the pair."""
    ones = list(f.ones())
    zeros = list(f.zeros())
    for a in ones:
        for b in zeros:
            leaf = P.run(a, b)
            j = leaf.coord - 1
            if (a >> j) & 1 == (b >> j) & 1:
                return KWVerdict(False, len(ones) * len(zeros), (a, b, leaf.coord))
    return KWVerdict(True, len(ones) * len(zeros))
