"""Exact minimum formula size and depth for every function on few variables.

A uniform-cost dynamic program over all 2^(2^m) truth tables: constants cost 0,
literals cost 1, and a table first reachable as g1 op g2 with L(g1)+L(g2) = c
is finalized at size c.  One optimal decomposition is stored per table so a
witness formula of exactly that size can be rebuilt.  Minimum depth is computed
by a separate breadth-first layering (the min-size witness need not be
min-depth).
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .formula import And, Const, Formula, Leaf, Or
from .truthtable import TruthTable, table_mask, var_table

OP_CONST0 = 0
OP_CONST1 = 1
OP_LEAF = 2
OP_AND = 3
OP_OR = 4

MAGIC = b"SZTB"
VERSION = 1

_RECORD = np.dtype([("L", "u1"), ("D", "u1"), ("op", "u1"),
                    ("wl", "<u4"), ("wr", "<u4")])

# Products are enumerated in chunks of at most this many entries.
_CHUNK = 1 << 23


class SizeTable:
    """Immutable per-arity table of (L, D, witness decomposition)."""

    def __init__(self, m: int, L, D, wop, wl, wr):
        self.m = m
        self.L = L
        self.D = D
        self.wop = wop
        self.wl = wl
        self.wr = wr

    def _index(self, f: TruthTable) -> int:
        if f.n != self.m:
            raise ValueError(f"table built for arity {self.m}, got {f.n}")
        return f.bits

    def size(self, f: TruthTable) -> int:
        return int(self.L[self._index(f)])

    def depth(self, f: TruthTable) -> int:
        return int(self.D[self._index(f)])

    def witness(self, f: TruthTable) -> Formula:
        """A formula computing f with exactly L(f) leaves."""
        self._index(f)
        memo: dict[int, Formula] = {}

        def build(t: int) -> Formula:
            if t in memo:
                return memo[t]
            op = int(self.wop[t])
            if op == OP_CONST0:
                out: Formula = Const(0)
            elif op == OP_CONST1:
                out = Const(1)
            elif op == OP_LEAF:
                code = int(self.wl[t])
                out = Leaf((code >> 1) + 1, bool(code & 1))
            else:
                left = build(int(self.wl[t]))
                right = build(int(self.wr[t]))
                out = And(left, right) if op == OP_AND else Or(left, right)
            memo[t] = out
            return out

        return build(f.bits)

    def max_L_function(self) -> tuple[TruthTable, int]:
        """A maximiser of L; ties go to the smallest table value."""
        t = int(np.argmax(self.L))
        return TruthTable(self.m, t), int(self.L[t])

    def save(self, path):
        records = np.empty(len(self.L), dtype=_RECORD)
        records["L"] = self.L
        records["D"] = self.D
        records["op"] = self.wop
        records["wl"] = self.wl
        records["wr"] = self.wr
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(bytes([VERSION, self.m]))
            records.tofile(fh)

    @classmethod
    def load(cls, path) -> "SizeTable":
        with open(path, "rb") as fh:
            head = fh.read(6)
            if len(head) != 6 or head[:4] != MAGIC:
                raise ValueError(f"{path}: not a size-table file")
            if head[4] != VERSION:
                raise ValueError(f"{path}: unsupported version {head[4]}")
            m = head[5]
            records = np.fromfile(fh, dtype=_RECORD)
        if len(records) != 1 << (1 << m):
            raise ValueError(f"{path}: truncated table for arity {m}")
        return cls(m, records["L"].copy(), records["D"].copy(),
                   records["op"].copy(), records["wl"].copy(),
                   records["wr"].copy())


def _product_pass(A, B, unset_u8, and_op, visit):
    """Call visit(targets, keys) for all unseen products of A x B under one op.

    Keys pack the unordered pair as (min << shift) | max so that the minimum
    key over all generating pairs is the lexicographically smallest (left,
    right) witness.
    """
    shift = 16 if A.dtype == np.uint32 else 32
    rows = max(1, _CHUNK // max(1, len(B)))
    for start in range(0, len(A), rows):
        Ac = A[start:start + rows]
        prod = (Ac[:, None] & B[None, :]) if and_op else (Ac[:, None] | B[None, :])
        flat = prod.ravel()
        sel = np.flatnonzero(unset_u8[flat])
        if not sel.size:
            continue
        targets = flat[sel]
        av = Ac[sel // len(B)]
        bv = B[sel % len(B)]
        lo = np.minimum(av, bv).astype(np.uint64)
        hi = np.maximum(av, bv).astype(np.uint64)
        visit(targets, (lo << shift) | hi)


def build_size_table(m: int, allow_huge: bool = False) -> SizeTable:
    """Exact L and D for all functions of arity m.

    Arity 5 is refused unless allow_huge is set: the full table has 2^32
    entries and the working arrays come to roughly 120 GB.
    """
    if m < 1:
        raise ValueError("arity must be at least 1")
    if m > 5 or (m == 5 and not allow_huge):
        raise ValueError(f"arity {m} above cap (4; pass allow_huge for 5)")

    M = 1 << (1 << m)
    full = table_mask(m)
    word = np.uint32 if m <= 4 else np.uint64
    sent = np.uint64(0xFFFFFFFFFFFFFFFF)

    L = np.full(M, 255, np.uint8)
    wop = np.zeros(M, np.uint8)
    wl = np.zeros(M, np.uint32)
    wr = np.zeros(M, np.uint32)

    L[0] = 0
    wop[0] = OP_CONST0
    L[full] = 0
    wop[full] = OP_CONST1
    lits = []
    for j in range(1, m + 1):
        v = var_table(j, m).bits
        for bits, code in ((v, (j - 1) << 1), (v ^ full, ((j - 1) << 1) | 1)):
            L[bits] = 1
            wop[bits] = OP_LEAF
            wl[bits] = code
            lits.append(bits)
    layers = {0: np.array(sorted((0, full)), word),
              1: np.array(sorted(lits), word)}
    found = 2 + len(lits)

    dest_and = np.empty(M, np.uint64)
    dest_or = np.empty(M, np.uint64)
    unset = np.zeros(M, np.uint8)
    c = 1
    while found < M:
        c += 1
        if c > 64:
            raise AssertionError("size layering failed to converge")
        dest_and.fill(sent)
        dest_or.fill(sent)
        np.equal(L, 255, out=unset.view(bool))
        for c1 in range(1, c // 2 + 1):
            A, B = layers.get(c1), layers.get(c - c1)
            if A is None or B is None or not len(A) or not len(B):
                continue
            _product_pass(A, B, unset, True,
                          lambda t, k: np.minimum.at(dest_and, t, k))
            _product_pass(A, B, unset, False,
                          lambda t, k: np.minimum.at(dest_or, t, k))
        hit_and = dest_and != sent
        hit_or = dest_or != sent
        new = np.flatnonzero(hit_and | hit_or)
        if not len(new):
            layers[c] = np.empty(0, word)
            continue
        use_and = hit_and[new]
        key = np.where(use_and, dest_and[new], dest_or[new])
        L[new] = c
        wop[new] = np.where(use_and, OP_AND, OP_OR)
        shift = 16 if word == np.uint32 else 32
        wl[new] = key >> shift
        wr[new] = key & ((1 << shift) - 1)
        layers[c] = new.astype(word)
        found += len(new)

    D = _build_depths(m, M, full, word)
    return SizeTable(m, L, D, wop, wl, wr)


def _build_depths(m, M, full, word):
    """Min depth by breadth-first layering; no witnesses are kept."""
    D = np.full(M, 255, np.uint8)
    base = [0, full]
    for j in range(1, m + 1):
        v = var_table(j, m).bits
        base += [v, v ^ full]
    base = np.array(sorted(set(base)), word)
    D[base] = 0
    frontier = base
    have = base
    found = len(base)
    unset = np.zeros(M, np.uint8)
    d = 0
    while found < M:
        d += 1
        if d > 32:
            raise AssertionError("depth layering failed to converge")
        np.equal(D, 255, out=unset.view(bool))
        raw: list = []
        collect = lambda t, k: raw.append(np.unique(t))
        _product_pass(frontier, have, unset, True, collect)
        _product_pass(frontier, have, unset, False, collect)
        if raw:
            new = np.unique(np.concatenate(raw))
        else:
            new = np.empty(0, np.int64)
        D[new] = d
        frontier = new.astype(word)
        have = np.union1d(have, frontier).astype(word)
        found += len(new)
        if not len(new) and found < M:
            raise AssertionError("depth layering stalled")
    return D


_cache: dict[int, SizeTable] = {}


def cache_dir() -> Path:
    env = os.environ.get("FORMULALAB_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "formulalab"


def get_table(m: int, build_if_missing: bool = True) -> SizeTable:
    """Cached size table for arity m, built and persisted on first use."""
    if m in _cache:
        return _cache[m]
    if not 1 <= m <= 4:
        raise ValueError(f"no cached table for arity {m}")
    path = cache_dir() / f"sizetable_{m}.bin"
    tab = None
    if path.exists():
        try:
            tab = SizeTable.load(path)
        except ValueError:
            tab = None
    if tab is None:
        if not build_if_missing:
            raise ValueError(f"no table built for arity {m}")
        tab = build_size_table(m)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tab.save(tmp)
        os.replace(tmp, path)
    _cache[m] = tab
    return tab


def L_exact(f: TruthTable) -> int:
    return get_table(f.n).size(f)


def D_exact(f: TruthTable) -> int:
    return get_table(f.n).depth(f)


def witness_formula(f: TruthTable) -> Formula:
    return get_table(f.n).witness(f)


def max_L_function(k: int) -> tuple[TruthTable, int]:
    return get_table(k).max_L_function()
