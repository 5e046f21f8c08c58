"""Packed truth tables for Boolean functions on up to 24 variables.

A function on n variables is one integer of 2^n bits: bit k is the value at
input index k, and bit j-1 of the index is the value of variable x_j.  All
tables are immutable; bitwise operators work pointwise on same-arity tables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .projection import Projection, const_value, is_const, is_negated, var_of

MAX_VARS = 24
_CHUNK = 1 << 20


def table_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise ValueError(f"arity {self.n} outside 0..{MAX_VARS}")
        if not 0 <= self.bits <= table_mask(self.n):
            raise ValueError(f"table value does not fit arity {self.n}")

    def value(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise IndexError(f"input {x} out of range for {self.n} variables")
        return (self.bits >> x) & 1

    def ones(self) -> list[int]:
        return [x for x in range(1 << self.n) if (self.bits >> x) & 1]

    def zeros(self) -> list[int]:
        return [x for x in range(1 << self.n) if not (self.bits >> x) & 1]

    def is_constant(self) -> bool:
        return self.bits == 0 or self.bits == table_mask(self.n)

    def bitstring(self) -> str:
        return "".join(str((self.bits >> k) & 1) for k in range(1 << self.n))

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ table_mask(self.n))

    def _check_arity(self, other: "TruthTable"):
        if self.n != other.n:
            raise ValueError(f"arity mismatch {self.n} vs {other.n}")

    def __and__(self, other):
        self._check_arity(other)
        return TruthTable(self.n, self.bits & other.bits)

    def __or__(self, other):
        self._check_arity(other)
        return TruthTable(self.n, self.bits | other.bits)

    def __xor__(self, other):
        self._check_arity(other)
        return TruthTable(self.n, self.bits ^ other.bits)

    def __str__(self) -> str:
        return f"tt {self.n} {self.bitstring()}"


def const_table(n: int, value: int) -> TruthTable:
    if value not in (0, 1):
        raise ValueError("constant must be 0 or 1")
    return TruthTable(n, table_mask(n) if value else 0)


def var_table(j: int, n: int) -> TruthTable:
    """Table of the projection onto variable x_j."""
    if not 1 <= j <= n:
        raise ValueError(f"variable x{j} out of range 1..{n}")
    half = 1 << (j - 1)
    p = ((1 << half) - 1) << half
    for k in range(j, n):
        p |= p << (1 << k)
    return TruthTable(n, p)


def literal_table(j: int, n: int, negated: bool = False) -> TruthTable:
    t = var_table(j, n)
    return ~t if negated else t


def parity_table(n: int) -> TruthTable:
    bits = 0b10
    for k in range(1, n):
        size = 1 << k
        mask = (1 << size) - 1
        bits = bits | ((bits ^ mask) << size)
    if n == 0:
        return TruthTable(0, 0)
    return TruthTable(n, bits)


def and_table(n: int) -> TruthTable:
    return TruthTable(n, 1 << ((1 << n) - 1))


def or_table(n: int) -> TruthTable:
    return TruthTable(n, table_mask(n) - 1)


def _popcounts(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.uint32)
    v = v - ((v >> 1) & 0x55555555)
    v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
    v = (v + (v >> 4)) & 0x0F0F0F0F
    return (v * 0x01010101) >> 24


def majority_table(n: int) -> TruthTable:
    if n % 2 == 0:
        raise ValueError("majority needs an odd number of variables")
    bits = 0
    for start in range(0, 1 << n, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.uint32)
        votes = _popcounts(idx) > n // 2
        packed = np.packbits(votes, bitorder="little").tobytes()
        bits |= int.from_bytes(packed, "little") << start
    return TruthTable(n, bits)


def random_table(n: int, seed: int) -> TruthTable:
    rng = random.Random(f"tt:{n}:{seed}")
    return TruthTable(n, rng.getrandbits(1 << n))


def table_to_array(f: TruthTable) -> np.ndarray:
    """Truth table as a uint8 numpy array indexed by input."""
    raw = f.bits.to_bytes(((1 << f.n) + 7) // 8, "little")
    return np.unpackbits(
        np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: 1 << f.n]

def array_to_table(n: int, arr: np.ndarray) -> TruthTable:
    packed = np.packbits(arr.astype(np.uint8), bitorder="little").tobytes()
    return TruthTable(n, int.from_bytes(packed, "little"))


def negate_inputs(f: TruthTable, mask: int) -> TruthTable:
    """g with g(x) = f(x xor mask)."""
    if not 0 <= mask < (1 << f.n):
        raise ValueError(f"mask {mask} out of range for {f.n} variables")
    bits = f.bits
    for j in range(1, f.n + 1):
        if (mask >> (j - 1)) & 1:
            half = 1 << (j - 1)
            high = var_table(j, f.n).bits
            low = high ^ table_mask(f.n)
            bits = ((bits & high) >> half) | ((bits & low) << half)
    return TruthTable(f.n, bits)


def compose(f: TruthTable, g: TruthTable) -> TruthTable:
    """Block composition f(g(block_1), ..., g(block_m)) on m*n variables."""
    m, n = f.n, g.n
    total = m * n
    if total > MAX_VARS:
        raise ValueError(f"composition arity {total} exceeds {MAX_VARS}")
    if m == 0:
        return TruthTable(0, f.bits)
    g_arr = table_to_array(g)
    f_arr = table_to_array(f)
    sub_mask = (1 << n) - 1
    bits = 0
    for start in range(0, 1 << total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, 1 << total), dtype=np.int64)
        y = np.zeros(idx.shape, dtype=np.int64)
        for i in range(m):
            block = (idx >> (i * n)) & sub_mask
            y |= g_arr[block].astype(np.int64) << i
        vals = f_arr[y]
        packed = np.packbits(vals, bitorder="little").tobytes()
        bits |= int.from_bytes(packed, "little") << start
    return TruthTable(total, bits)


def restrict_tt(f: TruthTable, p: Projection) -> TruthTable:
    """Table of f after substituting each x_i by its image under p."""
    if p.n != f.n:
        raise ValueError(f"projection source arity {p.n} != table arity {f.n}")
    out = 0
    for iy in range(1 << p.m):
        ix = 0
        for i, img in enumerate(p.images):
            if is_const(img):
                bit = const_value(img)
            else:
                bit = (iy >> (var_of(img) - 1)) & 1
                if is_negated(img):
                    bit ^= 1
            ix |= bit << i
        out |= ((f.bits >> ix) & 1) << iy
    return TruthTable(p.m, out)


def named_table(name: str, param: int, seed: int | None = None) -> TruthTable:
    """Builders for the standard families: parity, and, or, maj, surj, random."""
    if name == "parity":
        return parity_table(param)
    if name == "and":
        return and_table(param)
    if name == "or":
        return or_table(param)
    if name == "maj":
        return majority_table(param)
    if name == "surj":
        from .hardfunc import surj_tt

        return surj_tt(param)
    if name == "random":
        if seed is None:
            raise ValueError("random tables need a seed")
        return random_table(param, seed)
    raise ValueError(f"unknown table family {name!r}")


def parse_table_spec(spec: str) -> TruthTable:
    """Parse `tt <n> <bitstring>` or a named form like parity:3 / random:4:7."""
    spec = spec.strip()
    if spec.startswith("tt "):
        parts = spec.split()
        if len(parts) != 3:
            raise ValueError(f"bad table spec {spec!r}")
        n = int(parts[1])
        bitstring = parts[2]
        if len(bitstring) != 1 << n or set(bitstring) - {"0", "1"}:
            raise ValueError(f"bitstring does not match arity {n}")
        bits = 0
        for k, ch in enumerate(bitstring):
            bits |= int(ch) << k
        return TruthTable(n, bits)
    parts = spec.split(":")
    if len(parts) == 2:
        return named_table(parts[0], int(parts[1]))
    if len(parts) == 3 and parts[0] == "random":
        return named_table("random", int(parts[1]), int(parts[2]))
    raise ValueError(f"bad table spec {spec!r}")
