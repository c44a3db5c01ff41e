"""Carriers, dense bitsets, and translate/quotient algebra.

Two kinds of carrier are supported:

* ``ZWindow(M, L)`` -- the integers ``0..M-1`` under addition.  The
  operation is partial: ``a + b`` is defined only when the sum stays
  below ``M``.  Witness operands are drawn from ``0..L-1`` with
  ``L <= M/2``, so any product of two operands is defined.
* ``CayleyGroup(table)`` -- an explicit finite magma given by an
  ``n x n`` table of element indices.  The table must be a Latin
  square; cyclic tables give the groups Z_n.

Sets over a carrier are ``DenseSet`` bitsets.  Internally membership
lives in a single Python integer, so intersections, unions and
quotients are single big-int operations.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadBounds,
    ElementOutOfRange,
    ModelMismatch,
    NotALatinSquare,
    SumcoreError,
)


def iter_bits(bits):
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    while bits:
        lsb = bits & -bits
        yield lsb.bit_length() - 1
        bits ^= lsb


def iter_bits_desc(bits):
    """Yield the indices of the set bits of ``bits`` in decreasing order."""
    while bits:
        i = bits.bit_length() - 1
        yield i
        bits ^= 1 << i


def bits_of(indices):
    out = 0
    for i in indices:
        out |= 1 << i
    return out


@dataclass(frozen=True)
class ZWindow:
    """Integer window [0, M) under (partial) addition."""

    ambient_size: int
    operand_bound: int

    @property
    def carrier_size(self):
        return self.ambient_size

    @property
    def operand_mask(self):
        return (1 << self.operand_bound) - 1

    def op(self, a, b):
        """Return a+b, or None when the sum leaves the window."""
        s = a + b
        return s if s < self.ambient_size else None

    def describe(self):
        return f"zwindow:{self.ambient_size}:{self.operand_bound}"


@dataclass(frozen=True)
class CayleyGroup:
    """Finite carrier with an explicit multiplication table."""

    table: tuple

    @property
    def order(self):
        return len(self.table)

    @property
    def carrier_size(self):
        return len(self.table)

    @property
    def operand_mask(self):
        return (1 << len(self.table)) - 1

    def op(self, a, b):
        return self.table[a][b]

    def describe(self):
        return f"cayley:{self.order}"


def cyclic_table(n):
    return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))


def build_model(desc):
    """Validate a model description and return the carrier.

    ``desc`` is a mapping with ``kind`` equal to ``"zwindow"`` (fields
    ``M``, ``L``) or ``"cayley"`` (field ``table``, a square list of
    element indices).
    """
    kind = desc.get("kind")
    if kind == "zwindow":
        M, L = int(desc["M"]), int(desc["L"])
        if not (2 <= L and 2 * L <= M):
            raise BadBounds(f"need 2 <= L <= M/2, got M={M}, L={L}")
        return ZWindow(M, L)
    if kind == "cayley":
        table = tuple(tuple(int(x) for x in row) for row in desc["table"])
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise BadBounds("Cayley table must be square and nonempty")
        full = (1 << n) - 1
        for i, row in enumerate(table):
            seen = 0
            for x in row:
                if not (0 <= x < n):
                    raise ElementOutOfRange(f"row {i} entry {x} out of range")
                if seen >> x & 1:
                    raise NotALatinSquare("row", i, x)
                seen |= 1 << x
        for j in range(n):
            seen = 0
            for i in range(n):
                x = table[i][j]
                if seen >> x & 1:
                    raise NotALatinSquare("column", j, x)
                seen |= 1 << x
            assert seen == full
        return CayleyGroup(table)
    raise SumcoreError(f"unknown model kind: {kind!r}")


class DenseSet:
    """Immutable bitset over a carrier.

    ``bits`` holds membership (bit i set iff element i is a member);
    the cardinality is cached.  Instances are never mutated after
    construction and are safe to share across threads.
    """

    __slots__ = ("model", "bits", "cardinality", "_np", "_prefix")

    def __init__(self, model, bits):
        n = model.carrier_size
        if bits < 0 or bits >> n:
            raise ElementOutOfRange("membership bit outside carrier")
        self.model = model
        self.bits = bits
        self.cardinality = bits.bit_count()
        self._np = None
        self._prefix = None

    @classmethod
    def from_members(cls, model, members):
        return cls(model, bits_of(members))

    def contains(self, i):
        return 0 <= i < self.model.carrier_size and (self.bits >> i) & 1 == 1

    def members(self):
        return list(iter_bits(self.bits))

    def to_numpy(self):
        """Membership as a bool array (cached)."""
        if self._np is None:
            n = self.model.carrier_size
            nbytes = (n + 7) // 8
            raw = self.bits.to_bytes(nbytes, "little")
            arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
            self._np = arr[:n].astype(bool)
        return self._np

    def prefix_counts(self):
        """Array P with P[i] = |A ∩ [0, i)| (cached)."""
        if self._prefix is None:
            p = np.zeros(self.model.carrier_size + 1, dtype=np.int64)
            np.cumsum(self.to_numpy(), out=p[1:])
            self._prefix = p
        return self._prefix

    def __len__(self):
        return self.cardinality

    def __eq__(self, other):
        return (
            isinstance(other, DenseSet)
            and self.model == other.model
            and self.bits == other.bits
        )

    def __hash__(self):
        return hash((self.model, self.bits))

    def __repr__(self):
        n = self.cardinality
        head = ",".join(str(i) for i, _ in zip(iter_bits(self.bits), range(8)))
        tail = ",..." if n > 8 else ""
        return f"DenseSet(|A|={n}, {{{head}{tail}}})"


def check_same_model(a: DenseSet, b: DenseSet):
    if a.model != b.model:
        raise ModelMismatch("sets live over different carriers")


def quotient(A: DenseSet, g: int, side: str) -> DenseSet:
    """Translate quotient of A by g.

    right: {b : b*g in A};  left: {c : g*c in A}.  In a ZWindow, pairs
    whose sum leaves the window are excluded (their product is
    undefined).
    """
    model = A.model
    n = model.carrier_size
    if not (0 <= g < n):
        raise ElementOutOfRange(f"element {g} outside carrier of size {n}")
    if side not in ("right", "left"):
        raise SumcoreError(f"side must be 'right' or 'left', got {side!r}")
    if isinstance(model, ZWindow):
        # addition is commutative: both sides are A - g clipped to the window
        return DenseSet(model, A.bits >> g)
    table = model.table
    bits = 0
    if side == "right":
        for b in range(n):
            if A.contains(table[b][g]):
                bits |= 1 << b
    else:
        row = table[g]
        for c in range(n):
            if A.contains(row[c]):
                bits |= 1 << c
    return DenseSet(model, bits)


def translate(A: DenseSet, g: int) -> DenseSet:
    """The translate g·A (ZWindow: A + g, clipped at the window bounds)."""
    model = A.model
    n = model.carrier_size
    if isinstance(model, ZWindow):
        if g >= 0:
            return DenseSet(model, (A.bits << g) & ((1 << n) - 1))
        return DenseSet(model, A.bits >> (-g))
    if not (0 <= g < n):
        raise ElementOutOfRange(f"element {g} outside carrier of size {n}")
    bits = 0
    row = model.table[g]
    for a in iter_bits(A.bits):
        bits |= 1 << row[a]
    return DenseSet(model, bits)


# --- set files -------------------------------------------------------------
#
# Two on-disk formats:
#   * plain: newline-separated non-negative decimal integers;
#   * run-length: a single line "RLE1:<M>:<runs>" where <runs> is a
#     comma-separated alternation gap,run,gap,run,... of lengths summing
#     to M (a leading gap of 0 is allowed; trailing gap may be omitted).


def read_set_file(path):
    """Read a set file; returns (members, declared_size_or_None)."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("RLE1:"):
        parts = stripped.split(":", 2)
        if len(parts) != 3:
            raise SumcoreError(f"malformed RLE1 header in {path}")
        size = int(parts[1])
        runs = [int(x) for x in parts[2].split(",")] if parts[2] else []
        members = []
        pos = 0
        in_set = False
        for length in runs:
            if length < 0:
                raise SumcoreError("negative run length")
            if in_set:
                members.extend(range(pos, pos + length))
            pos += length
            in_set = not in_set
        if pos > size:
            raise SumcoreError("RLE1 runs overflow the declared size")
        return members, size
    members = sorted(int(line) for line in stripped.split() if line)
    if members and members[0] < 0:
        raise SumcoreError("set files hold non-negative integers")
    return members, None


def write_set_file(path, members, size=None, fmt="list"):
    members = sorted(set(members))
    if fmt == "list":
        with open(path, "w") as fh:
            for m in members:
                fh.write(f"{m}\n")
        return
    if fmt != "rle":
        raise SumcoreError(f"unknown set file format {fmt!r}")
    if size is None:
        size = (members[-1] + 1) if members else 0
    runs = []
    pos = 0
    i = 0
    while i < len(members):
        gap = members[i] - pos
        j = i
        while j + 1 < len(members) and members[j + 1] == members[j] + 1:
            j += 1
        run = j - i + 1
        runs.extend((gap, run))
        pos = members[j] + 1
        i = j + 1
    if pos < size:
        runs.append(size - pos)
    with open(path, "w") as fh:
        fh.write(f"RLE1:{size}:" + ",".join(str(r) for r in runs) + "\n")
