"""Gate pools that make contiguous range products cheap.

Every scheme is built over ``base_n`` positions.  Position ``p`` is backed by
some node of a circuit (by default input ``x_p`` of a fresh circuit), so the
same builders work on permuted columns inside a larger synthesis.  Gates
always list operands in increasing position order, which keeps every
indexed product valid over non-commutative semigroups.

Queries never add gates.  They return a :class:`RangePlan` -- the ordered
nodes whose product is the range -- and callers decide whether (and how)
to materialize it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .circuit import Circuit
from .errors import EmptySchemeError, RangeError, ShortRangeError
from .matrix import log_threshold


class Segment(NamedTuple):
    """Human-readable piece of a plan; positions are inclusive and 0-based."""

    kind: str  # input | prefix | suffix | blocks | range
    l: int
    r: int
    block: int | None = None


@dataclass(frozen=True)
class RangePlan:
    parts: tuple[int, ...]
    segments: tuple[Segment, ...] = ()

    @property
    def extra_gates(self) -> int:
        """Binary gates needed to combine the parts."""
        return len(self.parts) - 1


@dataclass
class RangeScheme:
    circuit: Circuit
    kind: str
    nodes: list[int]
    extra_budget: int
    gate_count: int = 0
    index: dict = field(default_factory=dict)

    @property
    def base_n(self) -> int:
        return len(self.nodes)

    def _check(self, l: int, r: int) -> None:
        if not 0 <= l <= r < self.base_n:
            raise RangeError(f"bad range ({l}, {r}) for {self.base_n} positions")

    def plan(self, l: int, r: int) -> RangePlan:
        raise NotImplementedError


def _setup(n: int, circuit: Circuit | None, nodes: Sequence[int] | None):
    if n <= 0:
        raise EmptySchemeError("a range scheme needs at least one position")
    if circuit is None:
        circuit = Circuit(n)
    if nodes is None:
        nodes = range(n)
    nodes = list(nodes)
    if len(nodes) != n:
        raise ValueError(f"expected {n} position nodes, got {len(nodes)}")
    return circuit, nodes


def materialize(circuit: Circuit, plan: RangePlan, binary: bool = False) -> int:
    """Node computing the planned range: existing node, one gate, or a left-leaning chain."""
    parts = plan.parts
    if len(parts) == 1:
        return parts[0]
    if not binary:
        return circuit.add_gate(parts)
    cur = circuit.add_gate(parts[:2])
    for p in parts[2:]:
        cur = circuit.add_gate((cur, p))
    return cur


# -- prefixes and suffixes --------------------------------------------------------

class PrefixSuffixScheme(RangeScheme):
    def prefix(self, i: int) -> int:
        """Node for positions 0..i."""
        return self.index["prefix"][i]

    def suffix(self, j: int) -> int:
        """Node for positions j..n-1."""
        return self.index["suffix"][j]

    def plan(self, l: int, r: int) -> RangePlan:
        self._check(l, r)
        if l == r:
            return RangePlan((self.nodes[l],), (Segment("input", l, r),))
        if l == 0:
            return RangePlan((self.prefix(r),), (Segment("prefix", l, r),))
        if r == self.base_n - 1:
            return RangePlan((self.suffix(l),), (Segment("suffix", l, r),))
        raise RangeError(f"({l}, {r}) is neither a prefix nor a suffix")


def _prefix_chain(circuit: Circuit, nodes: Sequence[int]) -> list[int]:
    out = [nodes[0]]
    for node in nodes[1:]:
        out.append(circuit.add_gate((out[-1], node)))
    return out


def _suffix_chain(circuit: Circuit, nodes: Sequence[int]) -> list[int]:
    out = [nodes[-1]]
    for node in reversed(nodes[:-1]):
        out.append(circuit.add_gate((node, out[-1])))
    out.reverse()
    return out


def build_prefix_suffix(n: int, circuit: Circuit | None = None,
                        nodes: Sequence[int] | None = None) -> PrefixSuffixScheme:
    circuit, nodes = _setup(n, circuit, nodes)
    before = circuit.gate_count
    prefix = _prefix_chain(circuit, nodes)
    suffix = _suffix_chain(circuit, nodes)
    return PrefixSuffixScheme(circuit, "prefix-suffix", nodes, 0, circuit.gate_count - before,
                              {"prefix": prefix, "suffix": suffix})


# -- divide and conquer (one extra gate per query) --------------------------------

@dataclass
class _Split:
    lo: int
    hi: int  # exclusive
    mid: int  # first position of the right half
    suffixes: list[int]  # suffixes[i - lo] covers i..mid-1
    prefixes: list[int]  # prefixes[j - mid] covers mid..j
    left: "_Split | None" = None
    right: "_Split | None" = None


class DecomposeScheme(RangeScheme):
    def plan(self, l: int, r: int) -> RangePlan:
        self._check(l, r)
        if l == r:
            return RangePlan((self.nodes[l],), (Segment("input", l, r),))
        node = self.index["root"]
        while True:
            mid = node.mid
            if r == mid - 1:
                return RangePlan((node.suffixes[l - node.lo],), (Segment("suffix", l, r),))
            if l == mid:
                return RangePlan((node.prefixes[r - mid],), (Segment("prefix", l, r),))
            if l < mid <= r:
                return RangePlan(
                    (node.suffixes[l - node.lo], node.prefixes[r - mid]),
                    (Segment("suffix", l, mid - 1), Segment("prefix", mid, r)))
            node = node.left if r < mid else node.right


def _build_split(circuit: Circuit, nodes: Sequence[int], lo: int, hi: int) -> _Split | None:
    if hi - lo < 2:
        return None
    mid = lo + (hi - lo) // 2
    split = _Split(lo, hi, mid,
                   _suffix_chain(circuit, nodes[lo:mid]),
                   _prefix_chain(circuit, nodes[mid:hi]))
    split.left = _build_split(circuit, nodes, lo, mid)
    split.right = _build_split(circuit, nodes, mid, hi)
    return split


def decompose_gate_count(n: int) -> int:
    """G(n) = G(floor(n/2)) + G(ceil(n/2)) + floor(n/2) - 1 + ceil(n/2) - 1, G(1) = 0."""
    if n < 2:
        return 0
    a, b = n // 2, n - n // 2
    return decompose_gate_count(a) + decompose_gate_count(b) + a + b - 2


def build_decompose(n: int, circuit: Circuit | None = None,
                    nodes: Sequence[int] | None = None) -> DecomposeScheme:
    circuit, nodes = _setup(n, circuit, nodes)
    before = circuit.gate_count
    root = _build_split(circuit, nodes, 0, n)
    if root is None:  # a single position: every query is the input itself
        root = _Split(0, 1, 1, [nodes[0]], [])
    return DecomposeScheme(circuit, "decompose", nodes, 1, circuit.gate_count - before,
                           {"root": root})


def query_decompose(sch: RangeScheme, l: int, r: int) -> RangePlan:
    if sch.kind != "decompose":
        raise RangeError(f"expected a decompose scheme, got {sch.kind}")
    return sch.plan(l, r)


# -- blocks ------------------------------------------------------------------------

class BlocksScheme(RangeScheme):
    @property
    def block_size(self) -> int:
        return self.index["b"]

    def block_bounds(self, k: int) -> tuple[int, int]:
        b = self.block_size
        return k * b, min(self.base_n, (k + 1) * b) - 1

    def prefix(self, r: int) -> int:
        """Node for block_start(r)..r."""
        return self.index["prefix"][r]

    def suffix(self, l: int) -> int:
        """Node for l..block_end(l)."""
        return self.index["suffix"][l]

    def try_plan(self, l: int, r: int) -> RangePlan | None:
        """Plan for any range not strictly inside a single block, else None.

        Ranges that start at a block start or end at a block end are always
        answerable, whatever their length.
        """
        self._check(l, r)
        b = self.block_size
        bl, br = l // b, r // b
        lo_l, hi_l = self.block_bounds(bl)
        lo_r, hi_r = self.block_bounds(br)
        if bl == br:
            if l == lo_l and r == hi_l:
                return RangePlan((self.prefix(r),), (Segment("blocks", bl, bl),))
            if l == lo_l:
                return RangePlan((self.prefix(r),), (Segment("prefix", l, r, bl),))
            if r == hi_l:
                return RangePlan((self.suffix(l),), (Segment("suffix", l, r, bl),))
            return None
        parts: list[int] = []
        segs: list[Segment] = []
        first = bl
        if l != lo_l:
            parts.append(self.suffix(l))
            segs.append(Segment("suffix", l, hi_l, bl))
            first = bl + 1
        last = br if r == hi_r else br - 1
        if first <= last:
            middle = self.index["top"].plan(first, last)
            parts.extend(middle.parts)
            segs.append(Segment("blocks", first, last))
        if r != hi_r:
            parts.append(self.prefix(r))
            segs.append(Segment("prefix", lo_r, r, br))
        return RangePlan(tuple(parts), tuple(segs))

    def plan(self, l: int, r: int) -> RangePlan:
        self._check(l, r)
        if r - l + 1 < self.block_size:
            raise ShortRangeError(
                f"range ({l}, {r}) is shorter than the block size {self.block_size}")
        plan = self.try_plan(l, r)
        assert plan is not None  # a range of length >= b cannot sit strictly inside a block
        return plan


def blocks_gate_count(n: int) -> int:
    """Exact gate count of :func:`build_blocks`."""
    b = log_threshold(n)
    total = 0
    for start in range(0, n, b):
        length = min(b, n - start)
        if length >= 2:
            total += 2 * length - 3
    return total + decompose_gate_count(-(-n // b))


def build_blocks(n: int, circuit: Circuit | None = None,
                 nodes: Sequence[int] | None = None) -> BlocksScheme:
    circuit, nodes = _setup(n, circuit, nodes)
    before = circuit.gate_count
    b = log_threshold(n)
    prefix: list[int] = []
    suffix: list[int] = []
    products: list[int] = []
    for start in range(0, n, b):
        block = nodes[start:start + b]
        pre = _prefix_chain(circuit, block)
        # the full suffix is the block product, already available as the last prefix
        suf = [pre[-1]] + (_suffix_chain(circuit, block[1:]) if len(block) > 1 else [])
        prefix.extend(pre)
        suffix.extend(suf)
        products.append(pre[-1])
    top = build_decompose(len(products), circuit, products)
    return BlocksScheme(circuit, "blocks", nodes, 3, circuit.gate_count - before,
                        {"b": b, "prefix": prefix, "suffix": suffix, "top": top})


def query_blocks(sch: RangeScheme, l: int, r: int) -> RangePlan:
    if sch.kind != "blocks":
        raise RangeError(f"expected a blocks scheme, got {sch.kind}")
    return sch.plan(l, r)


# -- every range of a small window --------------------------------------------------

class WindowScheme(RangeScheme):
    @property
    def offset(self) -> int:
        return self.index["offset"]

    @property
    def width(self) -> int:
        return self.index["width"]

    def covers(self, l: int, r: int) -> bool:
        return self.offset <= l <= r < self.offset + self.width

    def plan(self, l: int, r: int) -> RangePlan:
        self._check(l, r)
        if not self.covers(l, r):
            raise RangeError(f"range ({l}, {r}) leaves the window "
                             f"[{self.offset}, {self.offset + self.width - 1}]")
        return RangePlan((self.index["ranges"][l, r],), (Segment("range", l, r),))


def build_window_all_ranges(offset: int, w: int, circuit: Circuit | None = None,
                            nodes: Sequence[int] | None = None) -> WindowScheme:
    """All ranges inside positions offset..offset+w-1, in order of increasing length."""
    if w < 1 or offset < 0:
        raise EmptySchemeError("window needs w >= 1 and offset >= 0")
    if nodes is None:
        circuit, nodes = _setup(offset + w, circuit, None)
    else:
        circuit, nodes = _setup(len(nodes), circuit, nodes)
    if offset + w > len(nodes):
        raise RangeError("window extends past the last position")
    before = circuit.gate_count
    ranges: dict[tuple[int, int], int] = {}
    for a in range(offset, offset + w):
        ranges[a, a] = nodes[a]
    for length in range(2, w + 1):
        for a in range(offset, offset + w - length + 1):
            b = a + length - 1
            ranges[a, b] = circuit.add_gate((ranges[a, b - 1], nodes[b]))
    return WindowScheme(circuit, "window", nodes, 0, circuit.gate_count - before,
                        {"offset": offset, "width": w, "ranges": ranges})
