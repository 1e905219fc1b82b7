"""Column orders that leave few short ranges.

A row's zeros cut it into maximal ranges of ones.  After the columns are
permuted, ranges shorter than the block size cannot be served by the blocks
scheme, so the order is chosen to make them rare (randomized mode) or to
push them all into a small tail window (deterministic greedy mode).

Ranges that touch either border of the order are prefixes of the first
block or suffixes of the last block, which the blocks scheme answers
directly; only the remaining ("interior") short ranges need chaining and
count towards the short-range total.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import GreedyInvariantError
from .matrix import Matrix01, log_threshold

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 generator; the whole randomized pipeline draws from one of these.

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)                      (all arithmetic mod 2**64)
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound): reject draws under 2**64 mod bound."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % bound
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % bound


def fisher_yates(n: int, rng: SplitMix64) -> list[int]:
    """Uniform permutation of range(n): for i = n-1 .. 1 swap i with below(i + 1)."""
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def inverse(order: Sequence[int]) -> list[int]:
    pos = [0] * len(order)
    for p, col in enumerate(order):
        pos[col] = p
    return pos


def row_ranges(zero_positions: Sequence[int], width: int) -> Iterator[tuple[int, int]]:
    """Maximal ranges (l, r) of a row whose zeros sit at the sorted positions given."""
    prev = -1
    for p in zero_positions:
        if p - prev > 1:
            yield prev + 1, p - 1
        prev = p
    if width - prev > 1:
        yield prev + 1, width - 1


def permuted_zero_positions(a: Matrix01, order: Sequence[int]) -> list[list[int]]:
    pos = inverse(order)
    return [sorted(pos[c] for c in row) for row in a.zeros]


def is_border(l: int, r: int, width: int) -> bool:
    return l == 0 or r == width - 1


@dataclass
class ShortStats:
    total_length: int
    count: int


def short_range_stats(rows: Sequence[Sequence[int]], width: int, threshold: int) -> ShortStats:
    """Total length and number of interior ranges shorter than ``threshold``."""
    total = count = 0
    for zp in rows:
        for l, r in row_ranges(zp, width):
            length = r - l + 1
            if length < threshold and not is_border(l, r, width):
                total += length
                count += 1
    return ShortStats(total, count)


# -- padding ---------------------------------------------------------------------

@dataclass(frozen=True)
class PadMapping:
    """Original rows/columns keep their indices; indices >= orig_m / orig_n are padding."""

    t: int
    orig_m: int
    orig_n: int

    @property
    def row_map(self) -> list[int]:
        return list(range(self.orig_m))

    @property
    def col_map(self) -> list[int]:
        return list(range(self.orig_n))

    def dummy_columns(self) -> range:
        return range(self.orig_n, self.t)


def pad_for_permute(a: Matrix01) -> tuple[Matrix01, PadMapping]:
    """Square t x t matrix with t = max(n, m, z), padded with all-one rows and columns."""
    t = max(a.n, a.m, a.z, 1)
    padded = Matrix01(t, t, a.zeros + ((),) * (t - a.m))
    return padded, PadMapping(t, a.m, a.n)


# -- deterministic greedy -----------------------------------------------------------

def window_width(t: int) -> int:
    L = log_threshold(t)
    return L * L + 2 * L


@dataclass
class GreedyResult:
    order: list[int]
    # columns placed by the greedy loop proper; the rest is the closing tail
    greedy_steps: int
    prefix_zero_counts: list[int]


def greedy_column_order(a: Matrix01) -> GreedyResult:
    """Greedy order keeping every interior short range inside the last few columns.

    Keeps the set R of rows having a zero among the last L chosen columns.
    If |R| <= L, the next column is the lowest unpicked column that has a
    zero and shares no row with R; when none exists, the remaining all-one
    columns are appended, then the remaining zero columns, and the order is
    complete.  If |R| > L, the lowest unpicked all-one column is appended.
    After every greedy step the first i columns must hold at least i zeros.
    """
    t = a.n
    L = log_threshold(t)
    col_zeros = a.column_zeros()
    zero_cols = [j for j in range(t) if col_zeros[j]]
    if not zero_cols:
        return GreedyResult(list(range(t)), 0, [])
    one_cols = deque(j for j in range(t) if not col_zeros[j])

    # doubly linked list over unpicked zero columns, in index order; -1 ends it
    nxt = [-1] * t
    prv = [-1] * t
    for c, d in zip(zero_cols, zero_cols[1:]):
        nxt[c], prv[d] = d, c
    head = zero_cols[0]

    def unlink(c: int) -> None:
        nonlocal head
        p, q = prv[c], nxt[c]
        if p < 0:
            head = q
        else:
            nxt[p] = q
        if q >= 0:
            prv[q] = p

    order: list[int] = []
    counts: list[int] = []
    window: deque[int] = deque()
    row_hits = [0] * a.m
    rows_in_window: set[int] = set()
    zeros_so_far = 0

    def push(col: int) -> None:
        nonlocal zeros_so_far
        order.append(col)
        if col_zeros[col]:
            unlink(col)
        window.append(col)
        for i in col_zeros[col]:
            row_hits[i] += 1
            rows_in_window.add(i)
        if len(window) > L:
            old = window.popleft()
            for i in col_zeros[old]:
                row_hits[i] -= 1
                if not row_hits[i]:
                    rows_in_window.discard(i)
        zeros_so_far += len(col_zeros[col])
        counts.append(zeros_so_far)
        if zeros_so_far < len(order):
            raise GreedyInvariantError(
                f"first {len(order)} columns hold only {zeros_so_far} zeros")

    push(zero_cols[0])
    while len(order) < t:
        if len(rows_in_window) <= L:
            forbidden: set[int] = set()
            for i in rows_in_window:
                forbidden.update(a.zeros[i])
            col = head
            while col >= 0 and col in forbidden:
                col = nxt[col]
            if col >= 0:
                push(col)
                continue
            steps = len(order)
            order.extend(one_cols)
            c = head
            while c >= 0:
                order.append(c)
                c = nxt[c]
            return GreedyResult(order, steps, counts)
        if not one_cols:
            raise GreedyInvariantError(
                f"|R| = {len(rows_in_window)} > {L} but no all-one column is left")
        push(one_cols.popleft())
    return GreedyResult(order, len(order), counts)


def short_ranges_outside_window(a: Matrix01, order: Sequence[int], threshold: int,
                                width: int) -> list[tuple[int, int, int]]:
    """Interior short ranges (row, l, r) that start before the last ``width`` positions."""
    t = len(order)
    cut = t - width
    bad = []
    for i, zp in enumerate(permuted_zero_positions(a, order)):
        for l, r in row_ranges(zp, t):
            if r - l + 1 < threshold and not is_border(l, r, t) and l < cut:
                bad.append((i, l, r))
    return bad


def seeded_matrix(m: int, n: int, zeros_per_row: int, seed: int) -> Matrix01:
    """Random matrix with exactly ``zeros_per_row`` zeros per row, drawn from splitmix64.

    Each row takes the first k entries of a partial Fisher-Yates shuffle of
    the columns, so the matrix depends only on the arguments.
    """
    k = min(zeros_per_row, n)
    rng = SplitMix64(seed)
    cols = list(range(n))
    rows = []
    for _ in range(m):
        for i in range(k):
            j = i + rng.below(n - i)
            cols[i], cols[j] = cols[j], cols[i]
        rows.append(tuple(sorted(cols[:k])))
    return Matrix01(m, n, tuple(rows))
