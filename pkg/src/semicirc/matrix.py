"""0/1 matrices stored by their zero positions.

The dense linear operators this package targets have few zeros and many
ones, so a matrix is kept as one sorted tuple of zero columns per row.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError

HEADER = "semicirc-matrix v1"


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x (0 for x <= 1)."""
    return (x - 1).bit_length() if x > 1 else 0


def log_threshold(x: int) -> int:
    """``max(1, ceil(log2 x))``: the threshold/block-size convention."""
    return max(1, ceil_log2(x))


@dataclass(frozen=True)
class Matrix01:
    m: int
    n: int
    zeros: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("negative dimension")
        if len(self.zeros) != self.m:
            raise ValueError(f"expected {self.m} zero lists, got {len(self.zeros)}")
        for i, row in enumerate(self.zeros):
            for a, b in zip(row, row[1:]):
                if a >= b:
                    raise ValueError(f"row {i}: zero columns must be strictly increasing")
            if row and (row[0] < 0 or row[-1] >= self.n):
                raise ValueError(f"row {i}: zero column out of range")

    @classmethod
    def from_zeros(cls, m: int, n: int, positions: Iterable[tuple[int, int]]) -> "Matrix01":
        rows: list[set[int]] = [set() for _ in range(m)]
        for i, j in positions:
            if not (0 <= i < m and 0 <= j < n):
                raise ValueError(f"zero ({i}, {j}) out of range for {m}x{n}")
            if j in rows[i]:
                raise ValueError(f"duplicate zero ({i}, {j})")
            rows[i].add(j)
        return cls(m, n, tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def from_rows(cls, n: int, zero_rows: Sequence[Iterable[int]]) -> "Matrix01":
        return cls(len(zero_rows), n, tuple(tuple(sorted(set(r))) for r in zero_rows))

    @classmethod
    def from_dense(cls, dense) -> "Matrix01":
        arr = np.asarray(dense)
        if arr.ndim != 2:
            raise ValueError("dense matrix must be 2-dimensional")
        m, n = arr.shape
        return cls(m, n, tuple(tuple(int(j) for j in np.flatnonzero(row == 0)) for row in arr))

    def to_dense(self) -> np.ndarray:
        out = np.ones((self.m, self.n), dtype=np.int8)
        for i, row in enumerate(self.zeros):
            out[i, list(row)] = 0
        return out

    @property
    def z(self) -> int:
        return sum(len(r) for r in self.zeros)

    @property
    def u(self) -> int:
        return self.m * self.n - self.z

    def row_support(self, i: int) -> list[int]:
        zs = set(self.zeros[i])
        return [j for j in range(self.n) if j not in zs]

    def empty_rows(self) -> list[int]:
        return [i for i, r in enumerate(self.zeros) if len(r) == self.n]

    def column_zeros(self) -> list[list[int]]:
        cols: list[list[int]] = [[] for _ in range(self.n)]
        for i, row in enumerate(self.zeros):
            for j in row:
                cols[j].append(i)
        return cols

    def transpose(self) -> "Matrix01":
        return Matrix01(self.n, self.m, tuple(tuple(c) for c in self.column_zeros()))

    def select_rows(self, rows: Sequence[int]) -> "Matrix01":
        return Matrix01(len(rows), self.n, tuple(self.zeros[i] for i in rows))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.to_dense())


def random_matrix(m: int, n: int, zeros_per_row: int, rng: random.Random) -> Matrix01:
    """Exactly ``zeros_per_row`` zeros in every row, at uniform random columns."""
    k = min(zeros_per_row, n)
    return Matrix01(m, n, tuple(tuple(sorted(rng.sample(range(n), k))) for _ in range(m)))


def random_sparse_zeros(m: int, n: int, z: int, rng: random.Random,
                        allow_empty_rows: bool = False) -> Matrix01:
    """``z`` distinct zero positions drawn uniformly (rows never fully zero unless allowed)."""
    cap = m * n if allow_empty_rows else m * (n - 1)
    if z > cap:
        raise ValueError(f"cannot place {z} zeros in a {m}x{n} matrix")
    rows: list[set[int]] = [set() for _ in range(m)]
    placed = 0
    while placed < z:
        i, j = rng.randrange(m), rng.randrange(n)
        if j in rows[i] or (not allow_empty_rows and len(rows[i]) == n - 1):
            continue
        rows[i].add(j)
        placed += 1
    return Matrix01(m, n, tuple(tuple(sorted(r)) for r in rows))


def format_matrix(a: Matrix01) -> str:
    lines = [HEADER, f"dims {a.m} {a.n}"]
    for i, row in enumerate(a.zeros):
        lines.extend(f"zero {i} {j}" for j in row)
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _int(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", lineno) from None
    if value < 0:
        raise FormatError(f"negative value {value}", lineno)
    return value


def parse_matrix(text: str) -> Matrix01:
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != HEADER:
        raise FormatError(f"missing header {HEADER!r}", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise FormatError("missing dims line", lines[0][0])
    lineno, line = lines[1]
    parts = line.split()
    if len(parts) != 3 or parts[0] != "dims":
        raise FormatError("expected 'dims <m> <n>'", lineno)
    m, n = _int(parts[1], lineno), _int(parts[2], lineno)
    rows: list[set[int]] = [set() for _ in range(m)]
    for lineno, line in lines[2:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "zero":
            raise FormatError("expected 'zero <i> <j>'", lineno)
        i, j = _int(parts[1], lineno), _int(parts[2], lineno)
        if i >= m or j >= n:
            raise FormatError(f"zero ({i}, {j}) outside {m}x{n}", lineno)
        if j in rows[i]:
            raise FormatError(f"duplicate zero ({i}, {j})", lineno)
        rows[i].add(j)
    return Matrix01(m, n, tuple(tuple(sorted(r)) for r in rows))
