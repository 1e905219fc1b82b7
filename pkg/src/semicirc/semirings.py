"""Semirings and matrix products ``AB`` for a dense 0/1 left factor.

A circuit for ``Ax`` uses only the semiring addition, so it is synthesized
once and then evaluated with whole rows of ``B`` as inputs.  Each gate then
costs one vectorized addition over the k columns.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .circuit import Circuit
from .errors import FormatError, ShapeMismatchError
from .matrix import Matrix01
from .semigroups import BOOL_OR, INT_SUM, TROPICAL_MIN, SemigroupInstance
from .synth import SynthParams, SynthReport, synthesize

DENSE_HEADER = "semicirc-dense v1"

# largest magnitude that int64 sums of up to n terms can absorb without overflow
_INT64_SAFE = 2 ** 62


def _tropical_mul(a, b):
    return a + b  # inf + x stays inf with math.inf


@dataclass(frozen=True)
class SemiringInstance:
    name: str
    add: SemigroupInstance
    mul: Callable[[Any, Any], Any]
    ufunc: np.ufunc = field(repr=False)
    dtype: Any = field(repr=False)
    parse: Callable[[str], Any] = field(repr=False)
    format: Callable[[Any], str] = field(repr=False)

    def array(self, values, n_terms: int = 1) -> np.ndarray:
        """Carrier array for ``values``; integer sums switch to exact objects if int64 could overflow."""
        if self.dtype is np.int64:
            arr = np.asarray(values, dtype=object)
            biggest = max((abs(int(v)) for v in arr.flat), default=0)
            if biggest * max(1, n_terms) < _INT64_SAFE:
                return arr.astype(np.int64)
            return arr
        return np.asarray(values, dtype=self.dtype)


def _parse_tropical(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return math.inf
    try:
        return float(int(t))
    except ValueError:
        raise FormatError(f"expected an integer or inf, got {text!r}") from None


def _format_tropical(v) -> str:
    return "inf" if v == math.inf else str(int(v))


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"expected an integer, got {text!r}") from None


def _parse_bool(text: str) -> bool:
    if text in ("0", "1"):
        return text == "1"
    raise FormatError(f"expected 0 or 1, got {text!r}")


INT_RING = SemiringInstance("int-ring", INT_SUM, operator.mul, np.add, np.int64,
                            _parse_int, lambda v: str(int(v)))
# tropical values are integers held in float64 so +inf is representable;
# integers below 2**53 stay exact under min and +
TROPICAL = SemiringInstance("tropical", TROPICAL_MIN, _tropical_mul, np.minimum, np.float64,
                            _parse_tropical, _format_tropical)
BOOLEAN = SemiringInstance("boolean", BOOL_OR, lambda a, b: a and b, np.logical_or, np.bool_,
                           _parse_bool, lambda v: "1" if v else "0")

SEMIRINGS = {s.name: s for s in (INT_RING, TROPICAL, BOOLEAN)}


def get_semiring(name: str) -> SemiringInstance:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise KeyError(f"unknown semiring {name!r}; choose from {sorted(SEMIRINGS)}") from None


def evaluate_rows(c: Circuit, ufunc: np.ufunc, inputs: np.ndarray) -> dict[int, np.ndarray]:
    """Evaluate ``c`` with input j set to the vector ``inputs[j]``; returns label -> vector.

    Values are dropped after their last use, so peak memory tracks the
    circuit's width rather than its size.
    """
    n = c.n_inputs
    if inputs.shape[0] != n:
        raise ShapeMismatchError(f"circuit has {n} inputs, got {inputs.shape[0]} rows")
    last_use = [-1] * c.num_nodes
    for k, ops in enumerate(c.gates):
        for o in ops:
            last_use[o] = k
    outputs = set(c.output_map().values())
    vals: list[np.ndarray | None] = [inputs[j] for j in range(n)] + [None] * len(c.gates)
    for k, ops in enumerate(c.gates):
        acc = vals[ops[0]].copy()
        for o in ops[1:]:
            ufunc(acc, vals[o], out=acc)
        vals[n + k] = acc
        for o in ops:
            if last_use[o] == k and o >= n and o not in outputs:
                vals[o] = None
    return {label: vals[node] for label, node in c.outputs}


def matmul_complement_sparse(a: Matrix01, b, s: SemiringInstance,
                             params: SynthParams | None = None,
                             circuit: tuple[Circuit, SynthReport] | None = None
                             ) -> np.ndarray:
    """``(AB)[i, k]``: semiring sum of ``B[j, k]`` over the ones ``A[i, j] = 1``.

    The circuit is always built in deterministic mode; ``params`` contributes
    only ``allow_empty_rows``, and with it an all-zero row yields a row of
    ``None`` (a semiring without zero has no value there).  A prebuilt
    ``(circuit, report)`` pair for ``a`` may be passed to skip synthesis.
    """
    params = params or SynthParams()
    arr = s.array(b, n_terms=a.n)
    if arr.ndim != 2 or arr.shape[0] != a.n:
        raise ShapeMismatchError(f"A is {a.m}x{a.n} but B has shape {arr.shape}")
    k = arr.shape[1]
    det = SynthParams(mode="det", allow_empty_rows=params.allow_empty_rows)
    c, _ = circuit if circuit is not None else synthesize(a, det)
    inputs = arr
    if c.virtual_input is not None:
        # the virtual input feeds only the empty rows, whose values are discarded
        inputs = np.concatenate([arr, arr[:1]], axis=0)
    rows = evaluate_rows(c, s.ufunc, inputs)
    out = np.empty((a.m, k), dtype=arr.dtype if not a.empty_rows() else object)
    empty = set(a.empty_rows())
    for i in range(a.m):
        out[i] = None if i in empty else rows[i]
    return out


def naive_matmul(a: Matrix01, b: Sequence[Sequence[Any]], s: SemiringInstance) -> list[list[Any]]:
    """Reference product straight from the definition, using scalar operations only."""
    dense = a.to_dense()
    k = len(b[0]) if len(b) else 0
    out: list[list[Any]] = []
    for i in range(a.m):
        row = []
        for col in range(k):
            acc = None
            for j in range(a.n):
                if dense[i, j]:
                    acc = b[j][col] if acc is None else s.add.op(acc, b[j][col])
            row.append(acc)
        out.append(row)
    return out


def naive_semiring_product(x: Sequence[Sequence[Any]], y: Sequence[Sequence[Any]],
                           s: SemiringInstance) -> list[list[Any]]:
    """General product of two carrier matrices; the all-ones case reduces to ``naive_matmul``."""
    out = []
    for row in x:
        out_row = []
        for col in range(len(y[0])):
            acc = None
            for j, v in enumerate(row):
                term = s.mul(v, y[j][col])
                acc = term if acc is None else s.add.op(acc, term)
            out_row.append(acc)
        out.append(out_row)
    return out


# -- dense file format ----------------------------------------------------------------

def format_dense(arr, s: SemiringInstance) -> str:
    arr = np.asarray(arr, dtype=object)
    lines = [DENSE_HEADER, f"dims {arr.shape[0]} {arr.shape[1]}"]
    lines.extend(" ".join("-" if v is None else s.format(v) for v in row) for row in arr)
    return "\n".join(lines) + "\n"


def parse_dense(text: str, s: SemiringInstance) -> list[list[Any]]:
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines or lines[0][1] != DENSE_HEADER:
        raise FormatError(f"missing header {DENSE_HEADER!r}", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise FormatError("missing dims line", lines[0][0])
    no, dims = lines[1]
    parts = dims.split()
    if len(parts) != 3 or parts[0] != "dims" or not all(p.isdigit() for p in parts[1:]):
        raise FormatError("expected 'dims <n> <k>'", no)
    n, k = int(parts[1]), int(parts[2])
    if n < 1 or k < 1:
        raise FormatError("dimensions must be positive", no)
    body = lines[2:]
    if len(body) != n:
        raise FormatError(f"expected {n} value rows, found {len(body)}",
                          body[-1][0] if body else no)
    rows = []
    for no, line in body:
        tokens = line.split()
        if len(tokens) != k:
            raise FormatError(f"expected {k} values, found {len(tokens)}", no)
        try:
            rows.append([s.parse(t) for t in tokens])
        except FormatError as exc:
            raise FormatError(str(exc), no) from None
    return rows
