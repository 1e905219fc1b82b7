"""Circuits for ``Ax`` with O(n + z) wires over commutative semigroups.

Rows are split by zero count.  Rows with fewer than ``ceil(log2 n)`` zeros
("light") are served by permuting columns so that almost every maximal
range of ones is long, then reading long ranges off a blocks scheme.  The
few "heavy" rows are handled on the transpose, where they become columns:
a divide-and-conquer scheme over them costs O(t log t) for t heavy rows,
and reversing the wires of that regular circuit gives back the heavy rows.

Both permutation and reversal use commutativity; :func:`build_one_zero_per_row`
is the exception and stays valid for any semigroup.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .circuit import Circuit, eliminate_inputs, is_regular, prune, reverse, splice
from .errors import EmptyRowError, PreconditionError, SynthesisError
from .matrix import Matrix01, log_threshold
from .permute import (SplitMix64, fisher_yates, greedy_column_order, is_border,
                      pad_for_permute, permuted_zero_positions, row_ranges,
                      short_range_stats, window_width)
from .ranges import (RangePlan, build_blocks, build_decompose, build_prefix_suffix,
                     build_window_all_ranges, materialize)

MODES = ("det", "rand")


@dataclass
class SynthParams:
    mode: str = "det"
    seed: int = 0
    retry_limit: int = 16
    allow_empty_rows: bool = False
    # None means the ceil(log2 .) default for the relevant dimension
    heavy_threshold: int | None = None
    short_threshold: int | None = None
    accept_budget: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.retry_limit < 1:
            raise ValueError("retry_limit must be >= 1")


@dataclass
class SynthReport:
    n: int = 0
    m: int = 0
    z: int = 0
    mode: str = "det"
    wires: int = 0
    gates: int = 0
    permutation: list[int] = field(default_factory=list)
    short_total: int = 0
    short_count: int = 0
    fallback_count: int = 0
    fallback_total: int = 0
    retries: int = 0
    heavy_rows: int = 0
    light_rows: int = 0
    empty_rows: int = 0
    build_millis: float = 0.0

    @property
    def ratio(self) -> float:
        """Wires per unit of n + z: the constant in the O(n + z) bound."""
        return self.wires / max(1, self.n + self.z)

    def summary(self) -> str:
        return (f"n={self.n} m={self.m} z={self.z} mode={self.mode} wires={self.wires} "
                f"gates={self.gates} ratio={self.ratio:.3f} short_total={self.short_total} "
                f"fallback_count={self.fallback_count} retries={self.retries} "
                f"heavy_rows={self.heavy_rows} build_millis={self.build_millis:.1f}")


def _with_empty_rows(a: Matrix01, allow: bool,
                     build: Callable[[Matrix01], Circuit]) -> Circuit:
    """Run ``build`` on the non-empty rows; empty rows read a virtual all-one input x_n."""
    empty = a.empty_rows()
    if empty and not allow:
        raise EmptyRowError(f"row {empty[0]} has no ones (use allow_empty_rows)")
    if not empty:
        return build(a)
    keep = [i for i in range(a.m) if len(a.zeros[i]) < a.n]
    out = Circuit(a.n + 1, virtual_input=a.n)
    outputs: list[tuple[int, int]] = []
    if keep:
        inner = build(a.select_rows(keep))
        remap = splice(out, inner, range(a.n))
        outputs.extend((keep[label], remap[node]) for label, node in inner.outputs)
    for i in empty:
        outputs.append((i, out.add_gate((a.n,))))
    for label, node in sorted(outputs):
        out.set_output(label, node)
    return out


# -- at most one zero per row ------------------------------------------------------

def build_one_zero_per_row(a: Matrix01, allow_empty_rows: bool = False) -> Circuit:
    """Prefix/suffix construction; row with a zero at i outputs prefix(i-1) . suffix(i+1).

    Operands stay in increasing variable order, so the circuit is correct
    over any semigroup, commutative or not.
    """
    for i, row in enumerate(a.zeros):
        if len(row) > 1:
            raise PreconditionError(f"row {i} has {len(row)} zeros; at most one allowed")
    return _with_empty_rows(a, allow_empty_rows, _one_zero_core)


def _one_zero_core(a: Matrix01) -> Circuit:
    c = Circuit(a.n)
    if a.m == 0:
        return c
    ps = build_prefix_suffix(a.n, c)
    last = a.n - 1
    for i, row in enumerate(a.zeros):
        if not row:
            parts = [ps.prefix(last)]
        else:
            j = row[0]
            parts = ([ps.prefix(j - 1)] if j > 0 else []) + ([ps.suffix(j + 1)] if j < last else [])
        c.set_output(i, c.add_gate(parts))
    return prune(c)


# -- light rows -----------------------------------------------------------------------

def _random_order(a: Matrix01, params: SynthParams, report: SynthReport) -> list[int] | None:
    n = a.n
    threshold = params.short_threshold or log_threshold(n)
    budget = params.accept_budget if params.accept_budget is not None else -(-n // threshold)
    rng = SplitMix64(params.seed)
    for _ in range(params.retry_limit):
        order = fisher_yates(n, rng)
        stats = short_range_stats(permuted_zero_positions(a, order), n, threshold)
        if stats.total_length <= budget:
            return order
        report.retries += 1
    return None


def _light_core(a: Matrix01, params: SynthParams, report: SynthReport) -> Circuit:
    n = a.n
    order = _random_order(a, params, report) if params.mode == "rand" else None
    window = None
    greedy = order is None
    if not greedy:
        width = n
        threshold = params.short_threshold or log_threshold(n)
        c = Circuit(n)
    else:
        padded, mapping = pad_for_permute(a)
        width = mapping.t
        threshold = params.short_threshold or log_threshold(width)
        order = greedy_column_order(padded).order
        c = Circuit(width)
    nodes = list(order)
    blocks = build_blocks(width, c, nodes)
    if greedy:
        w = min(width, window_width(width))
        window = build_window_all_ranges(width - w, w, c, nodes)

    cache: dict[tuple[int, int], int] = {}
    for i, zp in enumerate(permuted_zero_positions(a, order)):
        range_nodes = []
        for l, r in row_ranges(zp, width):
            length = r - l + 1
            short = length < threshold and not is_border(l, r, width)
            if short:
                report.short_total += length
                report.short_count += 1
                if window is not None and not window.covers(l, r):
                    report.fallback_count += 1
                    report.fallback_total += length
            node = cache.get((l, r))
            if node is None:
                plan = None
                if not short:
                    plan = blocks.try_plan(l, r)
                elif window is not None and window.covers(l, r):
                    plan = window.plan(l, r)
                if plan is None:
                    plan = RangePlan(tuple(nodes[l:r + 1]))
                node = cache[l, r] = materialize(c, plan)
            range_nodes.append(node)
        c.set_output(i, c.add_gate(range_nodes))

    report.permutation = [col for col in order if col < n]
    if width != n:
        c = eliminate_inputs(c, range(n, width))
    return prune(c)


def synth_light_rows(a: Matrix01, params: SynthParams | None = None) -> tuple[Circuit, SynthReport]:
    """Circuit for a matrix whose rows have at most ceil(log2 n) zeros."""
    params = params or SynthParams()
    report = SynthReport(n=a.n, m=a.m, z=a.z, mode=params.mode, light_rows=a.m)
    start = time.perf_counter()
    limit = log_threshold(a.n)
    for i, row in enumerate(a.zeros):
        if len(row) > limit and len(row) < a.n:
            raise PreconditionError(f"row {i} has {len(row)} zeros, more than {limit}")
    c = _with_empty_rows(a, params.allow_empty_rows,
                         lambda sub: _light_core(sub, params, report))
    _finish(report, c, start, a)
    return c, report


# -- heavy rows -----------------------------------------------------------------------

def _heavy_core(a: Matrix01, check: bool = True) -> Circuit:
    t0, n = a.m, a.n
    out = Circuit(n)
    if t0 == 0:
        return out
    at = a.transpose()
    keep = [j for j in range(n) if len(at.zeros[j]) < t0]
    fwd = Circuit(t0)
    dec = build_decompose(t0, fwd)
    cache: dict[tuple[int, int], int] = {}
    for k, j in enumerate(keep):
        range_nodes = []
        for l, r in row_ranges(at.zeros[j], t0):
            node = cache.get((l, r))
            if node is None:
                node = cache[l, r] = materialize(fwd, dec.plan(l, r))
            range_nodes.append(node)
        fwd.set_output(k, fwd.add_gate(range_nodes))
    fwd = prune(fwd)
    if check:
        sub = Matrix01(len(keep), t0, tuple(at.zeros[j] for j in keep))
        if not is_regular(fwd, sub):
            raise SynthesisError("transposed heavy-row circuit is not regular")
    rev = reverse(fwd, check=False)
    remap = splice(out, rev, keep)
    for label, node in sorted(rev.outputs):
        out.set_output(label, remap[node])
    return out


def synth_heavy_rows(a: Matrix01, params: SynthParams | None = None,
                     check: bool = True) -> Circuit:
    """Circuit for a few rows with many zeros, built on the transpose and reversed."""
    params = params or SynthParams()
    return _with_empty_rows(a, params.allow_empty_rows, lambda sub: _heavy_core(sub, check))


# -- everything ---------------------------------------------------------------------------

def _finish(report: SynthReport, c: Circuit, start: float, a: Matrix01) -> None:
    report.wires = c.wires
    report.gates = c.gate_count
    report.empty_rows = len(a.empty_rows())
    report.build_millis = (time.perf_counter() - start) * 1000.0


def synthesize(a: Matrix01, params: SynthParams | None = None,
               check: bool = True) -> tuple[Circuit, SynthReport]:
    """Circuit computing ``Ax`` over any commutative semigroup, with one output gate per row."""
    params = params or SynthParams()
    report = SynthReport(n=a.n, m=a.m, z=a.z, mode=params.mode)
    start = time.perf_counter()

    def core(sub: Matrix01) -> Circuit:
        threshold = params.heavy_threshold or log_threshold(sub.n)
        heavy = [i for i, row in enumerate(sub.zeros) if len(row) >= threshold]
        light = [i for i, row in enumerate(sub.zeros) if len(row) < threshold]
        report.heavy_rows, report.light_rows = len(heavy), len(light)
        c = Circuit(sub.n)
        outputs: list[tuple[int, int]] = []
        for rows, build in ((light, lambda s: _light_core(s, params, report)),
                            (heavy, lambda s: _heavy_core(s, check))):
            if not rows:
                continue
            part = build(sub.select_rows(rows))
            remap = splice(c, part, range(sub.n))
            outputs.extend((rows[label], remap[node]) for label, node in part.outputs)
        for label, node in sorted(outputs):
            c.set_output(label, node)
        return c

    c = _with_empty_rows(a, params.allow_empty_rows, core)
    _finish(report, c, start, a)
    return c, report
