"""Shared fixtures-by-function, generators and oracles for the test suite."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from semicirc.circuit import Circuit, prune
from semicirc.matrix import Matrix01, random_sparse_zeros

# worked example: 3 x 5 matrix and a 4-gate circuit for it
EXAMPLE_ROWS = ("1 1 1 1 0", "0 1 1 1 1", "0 0 0 1 1")
EXAMPLE_MATRIX = Matrix01.from_dense([[int(v) for v in row.split()] for row in EXAMPLE_ROWS])
EXAMPLE_TEXT = """semicirc v1
inputs 5
gates 4
g0: x1 x2 x3
g1: x0 g0
g2: g0 x4
g3: x3 x4
outputs 3
out 0 g1
out 1 g2
out 2 g3
"""


def example_circuit() -> Circuit:
    c = Circuit(5)
    g0 = c.add_gate([1, 2, 3])
    c.set_output(0, c.add_gate([0, g0]))
    c.set_output(1, c.add_gate([g0, 4]))
    c.set_output(2, c.add_gate([3, 4]))
    return c


def random_case(rng: random.Random, n_max: int = 40, m_max: int = 40,
                zeros_factor: int = 4, allow_empty: bool = False) -> Matrix01:
    """Random matrix with n in [2, n_max], m in [1, m_max], z in [0, zeros_factor * n]."""
    n = rng.randint(2, n_max)
    m = rng.randint(1, m_max)
    cap = m * n if allow_empty else m * (n - 1)
    z = min(cap, rng.randint(0, zeros_factor * n))
    return random_sparse_zeros(m, n, z, rng, allow_empty_rows=allow_empty)


@st.composite
def matrices(draw, n_max: int = 24, m_max: int = 24, allow_empty: bool = False) -> Matrix01:
    n = draw(st.integers(1 if allow_empty else 2, n_max))
    m = draw(st.integers(1, m_max))
    rows = []
    for _ in range(m):
        row = draw(st.sets(st.integers(0, n - 1), max_size=n if allow_empty else n - 1))
        rows.append(tuple(sorted(row)))
    return Matrix01(m, n, tuple(rows))


def random_regular_circuit(rng: random.Random, n: int, m: int) -> Circuit:
    """Random circuit with exactly one path per (output, input) pair it connects.

    Gates only combine nodes with pairwise disjoint supports, which keeps
    every path unique.  Every input ends up feeding some wire.
    """
    c = Circuit(n)
    support: list[frozenset[int]] = [frozenset([j]) for j in range(n)]
    pool = list(range(n))
    for _ in range(rng.randint(0, 2 * n)):
        picks = _disjoint_pick(rng, pool, support, rng.randint(2, 3))
        if picks is None:
            continue
        node = c.add_gate(picks)
        support.append(frozenset().union(*(support[p] for p in picks)))
        pool.append(node)
    used: set[int] = set()
    outs: list[list[int]] = []
    for _ in range(m):
        picks = _disjoint_pick(rng, pool, support, rng.randint(1, 3)) or [rng.choice(pool)]
        outs.append(picks)
        used.update(*(support[p] for p in picks))
    for j in range(n):
        # give every input a consumer; j is not in that output's support yet
        if j not in used:
            free = [k for k, ops in enumerate(outs)
                    if j not in frozenset().union(*(support[p] for p in ops))]
            outs[rng.choice(free)].append(j)
            used.add(j)
    for label, ops in enumerate(outs):
        c.set_output(label, c.add_gate(sorted(ops)))
    return prune(c)


def _disjoint_pick(rng, pool, support, k):
    for _ in range(20):
        picks = rng.sample(pool, min(k, len(pool)))
        seen: set[int] = set()
        ok = True
        for p in picks:
            if seen & support[p]:
                ok = False
                break
            seen |= support[p]
        if ok:
            return sorted(picks)
    return None


def node_intervals(c: Circuit) -> list[tuple[int, int] | None]:
    """Word oracle for range schemes: (l, r) if a node's word is x_l x_{l+1} .. x_r, else None."""
    out: list[tuple[int, int] | None] = [(j, j) for j in range(c.n_inputs)]
    for ops in c.gates:
        spans = [out[o] for o in ops]
        ok = all(s is not None for s in spans) and all(
            a[1] + 1 == b[0] for a, b in zip(spans, spans[1:]))
        out.append((spans[0][0], spans[-1][1]) if ok else None)
    return out


def plan_interval(intervals, parts) -> tuple[int, int] | None:
    spans = [intervals[p] for p in parts]
    if any(s is None for s in spans):
        return None
    if any(a[1] + 1 != b[0] for a, b in zip(spans, spans[1:])):
        return None
    return spans[0][0], spans[-1][1]
