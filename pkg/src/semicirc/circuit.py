"""Computation DAGs over a semigroup.

Nodes are plain integers.  The first ``n_inputs`` node ids are the input
variables ``x0 .. x{n-1}``; gate ``k`` (0-based, in creation order) is node
``n_inputs + k``.  A gate lists its operands in order and computes their
left-to-right product, so operand order matters for non-commutative
semigroups.  Operands always precede the gate, which keeps every circuit
acyclic and its gate list topologically sorted.

The size of a circuit is its number of wires (sum of fan-ins); the gate
count is reported alongside.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import (CircuitError, FormatError, InvalidOperandError, NotRegularError,
                     ShapeMismatchError)
from .matrix import Matrix01
from .semigroups import SemigroupInstance, fold_ordered

HEADER = "semicirc v1"
VIRTUAL_DIRECTIVE = "# virtual-input"

ZERO, ONE, MANY = 0, 1, 2


@dataclass
class Circuit:
    n_inputs: int
    gates: list[tuple[int, ...]] = field(default_factory=list)
    outputs: list[tuple[int, int]] = field(default_factory=list)
    # index of the appended all-one column, if the circuit has one
    virtual_input: int | None = None

    def __post_init__(self):
        if self.n_inputs < 0:
            raise CircuitError("negative input count")
        self._output_nodes = {node for _, node in self.outputs}
        self._labels = {label for label, _ in self.outputs}

    # -- construction -------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return self.n_inputs + len(self.gates)

    def input(self, j: int) -> int:
        if not 0 <= j < self.n_inputs:
            raise InvalidOperandError(f"input x{j} out of range (n_inputs={self.n_inputs})")
        return j

    def is_input(self, node: int) -> bool:
        return node < self.n_inputs

    def gate_index(self, node: int) -> int:
        return node - self.n_inputs

    def node_of_gate(self, k: int) -> int:
        return self.n_inputs + k

    def add_gate(self, operands: Iterable[int]) -> int:
        """Append a gate and return its node id (gate index is ``node - n_inputs``)."""
        ops = tuple(operands)
        if not ops:
            raise InvalidOperandError("a gate needs at least one operand")
        limit = self.num_nodes
        for op in ops:
            if not 0 <= op < limit:
                raise InvalidOperandError(f"operand {self.ref_name(op)} is not an input or earlier gate")
            if op in self._output_nodes:
                raise InvalidOperandError(f"operand {self.ref_name(op)} is an output gate")
        self.gates.append(ops)
        return limit

    def set_output(self, label: int, node: int) -> None:
        if node < self.n_inputs or node >= self.num_nodes:
            raise InvalidOperandError(f"output must reference a gate, got {self.ref_name(node)}")
        if label in self._labels:
            raise CircuitError(f"duplicate output label {label}")
        if node in self._output_nodes:
            raise CircuitError(f"{self.ref_name(node)} is already an output")
        self.outputs.append((label, node))
        self._labels.add(label)
        self._output_nodes.add(node)

    def ref_name(self, node: int) -> str:
        if node < 0:
            return str(node)
        if node < self.n_inputs:
            return f"x{node}"
        return f"g{node - self.n_inputs}"

    # -- accounting ---------------------------------------------------------

    @property
    def wires(self) -> int:
        return sum(len(g) for g in self.gates)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def fan_out(self) -> list[int]:
        deg = [0] * self.num_nodes
        for ops in self.gates:
            for op in ops:
                deg[op] += 1
        return deg

    def output_map(self) -> dict[int, int]:
        return dict(self.outputs)

    def validate(self) -> None:
        """Check the invariants that construction cannot enforce on its own."""
        deg = self.fan_out()
        for label, node in self.outputs:
            if deg[node]:
                raise CircuitError(f"output {label} ({self.ref_name(node)}) has out-degree {deg[node]}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.n_inputs == other.n_inputs and self.gates == other.gates
                and self.outputs == other.outputs and self.virtual_input == other.virtual_input)

    def copy(self) -> "Circuit":
        return Circuit(self.n_inputs, list(self.gates), list(self.outputs), self.virtual_input)


def evaluate(c: Circuit, s: SemigroupInstance, assignment: Sequence[Any]) -> dict[int, Any]:
    """Value of every output, keyed by label."""
    if len(assignment) != c.n_inputs:
        raise ShapeMismatchError(f"expected {c.n_inputs} input values, got {len(assignment)}")
    values: list[Any] = list(assignment)
    op = s.op
    for ops in c.gates:
        acc = values[ops[0]]
        for o in ops[1:]:
            acc = op(acc, values[o])
        values.append(acc)
    return {label: values[node] for label, node in c.outputs}


def evaluate_generators(c: Circuit, s: SemigroupInstance) -> dict[int, Any]:
    """Evaluate over a free object with ``x_j`` mapped to the ``j``-th generator."""
    if s.generator is None:
        raise ValueError(f"semigroup {s.name!r} has no generators")
    return evaluate(c, s, [s.generator(j) for j in range(c.n_inputs)])


def node_words(c: Circuit, s: SemigroupInstance, assignment: Sequence[Any]) -> list[Any]:
    """Value at every node (inputs then gates), for scheme inspection."""
    values: list[Any] = list(assignment)
    for ops in c.gates:
        values.append(fold_ordered(s, (values[o] for o in ops)))
    return values


# -- structural transforms ----------------------------------------------------

def to_binary(c: Circuit) -> Circuit:
    """Replace every gate of fan-in k > 2 by a left-leaning chain of k-1 binary gates."""
    out = Circuit(c.n_inputs, virtual_input=c.virtual_input)
    remap = list(range(c.n_inputs))
    for ops in c.gates:
        ops = [remap[o] for o in ops]
        if len(ops) <= 2:
            remap.append(out.add_gate(ops))
            continue
        cur = out.add_gate(ops[:2])
        for o in ops[2:]:
            cur = out.add_gate((cur, o))
        remap.append(cur)
    for label, node in c.outputs:
        out.set_output(label, remap[node])
    return out


def prune(c: Circuit) -> Circuit:
    """Drop gates from which no output is reachable; indices stay dense and ordered."""
    live = [False] * c.num_nodes
    for _, node in c.outputs:
        live[node] = True
    n = c.n_inputs
    for k in range(len(c.gates) - 1, -1, -1):
        if live[n + k]:
            for o in c.gates[k]:
                live[o] = True
    out = Circuit(n, virtual_input=c.virtual_input)
    remap = list(range(n)) + [-1] * len(c.gates)
    for k, ops in enumerate(c.gates):
        if live[n + k]:
            remap[n + k] = out.add_gate(remap[o] for o in ops)
    for label, node in c.outputs:
        out.set_output(label, remap[node])
    return out


def has_dead_gates(c: Circuit) -> bool:
    deg = c.fan_out()
    outs = {node for _, node in c.outputs}
    return any(deg[c.n_inputs + k] == 0 and c.n_inputs + k not in outs
               for k in range(len(c.gates)))


def splice(target: Circuit, source: Circuit, input_map: Sequence[int]) -> list[int]:
    """Copy all gates of ``source`` into ``target``; returns source node -> target node.

    ``input_map[j]`` is the target node standing for source input ``j``.
    Outputs are not copied.
    """
    if len(input_map) != source.n_inputs:
        raise ShapeMismatchError("input map does not cover every source input")
    remap = list(input_map)
    for ops in source.gates:
        remap.append(target.add_gate(remap[o] for o in ops))
    return remap


def eliminate_inputs(c: Circuit, drop: Iterable[int]) -> Circuit:
    """Remove inputs as if they were substituted by a neutral element.

    Dropped operands vanish from every gate; gates left without operands
    vanish too, and non-output gates left with one operand become aliases.
    Kept inputs are renumbered densely in their original order.
    """
    dropped = set(drop)
    keep = [j for j in range(c.n_inputs) if j not in dropped]
    out = Circuit(len(keep))
    if c.virtual_input is not None and c.virtual_input not in dropped:
        out.virtual_input = keep.index(c.virtual_input)
    remap: list[int | None] = [None] * c.num_nodes
    for new, j in enumerate(keep):
        remap[j] = new
    outs = c.output_map()
    out_nodes = set(outs.values())
    for k, ops in enumerate(c.gates):
        node = c.n_inputs + k
        new_ops = [remap[o] for o in ops if remap[o] is not None]
        if not new_ops:
            if node in out_nodes:
                raise CircuitError(f"output gate {c.ref_name(node)} depends only on dropped inputs")
            continue
        if len(new_ops) == 1 and node not in out_nodes:
            remap[node] = new_ops[0]
        else:
            remap[node] = out.add_gate(new_ops)
    for label, node in c.outputs:
        out.set_output(label, remap[node])
    return out


def reverse(c: Circuit, check: bool = True) -> Circuit:
    """Flip every wire: outputs become inputs (by label) and inputs become outputs.

    For a regular circuit over a commutative semigroup computing ``A`` the
    result computes the transpose of ``A``.  Wire count is preserved.
    """
    labels = sorted(label for label, _ in c.outputs)
    if labels != list(range(len(labels))):
        raise ShapeMismatchError("output labels must be exactly 0..m-1 to reverse")
    if has_dead_gates(c):
        raise CircuitError("circuit has dead gates; prune it before reversing")
    deg = c.fan_out()
    for j in range(c.n_inputs):
        if deg[j] == 0:
            raise CircuitError(f"input x{j} feeds no wire; reversal would leave an empty output")
    if check:
        mult = path_multiplicity(c)
        if (mult.matrix == MANY).any():
            raise NotRegularError("some input reaches an output along several paths")

    consumers: list[list[int]] = [[] for _ in range(c.num_nodes)]
    for k, ops in enumerate(c.gates):
        for o in ops:
            consumers[o].append(c.n_inputs + k)

    outs = c.output_map()
    out_label = {node: label for label, node in outs.items()}
    rev = Circuit(len(labels))
    remap: dict[int, int] = {node: label for node, label in out_label.items()}
    n = c.n_inputs
    for k in range(len(c.gates) - 1, -1, -1):
        node = n + k
        if node in out_label:
            continue
        remap[node] = rev.add_gate(remap[u] for u in consumers[node])
    for j in range(n):
        rev.set_output(j, rev.add_gate(remap[u] for u in consumers[j]))
    return rev


def structural_key(c: Circuit, ordered: bool = True) -> tuple:
    """Numbering-independent fingerprint of the DAG, its gate multiset and its outputs.

    Each node is named by a hash of its operands' names, so two circuits get
    the same key exactly when they differ only in how gates are numbered and
    ordered.  With ``ordered=False`` operand order is ignored as well.
    """
    names = [f"x{j}" for j in range(c.n_inputs)]
    for ops in c.gates:
        parts = [names[o] for o in ops]
        if not ordered:
            parts.sort()
        names.append(hashlib.blake2b(",".join(parts).encode(), digest_size=12).hexdigest())
    gates = Counter(names[c.n_inputs:])
    return (c.n_inputs, tuple(sorted(gates.items())),
            tuple(sorted((label, names[node]) for label, node in c.outputs)))


# -- path counting and the multiset oracle -------------------------------------

def count_paths(c: Circuit, cap: int, chunk: int | None = None) -> tuple[list[int], np.ndarray]:
    """Number of input->output paths, saturated at ``cap``.

    Returns ``(labels, counts)`` where ``counts[r, j]`` belongs to output
    ``labels[r]`` and input ``j``.  The path count equals the multiplicity of
    ``x_j`` when the circuit is evaluated over the free commutative
    semigroup, so this doubles as a vectorised multiset oracle.
    Inputs are processed in column chunks to bound memory.
    """
    labels = [label for label, _ in c.outputs]
    m, n = len(labels), c.n_inputs
    dtype = np.int8 if cap <= 100 else np.int64
    result = np.zeros((m, n), dtype=dtype)
    if m == 0 or n == 0:
        return labels, result
    last_use = list(range(c.num_nodes))
    base = c.n_inputs
    for k, ops in enumerate(c.gates):
        for o in ops:
            last_use[o] = base + k
    out_nodes = {node: r for r, (_, node) in enumerate(c.outputs)}
    if chunk is None:
        chunk = max(64, min(n, (1 << 24) // max(1, c.num_nodes)))
    for start in range(0, n, chunk):
        width = min(chunk, n - start)
        vals: list[np.ndarray | None] = [None] * c.num_nodes
        for j in range(start, start + width):
            v = np.zeros(width, dtype=dtype)
            v[j - start] = 1
            vals[j] = v
        for k, ops in enumerate(c.gates):
            node = base + k
            acc = None
            for o in ops:
                v = vals[o]
                if v is None:
                    continue
                if acc is None:
                    acc = v.copy()
                else:
                    np.add(acc, v, out=acc)
                    np.minimum(acc, cap, out=acc)
            vals[node] = acc
            for o in ops:
                if last_use[o] == node and o not in out_nodes:
                    vals[o] = None
        for node, r in out_nodes.items():
            if vals[node] is not None:
                result[r, start:start + width] = vals[node]
    return labels, result


@dataclass
class PathMultiplicity:
    """Per (output label, input) classification into ZERO / ONE / MANY paths."""

    labels: list[int]
    matrix: np.ndarray

    def __getitem__(self, key: tuple[int, int]) -> int:
        label, j = key
        return int(self.matrix[self.labels.index(label), j])

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(label, j): int(v) for r, label in enumerate(self.labels)
                for j, v in enumerate(self.matrix[r])}


def path_multiplicity(c: Circuit) -> PathMultiplicity:
    labels, counts = count_paths(c, cap=MANY)
    return PathMultiplicity(labels, counts)


def expected_support(a: Matrix01, virtual_input: bool = False) -> np.ndarray:
    """Dense 0/1 target for a circuit computing ``a`` (optionally with the all-one column)."""
    dense = a.to_dense()
    if virtual_input:
        extra = np.zeros((a.m, 1), dtype=dense.dtype)
        for i in a.empty_rows():
            extra[i, 0] = 1
        dense = np.hstack([dense, extra])
    return dense


def _aligned(c: Circuit, a: Matrix01, counts: np.ndarray, labels: list[int]) -> np.ndarray:
    if sorted(labels) != list(range(a.m)):
        raise ShapeMismatchError(f"output labels do not match the {a.m} rows of the matrix")
    virtual = c.virtual_input is not None
    if c.n_inputs != a.n + (1 if virtual else 0):
        raise ShapeMismatchError(f"circuit has {c.n_inputs} inputs, matrix has {a.n} columns")
    order = np.argsort(labels)
    return counts[order]


def is_regular(c: Circuit, a: Matrix01) -> bool:
    """True iff exactly one path joins input j to output i wherever A[i, j] = 1, none elsewhere."""
    mult = path_multiplicity(c)
    got = _aligned(c, a, mult.matrix, mult.labels)
    return bool(np.array_equal(got, expected_support(a, c.virtual_input is not None)))


@dataclass
class Mismatch:
    row: int
    column: int
    multiplicity: int
    expected: int


def find_mismatch(c: Circuit, a: Matrix01) -> Mismatch | None:
    """First (row, column) whose multiset-oracle multiplicity differs from A, if any."""
    labels, counts = count_paths(c, cap=1 << 40)
    got = _aligned(c, a, counts, labels)
    want = expected_support(a, c.virtual_input is not None)
    bad = np.argwhere(got != want)
    if len(bad) == 0:
        return None
    i, j = (int(v) for v in bad[0])
    return Mismatch(i, j, int(got[i, j]), int(want[i, j]))


# -- text format ----------------------------------------------------------------

def serialize(c: Circuit) -> str:
    lines = [HEADER]
    if c.virtual_input is not None:
        lines.append(f"{VIRTUAL_DIRECTIVE} x{c.virtual_input}")
    lines.append(f"inputs {c.n_inputs}")
    lines.append(f"gates {len(c.gates)}")
    for k, ops in enumerate(c.gates):
        lines.append(f"g{k}: " + " ".join(c.ref_name(o) for o in ops))
    lines.append(f"outputs {len(c.outputs)}")
    for label, node in c.outputs:
        lines.append(f"out {label} {c.ref_name(node)}")
    return "\n".join(lines) + "\n"


def _count(line: str, keyword: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"expected '{keyword} <count>'", lineno)
    try:
        value = int(parts[1])
    except ValueError:
        raise FormatError(f"bad count {parts[1]!r}", lineno) from None
    if value < 0:
        raise FormatError(f"negative count {value}", lineno)
    return value


def _ref(token: str, n_inputs: int, n_gates_before: int, lineno: int) -> int:
    kind, digits = token[:1], token[1:]
    if kind not in ("x", "g") or not digits.isdigit():
        raise FormatError(f"bad reference {token!r}", lineno)
    idx = int(digits)
    if kind == "x":
        if idx >= n_inputs:
            raise FormatError(f"input {token} out of range", lineno)
        return idx
    if idx >= n_gates_before:
        raise FormatError(f"reference {token} is not an earlier gate", lineno)
    return n_inputs + idx


def parse(text: str) -> Circuit:
    virtual: int | None = None
    lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith(VIRTUAL_DIRECTIVE):
            token = stripped[len(VIRTUAL_DIRECTIVE):].strip()
            if not token.startswith("x") or not token[1:].isdigit():
                raise FormatError(f"bad virtual-input directive {stripped!r}", lineno)
            virtual = int(token[1:])
            continue
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    it = iter(lines)

    def take(what: str) -> tuple[int, str]:
        try:
            return next(it)
        except StopIteration:
            last = lines[-1][0] if lines else 0
            raise FormatError(f"unexpected end of file, expected {what}", last + 1) from None

    lineno, line = take("header")
    if line != HEADER:
        raise FormatError(f"expected header {HEADER!r}", lineno)
    lineno, line = take("inputs line")
    n_inputs = _count(line, "inputs", lineno)
    if virtual is not None and virtual >= n_inputs:
        raise FormatError(f"virtual input x{virtual} out of range", lineno)
    lineno, line = take("gates line")
    n_gates = _count(line, "gates", lineno)
    c = Circuit(n_inputs, virtual_input=virtual)
    for k in range(n_gates):
        lineno, line = take(f"gate g{k}")
        head, sep, body = line.partition(":")
        if not sep or head.strip() != f"g{k}":
            raise FormatError(f"expected definition of g{k}", lineno)
        tokens = body.split()
        if not tokens:
            raise FormatError(f"gate g{k} has no operands", lineno)
        c.gates.append(tuple(_ref(t, n_inputs, k, lineno) for t in tokens))
    lineno, line = take("outputs line")
    n_out = _count(line, "outputs", lineno)
    deg = c.fan_out()
    seen_nodes: set[int] = set()
    for _ in range(n_out):
        lineno, line = take("output line")
        parts = line.split()
        if len(parts) != 3 or parts[0] != "out":
            raise FormatError("expected 'out <label> g<k>'", lineno)
        if not parts[1].isdigit():
            raise FormatError(f"bad output label {parts[1]!r}", lineno)
        label = int(parts[1])
        if label >= n_out:
            raise FormatError(f"output label {label} outside 0..{n_out - 1}", lineno)
        if not parts[2].startswith("g"):
            raise FormatError("outputs must reference gates", lineno)
        node = _ref(parts[2], n_inputs, n_gates, lineno)
        if label in c._labels:
            raise FormatError(f"duplicate output label {label}", lineno)
        if node in seen_nodes:
            raise FormatError(f"{parts[2]} is already an output", lineno)
        if deg[node]:
            raise FormatError(f"output gate {parts[2]} has out-degree {deg[node]}", lineno)
        seen_nodes.add(node)
        c.set_output(label, node)
    extra = next(it, None)
    if extra is not None:
        raise FormatError(f"unexpected trailing content {extra[1]!r}", extra[0])
    return c
