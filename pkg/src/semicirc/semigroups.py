"""Semigroup instances used to evaluate circuits.

A :class:`SemigroupInstance` is an immutable descriptor: a name, a binary
operation and the algebraic flags that tests rely on.  Two instances are
special: ``multiset`` is the free commutative semigroup on the generators
``x0, x1, ...`` and ``word`` is the free semigroup.  Evaluating a circuit
over them shows exactly which variables (and in which order) an output
depends on, so they serve as correctness oracles for every construction.

Variable indices are 0-based everywhere.
"""
from __future__ import annotations

import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import EmptyProductError, FormatError


class Multiset(Mapping):
    """Element of the free commutative semigroup: variable -> multiplicity."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        data: dict[int, int] = {}
        for var, mult in items:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                data[var] = data.get(var, 0) + mult
        self._counts = dict(sorted(data.items()))
        self._hash = None

    @classmethod
    def generator(cls, var: int) -> "Multiset":
        return cls({var: 1})

    def __getitem__(self, var: int) -> int:
        return self._counts[var]

    def __iter__(self) -> Iterator[int]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __add__(self, other: "Multiset") -> "Multiset":
        merged = dict(self._counts)
        for var, mult in other._counts.items():
            merged[var] = merged.get(var, 0) + mult
        return Multiset(merged)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return "{" + ",".join(f"x{k}:{v}" for k, v in self._counts.items()) + "}"

    def support(self) -> frozenset[int]:
        return frozenset(self._counts)

    def substitute(self, values: Sequence[Any], op: Callable[[Any, Any], Any]) -> Any:
        """Image under the homomorphism sending ``x_j`` to ``values[j]``.

        Only valid when ``op`` is commutative; that is what freeness buys.
        """
        acc = None
        for var, mult in self._counts.items():
            for _ in range(mult):
                acc = values[var] if acc is None else op(acc, values[var])
        if acc is None:
            raise EmptyProductError("empty multiset has no image in a semigroup")
        return acc


@dataclass(frozen=True)
class Word:
    """Element of the free semigroup: a sequence of variable indices."""

    letters: tuple[int, ...]

    @classmethod
    def generator(cls, var: int) -> "Word":
        return cls((var,))

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(f"x{v}" for v in self.letters)


class Graph(NamedTuple):
    """Directed graph value: vertex set and edge set."""

    vertices: frozenset
    edges: frozenset

    @classmethod
    def vertex(cls, v: Any) -> "Graph":
        return cls(frozenset([v]), frozenset())

    def overlay(self, other: "Graph") -> "Graph":
        return Graph(self.vertices | other.vertices, self.edges | other.edges)

    def connect(self, other: "Graph") -> "Graph":
        cross = frozenset((u, v) for u in self.vertices for v in other.vertices)
        return Graph(self.vertices | other.vertices, self.edges | other.edges | cross)


EMPTY_GRAPH = Graph(frozenset(), frozenset())


@dataclass(frozen=True)
class SemigroupInstance:
    name: str
    op: Callable[[Any, Any], Any]
    commutative: bool
    idempotent: bool
    carrier: str = ""
    sample: Callable[[random.Random], Any] = field(default=None, repr=False, compare=False)
    parse: Callable[[str], Any] = field(default=None, repr=False, compare=False)
    format: Callable[[Any], str] = field(default=str, repr=False, compare=False)
    generator: Callable[[int], Any] | None = field(default=None, repr=False, compare=False)


def combine(s: SemigroupInstance, a: Any, b: Any) -> Any:
    return s.op(a, b)


def fold_ordered(s: SemigroupInstance, items: Iterable[Any]) -> Any:
    """Left-to-right product ``((i0 . i1) . i2) ...``; operand order is kept."""
    it = iter(items)
    try:
        acc = next(it)
    except StopIteration:
        raise EmptyProductError(f"empty product in semigroup {s.name!r}") from None
    op = s.op
    for item in it:
        acc = op(acc, item)
    return acc


# --- value syntax used by the CLI -------------------------------------------

def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"expected an integer, got {text!r}") from None


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "t"):
        return True
    if low in ("0", "false", "f"):
        return False
    raise FormatError(f"expected a boolean (0/1), got {text!r}")


def _format_bool(v: bool) -> str:
    return "1" if v else "0"


def _parse_var(token: str) -> int:
    token = token.strip()
    if not token.startswith("x"):
        raise FormatError(f"expected a generator like x3, got {token!r}")
    return _parse_int(token[1:])


def _parse_multiset(text: str) -> Multiset:
    text = text.strip().strip("{}")
    counts: dict[int, int] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        var, _, mult = part.partition(":")
        v = _parse_var(var)
        counts[v] = counts.get(v, 0) + (_parse_int(mult) if mult else 1)
    if not counts:
        raise FormatError("empty multiset is not a semigroup element")
    return Multiset(counts)


def _parse_word(text: str) -> Word:
    letters = tuple(_parse_var(tok) for tok in text.split())
    if not letters:
        raise FormatError("empty word is not a semigroup element")
    return Word(letters)


def _parse_avg(text: str) -> tuple[int, int]:
    total, sep, count = text.partition(",")
    if not sep:
        raise FormatError(f"expected 'total,count', got {text!r}")
    return (_parse_int(total), _parse_int(count))


def _parse_graph(text: str) -> Graph:
    return Graph.vertex(_parse_int(text))


def _format_graph(g: Graph) -> str:
    vs = " ".join(str(v) for v in sorted(g.vertices))
    es = " ".join(f"{u}>{v}" for u, v in sorted(g.edges))
    return f"V={{{vs}}} E={{{es}}}"


def _format_avg(v: tuple[int, int]) -> str:
    return f"{v[0]},{v[1]}"


def _tropical_min(a, b):
    return a if a <= b else b


def _parse_tropical(text: str):
    if text.strip().lower() in ("inf", "+inf"):
        return math.inf
    return _parse_int(text)


def _format_tropical(v) -> str:
    return "inf" if v == math.inf else str(v)


# --- samplers for property tests ---------------------------------------------

def _small_int(rng: random.Random) -> int:
    return rng.randint(-50, 50)


def _tropical_sample(rng: random.Random):
    return math.inf if rng.random() < 0.1 else rng.randint(-50, 50)


def _multiset_sample(rng: random.Random) -> Multiset:
    return Multiset({rng.randrange(6): rng.randint(1, 3) for _ in range(rng.randint(1, 4))})


def _word_sample(rng: random.Random) -> Word:
    return Word(tuple(rng.randrange(4) for _ in range(rng.randint(1, 4))))


def _graph_sample(rng: random.Random) -> Graph:
    vs = frozenset(rng.sample(range(6), rng.randint(0, 4)))
    pool = sorted(vs)
    es = frozenset((rng.choice(pool), rng.choice(pool)) for _ in range(rng.randint(0, 4))) if pool else frozenset()
    return Graph(vs, es)


def _avg_op(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return (a[0] + b[0], a[1] + b[1])


def _avg_sample(rng: random.Random) -> tuple[int, int]:
    return (rng.randint(-100, 100), rng.randint(1, 5))


INT_SUM = SemigroupInstance(
    "int-sum", lambda a, b: a + b, True, False, "integers (arbitrary precision)",
    _small_int, _parse_int, str)
INT_MIN = SemigroupInstance(
    "int-min", min, True, True, "integers", _small_int, _parse_int, str)
INT_MAX = SemigroupInstance(
    "int-max", max, True, True, "integers", _small_int, _parse_int, str)
BOOL_OR = SemigroupInstance(
    "bool-or", lambda a, b: a or b, True, True, "booleans",
    lambda rng: rng.random() < 0.5, _parse_bool, _format_bool)
BOOL_AND = SemigroupInstance(
    "bool-and", lambda a, b: a and b, True, True, "booleans",
    lambda rng: rng.random() < 0.5, _parse_bool, _format_bool)
TROPICAL_MIN = SemigroupInstance(
    "tropical-min", _tropical_min, True, True, "integers plus +inf",
    _tropical_sample, _parse_tropical, _format_tropical)
AVG = SemigroupInstance(
    "avg", _avg_op, True, False, "(total, count) integer pairs",
    _avg_sample, _parse_avg, _format_avg)
GRAPH_OVERLAY = SemigroupInstance(
    "graph-overlay", Graph.overlay, True, True, "directed graphs (V, E)",
    _graph_sample, _parse_graph, _format_graph, Graph.vertex)
MULTISET = SemigroupInstance(
    "multiset", Multiset.__add__, True, False, "multisets of generators",
    _multiset_sample, _parse_multiset, repr, Multiset.generator)
WORD = SemigroupInstance(
    "word", Word.__add__, False, False, "words over generators",
    _word_sample, _parse_word, str, Word.generator)


def catalog() -> list[SemigroupInstance]:
    return [INT_SUM, INT_MIN, INT_MAX, BOOL_OR, BOOL_AND, TROPICAL_MIN,
            AVG, GRAPH_OVERLAY, MULTISET, WORD]


def get_instance(name: str) -> SemigroupInstance:
    for inst in catalog():
        if inst.name == name:
            return inst
    raise KeyError(f"unknown semigroup {name!r}")


# names accepted on the command line
CLI_NAMES = ("int-sum", "int-min", "int-max", "bool-or", "bool-and", "avg",
             "multiset", "word", "graph-overlay")
