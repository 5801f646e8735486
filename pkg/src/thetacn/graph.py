"""Residue graphs, vertex partitions and odd-graph tests.

Vertices are labelled by integers: ``-1`` for the sign vertex and a prime
``p`` otherwise.  Vertex order is always ``-1`` first (when present), then
the primes ascending.  A vertex subset is an integer bitmask over that
order.

A partition ``{V1, V2}`` is even exactly when ``L @ 1_V1 == 0`` over F_2,
where ``L`` is the Laplace matrix: for ``v`` in ``V1`` the row entry counts
``d_v - #{v -> V1} = #{v -> V2}`` and for ``v`` in ``V2`` it counts
``#{v -> V1}``.  :func:`is_odd_partition` evaluates the arc-count
definition directly; the fast paths use the kernel form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence, Union

from .arith import (
    NotSquareFree,
    SquareClass,
    class_of,
    factor_square_free,
    legendre,
    _unchecked,
)
from .gf2 import MatrixF2, rank_f2

__all__ = [
    "MINUS_ONE",
    "GraphError",
    "EmptyVertexSet",
    "BadInput",
    "TooManyVertices",
    "ResidueGraph",
    "Partition",
    "Side",
    "build_unified",
    "build_goto_G",
    "build_goto_g",
    "build_from_arcs",
    "is_odd_partition",
    "is_even_by_kernel",
    "partition_delta",
    "iter_partitions",
    "even_partition_count",
    "even_partition_count_exhaustive",
    "is_odd_graph",
    "is_odd_graph_exhaustive",
    "check_constrained_oddness",
    "MAX_SWEEP_VERTICES",
]

MINUS_ONE = -1
MAX_SWEEP_VERTICES = 20


class GraphError(ValueError):
    pass


class EmptyVertexSet(GraphError):
    pass


class BadInput(GraphError):
    pass


class TooManyVertices(GraphError):
    pass


def _label_symbol(v: int, p: int) -> int:
    return legendre(-1 if v == MINUS_ONE else v, p)


@dataclass(frozen=True)
class ResidueGraph:
    labels: tuple[int, ...]
    adj: MatrixF2
    source: str

    def __post_init__(self):
        if self.adj.nrows != len(self.labels) or self.adj.ncols != len(self.labels):
            raise ValueError("adjacency shape does not match the vertex count")
        if any(self.adj.rows[i] >> i & 1 for i in range(len(self.labels))):
            raise ValueError("self-loops are not allowed")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: int) -> int:
        return self.labels.index(label)

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs as ``(source_label, target_label)`` in row-major order."""
        out = []
        for i, row in enumerate(self.adj.rows):
            for j in range(self.size):
                if row >> j & 1:
                    out.append((self.labels[i], self.labels[j]))
        return out

    def outdegrees(self) -> list[int]:
        return [r.bit_count() for r in self.adj.rows]

    def laplacian(self) -> MatrixF2:
        """Laplace matrix ``diag(outdegree) - A`` reduced mod 2."""
        rows = tuple(r ^ ((r.bit_count() & 1) << i) for i, r in enumerate(self.adj.rows))
        return MatrixF2(self.size, self.size, rows)

    def mask_of(self, labels: Iterable[int]) -> int:
        return sum(1 << self.index(v) for v in labels)

    def labels_of(self, mask: int) -> frozenset[int]:
        return frozenset(v for i, v in enumerate(self.labels) if mask >> i & 1)

    def d_of(self, mask: int) -> SquareClass:
        """Square class of the product of the labels in ``mask``."""
        negative = False
        support = []
        for i, v in enumerate(self.labels):
            if mask >> i & 1:
                if v == MINUS_ONE:
                    negative = True
                else:
                    support.append(v)
        return _unchecked(negative, sorted(support))

    def to_dot(self) -> str:
        lines = [f'digraph "{self.source}" {{']
        for v in self.labels:
            lines.append(f'  "{v}";')
        for a, b in self.arcs():
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_from_arcs(labels: Sequence[int], arcs: Iterable[tuple[int, int]], source: str = "custom") -> ResidueGraph:
    """Graph on arbitrary integer labels; used for the textbook examples."""
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise BadInput("duplicate vertex labels")
    rows = [0] * len(labels)
    pos = {v: i for i, v in enumerate(labels)}
    for a, b in arcs:
        rows[pos[a]] |= 1 << pos[b]
    return ResidueGraph(labels, MatrixF2(len(labels), len(labels), tuple(rows)), source)


def _vertex_labels(m: SquareClass) -> tuple[int, ...]:
    return ((MINUS_ONE,) if m.negative else ()) + m.support


def _coerce_class(m: Union[int, SquareClass]) -> SquareClass:
    if isinstance(m, SquareClass):
        return m
    if m == 0:
        raise EmptyVertexSet("G(0) is undefined")
    factor_square_free(abs(m))  # raises NotSquareFree
    return class_of(m)


def build_unified(m: Union[int, SquareClass]) -> ResidueGraph:
    """The graph G(m): arc ``p -> v`` when ``p = 1 (mod 3)`` and ``(v/p) = -1``."""
    m = _coerce_class(m)
    labels = _vertex_labels(m)
    if not labels:
        raise EmptyVertexSet("G(1) has no vertices")
    rows = []
    for p in labels:
        row = 0
        if p != MINUS_ONE and p % 3 == 1:
            for j, v in enumerate(labels):
                if v != p and _label_symbol(v, p) == -1:
                    row |= 1 << j
        rows.append(row)
    n = len(labels)
    return ResidueGraph(labels, MatrixF2(n, n, tuple(rows)), f"G({m.representative()})")


def _goto_primes(n: int) -> list[int]:
    if n < 5:
        raise BadInput(f"expected n >= 5 coprime to 6, got {n}")
    try:
        primes = factor_square_free(n)
    except NotSquareFree as exc:
        raise BadInput(str(exc)) from exc
    if primes[0] < 5:
        raise BadInput(f"{n} must be coprime to 6")
    return primes


def build_goto_G(n: int) -> ResidueGraph:
    """Goto's G(-3n) on ``{-1, 3, p_1..p_t}``: arcs out of every p_i, no mod-3 filter."""
    primes = _goto_primes(n)
    labels = (MINUS_ONE, 3, *primes)
    rows = [0, 0]
    for p in primes:
        row = 0
        for j, v in enumerate(labels):
            if v != p and _label_symbol(v, p) == -1:
                row |= 1 << j
        rows.append(row)
    k = len(labels)
    return ResidueGraph(labels, MatrixF2(k, k, tuple(rows)), f"GotoG({-3 * n})")


def build_goto_g(n: int) -> ResidueGraph:
    """Goto's g(n) on ``{-1, p_1..p_t}``; ``p_i`` and ``-1`` are joined both ways when (-1/p_i) = -1."""
    primes = _goto_primes(n)
    labels = (MINUS_ONE, *primes)
    rows = [0] * len(labels)
    for i, p in enumerate(primes, start=1):
        for j, q in enumerate(primes, start=1):
            if q != p and legendre(q, p) == -1:
                rows[i] |= 1 << j
        if legendre(-1, p) == -1:
            rows[i] |= 1
            rows[0] |= 1 << i
    k = len(labels)
    return ResidueGraph(labels, MatrixF2(k, k, tuple(rows)), f"Gotog({n})")


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class Partition:
    """Unordered split of ``size`` vertices; ``side1`` never contains vertex 0."""

    size: int
    side1: int = 0

    def __post_init__(self):
        full = (1 << self.size) - 1
        s = self.side1 & full
        if s & 1:
            s ^= full
        object.__setattr__(self, "side1", s)

    @property
    def side2(self) -> int:
        return ((1 << self.size) - 1) ^ self.side1

    def is_trivial(self) -> bool:
        return self.side1 == 0

    @classmethod
    def of(cls, g: ResidueGraph, labels: Iterable[int]) -> "Partition":
        return cls(g.size, g.mask_of(labels))


def partition_delta(a: Partition, b: Partition) -> Partition:
    if a.size != b.size:
        raise ValueError("partitions of different vertex sets")
    return Partition(a.size, a.side1 ^ b.side1)


def iter_partitions(size: int) -> Iterator[Partition]:
    """All ``2^(size-1)`` partitions, trivial first."""
    for half in range(1 << max(size - 1, 0)):
        yield Partition(size, half << 1)


def is_odd_partition(g: ResidueGraph, pi: Partition) -> bool:
    """Direct arc-count test: some vertex sends an odd number of arcs across."""
    if pi.size != g.size:
        raise ValueError("partition does not match the graph")
    s1 = pi.side1
    s2 = pi.side2
    for i, row in enumerate(g.adj.rows):
        other = s2 if s1 >> i & 1 else s1
        if (row & other).bit_count() % 2:
            return True
    return False


def is_even_by_kernel(lap_rows: Sequence[int], mask: int) -> bool:
    for r in lap_rows:
        if (r & mask).bit_count() & 1:
            return False
    return True


def even_partition_count(g: ResidueGraph) -> int:
    """Number of even partitions, ``2^(m - rank L - 1)``."""
    return 1 << (g.size - rank_f2(g.laplacian()) - 1)


def _check_sweep(g: ResidueGraph) -> None:
    if g.size > MAX_SWEEP_VERTICES:
        raise TooManyVertices(f"{g.size} vertices exceeds the sweep cap of {MAX_SWEEP_VERTICES}")


def even_partition_count_exhaustive(g: ResidueGraph) -> int:
    _check_sweep(g)
    return sum(1 for pi in iter_partitions(g.size) if not is_odd_partition(g, pi))


def is_odd_graph(g: ResidueGraph) -> bool:
    return rank_f2(g.laplacian()) == g.size - 1


def is_odd_graph_exhaustive(g: ResidueGraph) -> bool:
    _check_sweep(g)
    return all(is_odd_partition(g, pi) for pi in iter_partitions(g.size) if not pi.is_trivial())


class Side(NamedTuple):
    """One side of a partition as seen by a filter."""

    labels: frozenset[int]
    d: SquareClass


PartitionFilter = Callable[[Side, Side], bool]


def check_constrained_oddness(
    g: ResidueGraph,
    accept: PartitionFilter,
    exceptions: Iterable[Iterable[int]] = (),
) -> bool:
    """True iff every nontrivial partition selected by ``accept`` is odd.

    A partition is selected when ``accept(side, other)`` holds for either
    orientation of its two sides, and it is skipped when either side equals
    one of ``exceptions`` (given as label sets).
    """
    _check_sweep(g)
    excluded = {g.mask_of(e) for e in exceptions}
    lap = g.laplacian().rows
    full = (1 << g.size) - 1
    for pi in iter_partitions(g.size):
        s1 = pi.side1
        if s1 == 0 or s1 in excluded or (full ^ s1) in excluded:
            continue
        if is_even_by_kernel(lap, s1):
            a = Side(g.labels_of(s1), g.d_of(s1))
            b = Side(g.labels_of(full ^ s1), g.d_of(full ^ s1))
            if accept(a, b) or accept(b, a):
                return False
    return True
