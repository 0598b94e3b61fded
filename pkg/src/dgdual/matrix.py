"""Binary relation matrices, labelled directed multigraphs and their basic invariants.

A :class:`BinaryMatrix` is the object every other module works on.  The same
square 0/1 matrix is read either as the vertex adjacency matrix of a digraph
``G`` (one vertex per label) or as the edge adjacency matrix of a digraph ``H``
(one edge per label).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, MalformedInput, OrderTooSmall

__all__ = [
    "BinaryMatrix",
    "Vertex",
    "Edge",
    "Digraph",
    "parse_matrix",
    "serialize_matrix",
    "row_col_sums",
    "minor",
    "weak_components",
    "cyclomatic_number",
    "digraph_components",
    "circuit_rank",
    "digraph_from_vertex_matrix",
    "edge_adjacency_of",
]

_BAD_LABEL = re.compile(r"[\s,]")


def _check_labels(labels: Sequence[str], what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    for lab in labels:
        if not lab or _BAD_LABEL.search(lab):
            raise MalformedInput(f"invalid {what} label {lab!r}")
    if len(set(labels)) != len(labels):
        raise MalformedInput(f"duplicate {what} labels")
    return labels


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """Square 0/1 matrix with labelled rows and columns.

    ``col_labels`` is only set for minors, where deleting row ``i`` and
    column ``j`` leaves different label sets on the two axes.  Relation
    matrices (the normal case) share one label sequence.
    """

    labels: tuple[str, ...]
    cells: np.ndarray
    col_labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        labels = _check_labels(self.labels, "row")
        cells = np.array(self.cells, dtype=np.int64, copy=True)
        n = len(labels)
        if n == 0:
            raise MalformedInput("matrix order must be positive")
        if cells.shape != (n, n):
            raise MalformedInput(f"expected {n}x{n} cells, got shape {cells.shape}")
        if not np.isin(cells, (0, 1)).all():
            raise MalformedInput("cells must be 0 or 1")
        cols = None
        if self.col_labels is not None:
            cols = _check_labels(self.col_labels, "column")
            if len(cols) != n:
                raise MalformedInput("column label count differs from order")
            if cols == labels:
                cols = None
        cells = cells.astype(np.uint8)
        cells.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "col_labels", cols)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], labels: Sequence[str] | None = None) -> "BinaryMatrix":
        cells = np.array([list(r) for r in rows])
        if cells.ndim != 2:
            raise MalformedInput("rows must form a 2-D array")
        if labels is None:
            labels = [f"q{i + 1}" for i in range(len(cells))]
        return cls(tuple(labels), cells)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def cols(self) -> tuple[str, ...]:
        return self.labels if self.col_labels is None else self.col_labels

    @property
    def is_relation(self) -> bool:
        """True when rows and columns carry the same labels."""
        return self.col_labels is None

    @property
    def ones(self) -> int:
        return int(self.cells.sum())

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def col_index(self, label: str) -> int:
        try:
            return self.cols.index(label)
        except ValueError:
            raise KeyError(label) from None

    def get(self, row: str, col: str) -> int:
        return int(self.cells[self.index(row), self.col_index(col)])

    def nonzero(self) -> list[tuple[int, int]]:
        """Row-major list of (i, j) index pairs holding a 1."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.cells))]

    def restricted(self, labels: Sequence[str]) -> "BinaryMatrix":
        """Sub-matrix over ``labels`` (rows and columns) in the given order."""
        idx = [self.index(lab) for lab in labels]
        return BinaryMatrix(tuple(labels), self.cells[np.ix_(idx, idx)])

    def tolist(self) -> list[list[int]]:
        return self.cells.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.cols == other.cols
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.cols, self.cells.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMatrix(labels={list(self.labels)}, cells={self.tolist()})"


def parse_matrix(text: bytes | str) -> BinaryMatrix:
    """Read the ``n <int>`` / ``labels ...`` / rows text format."""
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedInput("matrix file must be ASCII") from exc
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedInput("empty matrix file")

    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise MalformedInput("first line must be 'n <int>'")
    try:
        n = int(head[1])
    except ValueError as exc:
        raise MalformedInput(f"bad order {head[1]!r}") from exc
    if n < 1:
        raise MalformedInput("order must be positive")

    body = lines[1:]
    labels: list[str] | None = None
    if body and body[0].startswith("labels"):
        parts = body[0].split(None, 1)
        if parts[0] != "labels" or len(parts) != 2:
            raise MalformedInput("labels line must be 'labels a,b,...'")
        labels = [lab.strip() for lab in parts[1].split(",")]
        if len(labels) != n:
            raise MalformedInput(f"order {n} but {len(labels)} labels")
        body = body[1:]

    if len(body) != n:
        raise MalformedInput(f"order {n} but {len(body)} rows")
    rows = []
    for k, line in enumerate(body, start=1):
        tokens = line.split()
        if len(tokens) != n:
            raise MalformedInput(f"row {k} has {len(tokens)} cells, expected {n}")
        if any(tok not in ("0", "1") for tok in tokens):
            raise MalformedInput(f"row {k} holds a cell that is not 0 or 1")
        rows.append([int(tok) for tok in tokens])

    if labels is None:
        labels = [f"q{i + 1}" for i in range(n)]
    return BinaryMatrix(tuple(labels), np.array(rows))


def serialize_matrix(m: BinaryMatrix) -> bytes:
    if not m.is_relation:
        raise MalformedInput("only matrices with shared row/column labels can be written")
    out = [f"n {m.n}", "labels " + ",".join(m.labels)]
    out += [" ".join(str(v) for v in row) for row in m.tolist()]
    return "\n".join(out).encode("ascii")


def row_col_sums(m: BinaryMatrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = tuple(int(v) for v in m.cells.sum(axis=1))
    cols = tuple(int(v) for v in m.cells.sum(axis=0))
    return rows, cols


def minor(m: BinaryMatrix, i: int, j: int) -> BinaryMatrix:
    """Delete row ``i`` and column ``j`` (both 1-based)."""
    if m.n == 1:
        raise OrderTooSmall("a 1x1 matrix has no minor")
    if not (1 <= i <= m.n and 1 <= j <= m.n):
        raise IndexOutOfRange(f"({i}, {j}) outside 1..{m.n}")
    cells = np.delete(np.delete(m.cells, i - 1, axis=0), j - 1, axis=1)
    rows = m.labels[: i - 1] + m.labels[i:]
    cols = m.cols[: j - 1] + m.cols[j:]
    return BinaryMatrix(rows, cells, col_labels=cols)


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def count(self) -> int:
        return len({self.find(x) for x in range(len(self.parent))})


def weak_components(m: BinaryMatrix) -> int:
    """Number of weakly connected components of the vertex digraph of ``m``."""
    dsu = _DisjointSet(m.n)
    for i, j in m.nonzero():
        dsu.union(i, j)
    return dsu.count()


def cyclomatic_number(m: BinaryMatrix) -> int:
    return m.ones - m.n + weak_components(m)


@dataclass(frozen=True)
class Vertex:
    number: int
    name: str


@dataclass(frozen=True)
class Edge:
    id: str
    tail: int
    head: int


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph; ``tail``/``head`` are positions in ``vertices``."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise MalformedInput("edge ids must be distinct")
        nv = len(self.vertices)
        for e in self.edges:
            if not (0 <= e.tail < nv and 0 <= e.head < nv):
                raise MalformedInput(f"edge {e.id} has an invalid endpoint")

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def in_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e.head == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e.tail == v)


def digraph_components(g: Digraph) -> int:
    dsu = _DisjointSet(len(g.vertices))
    for e in g.edges:
        dsu.union(e.tail, e.head)
    return dsu.count()


def circuit_rank(g: Digraph) -> int:
    """edges - vertices + weakly connected components."""
    return len(g.edges) - len(g.vertices) + digraph_components(g)


def digraph_from_vertex_matrix(m: BinaryMatrix) -> Digraph:
    vertices = tuple(Vertex(i + 1, lab) for i, lab in enumerate(m.labels))
    edges = tuple(
        Edge(f"{m.labels[i]}>{m.labels[j]}", i, j) for i, j in m.nonzero()
    )
    return Digraph(vertices, edges)


def edge_adjacency_of(h: Digraph) -> BinaryMatrix:
    """r_ij = 1 iff edge i ends in the vertex where edge j begins."""
    heads = np.array([e.head for e in h.edges])
    tails = np.array([e.tail for e in h.edges])
    cells = (heads[:, None] == tails[None, :]).astype(np.uint8)
    return BinaryMatrix(tuple(e.id for e in h.edges), cells)
