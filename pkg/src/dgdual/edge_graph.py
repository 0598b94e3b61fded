"""Edge graph H of a quasicanonical matrix.

Rows with the same support pattern end in one vertex of H, and the columns of
that pattern start there, so every all-ones block is one vertex.  Edges with an
empty column start in an initial vertex, edges with an empty row end in a final
vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentBlocks, LabelMismatch, NotQuasicanonical, TraceMismatch
from .matrix import BinaryMatrix, Digraph, Edge, Vertex, edge_adjacency_of
from .normal_form import TransformTrace, quasicanonical_check

__all__ = [
    "Block",
    "Terminal",
    "BlockDecomposition",
    "EdgeGraphModel",
    "decompose_blocks",
    "build_edge_graph",
    "f_matrix",
    "validate_duality",
    "transit_adjacency",
]


@dataclass(frozen=True)
class Block:
    vertex_number: int
    in_rows: tuple[str, ...]
    out_cols: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.in_rows), len(self.out_cols)

    @property
    def simple(self) -> bool:
        return min(self.shape) == 1


@dataclass(frozen=True)
class Terminal:
    """Initial (source edges) or final (sink edges) vertex of H."""

    vertex_number: int
    name: str
    edges: tuple[str, ...]


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[Block, ...]
    initials: tuple[Terminal, ...] = ()
    finals: tuple[Terminal, ...] = ()
    split_terminals: bool = False

    @property
    def initial_vertex(self) -> Terminal | None:
        """The shared initial vertex; None when absent or when terminals are split."""
        if self.split_terminals or not self.initials:
            return None
        return self.initials[0]

    @property
    def final_vertex(self) -> Terminal | None:
        if self.split_terminals or not self.finals:
            return None
        return self.finals[0]

    @property
    def vertex_names(self) -> tuple[str, ...]:
        names = [f"v{b.vertex_number}" for b in self.blocks]
        names += [t.name for t in self.initials + self.finals]
        return tuple(names)


def decompose_blocks(m: BinaryMatrix, split_terminals: bool = False) -> BlockDecomposition:
    """Group rows with identical patterns into the all-ones blocks of ``m``."""
    if not quasicanonical_check(m).passed:
        raise NotQuasicanonical("matrix is not quasicanonical")
    cells = m.cells
    groups: dict[tuple[int, ...], list[int]] = {}
    for i in range(m.n):
        pattern = tuple(int(j) for j in np.nonzero(cells[i])[0])
        if pattern:
            groups.setdefault(pattern, []).append(i)

    blocks = []
    covered = 0
    # dict preserves first-seen order, i.e. smallest row index ascending
    for number, (pattern, rows) in enumerate(groups.items(), start=1):
        for j in pattern:
            support = [int(i) for i in np.nonzero(cells[:, j])[0]]
            if support != rows:
                raise InconsistentBlocks(
                    f"column {m.labels[j]} is not congruent with rows {[m.labels[i] for i in rows]}"
                )
        covered += len(rows) * len(pattern)
        blocks.append(Block(number, tuple(m.labels[i] for i in rows), tuple(m.labels[j] for j in pattern)))
    if covered != m.ones:
        raise InconsistentBlocks("blocks do not cover every 1-cell")

    sources = tuple(m.labels[j] for j in range(m.n) if not cells[:, j].any())
    sinks = tuple(m.labels[i] for i in range(m.n) if not cells[i].any())
    nxt = len(blocks) + 1
    initials: list[Terminal] = []
    finals: list[Terminal] = []
    if split_terminals:
        for lab in sources:
            initials.append(Terminal(nxt, f"v_init_{lab}", (lab,)))
            nxt += 1
        for lab in sinks:
            finals.append(Terminal(nxt, f"v_fin_{lab}", (lab,)))
            nxt += 1
    else:
        if sources:
            initials.append(Terminal(nxt, "v_init", sources))
            nxt += 1
        if sinks:
            finals.append(Terminal(nxt, "v_fin", sinks))
    return BlockDecomposition(tuple(blocks), tuple(initials), tuple(finals), split_terminals)


@dataclass(frozen=True)
class EdgeGraphModel:
    """H together with its vertex matrix F and the per-edge vertex numbers.

    ``tails[q]`` is the vertex an edge leaves, ``heads[q]`` the vertex it
    enters.
    """

    h: Digraph
    blocks: BlockDecomposition
    tails: dict[str, int]
    heads: dict[str, int]
    added_labels: frozenset[str] = field(default_factory=frozenset)

    @property
    def f(self) -> BinaryMatrix:
        return f_matrix(self)

    @property
    def required_labels(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.h.edges if e.id not in self.added_labels)

    def vertex_name(self, number: int) -> str:
        return self.h.vertices[number - 1].name


def build_edge_graph(
    m: BinaryMatrix, trace: TransformTrace | None = None, split_terminals: bool = False
) -> EdgeGraphModel:
    dec = decompose_blocks(m, split_terminals=split_terminals)
    tails: dict[str, int] = {}
    heads: dict[str, int] = {}
    for b in dec.blocks:
        for q in b.in_rows:
            heads[q] = b.vertex_number
        for q in b.out_cols:
            tails[q] = b.vertex_number
    for t in dec.initials:
        for q in t.edges:
            tails[q] = t.vertex_number
    for t in dec.finals:
        for q in t.edges:
            heads[q] = t.vertex_number

    vertices = tuple(Vertex(k + 1, name) for k, name in enumerate(dec.vertex_names))
    edges = tuple(Edge(q, tails[q] - 1, heads[q] - 1) for q in m.labels)
    added: frozenset[str] = frozenset()
    if trace is not None:
        added = frozenset(trace.new_labels)
        if not added <= set(m.labels):
            raise TraceMismatch("trace introduces labels absent from the matrix")
    return EdgeGraphModel(Digraph(vertices, edges), dec, tails, heads, added)


def f_matrix(model: EdgeGraphModel) -> BinaryMatrix:
    """Vertex adjacency of H; parallel edges collapse to a single 1."""
    nv = len(model.h.vertices)
    cells = np.zeros((nv, nv), dtype=np.uint8)
    for e in model.h.edges:
        cells[e.tail, e.head] = 1
    return BinaryMatrix(tuple(v.name for v in model.h.vertices), cells)


def validate_duality(m: BinaryMatrix, model: EdgeGraphModel) -> bool:
    """Check that the edge adjacency of H reproduces ``m`` cell for cell."""
    ids = [e.id for e in model.h.edges]
    if set(ids) != set(m.labels) or len(ids) != m.n:
        raise LabelMismatch("edge ids of H differ from the matrix labels")
    return edge_adjacency_of(model.h).restricted(m.labels) == m


def transit_adjacency(model: EdgeGraphModel, trace: TransformTrace) -> BinaryMatrix:
    """Rebuild the relation matrix over the original labels from H.

    An original edge ``y`` follows ``x`` when it leaves the head of ``x``
    directly, or after a run of added edges.
    """
    ids = {e.id for e in model.h.edges}
    for step in trace.steps:
        unknown = {step.x, step.y, step.label} - ids
        if unknown:
            raise TraceMismatch(f"trace mentions unknown labels {sorted(unknown)}")
    added = set(trace.new_labels)
    if added != set(model.added_labels):
        raise TraceMismatch("trace additions differ from the model's added labels")

    if trace.original_labels:
        original = tuple(trace.original_labels)
        if set(original) != ids - added:
            raise TraceMismatch("trace original labels differ from the model's edges")
    else:
        original = tuple(e.id for e in model.h.edges if e.id not in added)

    r = edge_adjacency_of(model.h)
    succ = {
        r.labels[i]: [r.labels[j] for j in np.nonzero(r.cells[i])[0]] for i in range(r.n)
    }
    pos = {lab: k for k, lab in enumerate(original)}
    cells = np.zeros((len(original), len(original)), dtype=np.uint8)
    for x in original:
        stack = list(succ[x])
        seen: set[str] = set()
        while stack:
            q = stack.pop()
            if q in seen:
                continue
            seen.add(q)
            if q in added:
                stack.extend(succ[q])
            else:
                cells[pos[x], pos[q]] = 1
    return BinaryMatrix(original, cells)
