"""Hamilton cycles of G read off closed walks in its edge graph H.

A Hamilton cycle of G visits every original element once.  In a canonical H
each vertex carries at most one consecutive pair of such a cycle, so the cycle
is a closed walk in H that passes every vertex at most once and contains each
original edge.  Added (subdivision) edges only appear between two original
edges and are dropped when the walk is read back as a cycle.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .edge_graph import EdgeGraphModel, build_edge_graph
from .errors import InvalidPartial, TooLarge
from .matrix import BinaryMatrix, Digraph, Edge, Vertex, edge_adjacency_of
from .normal_form import canonicalize, quasinormalize

__all__ = [
    "EulerPartial",
    "CycleSet",
    "euler_partial_graphs",
    "hamilton_from_euler",
    "hamilton_cycles",
    "brute_force_hamilton",
    "realizability_oracle",
]

Cycle = tuple[str, ...]


@dataclass(frozen=True)
class EulerPartial:
    edge_sequence: tuple[str, ...]
    used_vertices: frozenset[int]


@dataclass(frozen=True)
class CycleSet:
    cycles: tuple[Cycle, ...]

    @property
    def count(self) -> int:
        return len(self.cycles)


def _rotate_to_min(seq: Cycle) -> Cycle:
    k = seq.index(min(seq))
    return seq[k:] + seq[:k]


class _WalkSearch:
    """Depth-first search for vertex-simple closed walks through all required edges."""

    def __init__(self, model: EdgeGraphModel) -> None:
        self.model = model
        edges = sorted(model.h.edges, key=lambda e: e.id)
        self.out: dict[int, list] = {}
        for e in edges:
            self.out.setdefault(e.tail, []).append(e)
        self.required = frozenset(model.required_labels)
        self.req_edges = [e for e in edges if e.id in self.required]

    def anchor(self):
        return self.req_edges[0] if self.req_edges else None

    def first_branches(self) -> list:
        a = self.anchor()
        if a is None:
            return []
        if a.head == a.tail:
            return [None]
        return [e for e in self.out.get(a.head, []) if e.head not in (a.head,)]

    def _feasible(self, head: int, start: int, visited: set[int], used: set[str]) -> bool:
        # every unused required edge must start somewhere still reachable
        reach = {head}
        stack = [head]
        while stack:
            v = stack.pop()
            for e in self.out.get(v, []):
                w = e.head
                if w not in reach and w not in visited:
                    reach.add(w)
                    stack.append(w)
        for e in self.req_edges:
            if e.id in used:
                continue
            if e.tail not in reach:
                return False
            if e.head in visited and e.head != start:
                return False
        return True

    def run(self, branch=None, limit: int | None = None) -> list[EulerPartial]:
        a = self.anchor()
        if a is None:
            return []
        found: list[EulerPartial] = []
        start = a.tail
        if a.head == start:
            if self.required == {a.id}:
                found.append(EulerPartial((a.id,), frozenset({start + 1})))
            return found

        path = [a.id]
        visited = {start, a.head}
        used = {a.id} & self.required

        def extend(head: int) -> bool:
            if limit is not None and len(found) >= limit:
                return False
            if not self._feasible(head, start, visited, used):
                return True
            for e in self.out.get(head, []):
                if e.head == start:
                    if len(used) + (e.id in self.required) == len(self.required):
                        path.append(e.id)
                        found.append(EulerPartial(tuple(path), frozenset(v + 1 for v in visited)))
                        path.pop()
                        if limit is not None and len(found) >= limit:
                            return False
                    continue
                if e.head in visited:
                    continue
                path.append(e.id)
                visited.add(e.head)
                is_req = e.id in self.required
                if is_req:
                    used.add(e.id)
                go_on = extend(e.head)
                if is_req:
                    used.discard(e.id)
                visited.discard(e.head)
                path.pop()
                if not go_on:
                    return False
            return True

        if branch is None:
            extend(a.head)
            return found

        # restrict the first extension to one edge
        out = self.out
        saved = out.get(a.head, [])
        out[a.head] = [branch]
        try:
            extend(a.head)
        finally:
            out[a.head] = saved
        return found


def euler_partial_graphs(
    model: EdgeGraphModel, limit: int | None = None, threads: int = 1
) -> list[EulerPartial]:
    """Closed walks of H through every original edge, each vertex at most once.

    Walks start at the original edge with the smallest label and branch in
    label order.  With ``threads > 1`` the first branch fans out over a thread
    pool; results are merged back into sequential order.
    """
    search = _WalkSearch(model)
    if threads <= 1:
        return search.run(limit=limit)
    branches = search.first_branches()
    if branches == [None]:
        return search.run(limit=limit)
    # each worker needs its own adjacency table since run() swaps one entry
    def work(branch):
        return _WalkSearch(model).run(branch=branch, limit=limit)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, branches))
    merged = [ep for part in parts for ep in part]
    return merged[:limit] if limit is not None else merged


def hamilton_from_euler(ep: EulerPartial, model: EdgeGraphModel) -> Cycle:
    """Read the original edges of a walk, in order, as a cycle of G."""
    seq = ep.edge_sequence
    if not seq:
        raise InvalidPartial("empty walk")
    try:
        edges = [model.h.edge(q) for q in seq]
    except KeyError as exc:
        raise InvalidPartial(f"unknown edge {exc.args[0]}") from None
    for e, nxt in zip(edges, edges[1:] + edges[:1]):
        if e.head != nxt.tail:
            raise InvalidPartial(f"{e.id} does not end where {nxt.id} begins")
    heads = [e.head for e in edges]
    if len(set(heads)) != len(heads):
        raise InvalidPartial("walk passes a vertex twice")
    required = [q for q in seq if q not in model.added_labels]
    if len(set(seq)) != len(seq) or sorted(required) != sorted(model.required_labels):
        raise InvalidPartial("walk must contain every original edge exactly once")
    return _rotate_to_min(tuple(required))


def _is_cycle_of(m: BinaryMatrix, cycle: Cycle) -> bool:
    if sorted(cycle) != sorted(m.labels):
        return False
    return all(m.get(a, b) for a, b in zip(cycle, cycle[1:] + cycle[:1]))


def _without_loops(m: BinaryMatrix) -> BinaryMatrix:
    cells = m.cells.copy()
    np.fill_diagonal(cells, 0)
    return BinaryMatrix(m.labels, cells)


def hamilton_cycles(
    m: BinaryMatrix,
    limit: int | None = None,
    form: Literal["canonical", "quasi"] = "canonical",
    threads: int = 1,
) -> CycleSet:
    """Directed Hamilton cycles of G (up to rotation) via its edge graph.

    ``form="quasi"`` runs the search on the quasicanonical edge graph.  That
    graph may hold complicated vertices, which a cycle of G can pass more than
    once, so the count can fall short of the true one there.
    """
    if m.n < 2:
        return CycleSet(())
    g = _without_loops(m)
    norm, trace = canonicalize(g) if form == "canonical" else quasinormalize(g)
    model = build_edge_graph(norm, trace)
    cycles = set()
    for ep in euler_partial_graphs(model, limit=limit, threads=threads):
        cyc = hamilton_from_euler(ep, model)
        if not _is_cycle_of(g, cyc):
            raise AssertionError(f"walk {ep.edge_sequence} maps to a non-cycle {cyc}")
        cycles.add(cyc)
    return CycleSet(tuple(sorted(cycles)))


def brute_force_hamilton(m: BinaryMatrix, cap: int = 9) -> CycleSet:
    """Try every cyclic order that starts at the smallest label."""
    if m.n > cap:
        raise TooLarge(f"order {m.n} exceeds the brute-force cap {cap}")
    if m.n < 2:
        return CycleSet(())
    first = min(m.labels)
    rest = sorted(lab for lab in m.labels if lab != first)
    cycles = []
    for perm in itertools.permutations(rest):
        cyc = (first,) + perm
        if all(m.get(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])):
            cycles.append(cyc)
    return CycleSet(tuple(sorted(cycles)))


def realizability_oracle(m: BinaryMatrix, cap: int = 5) -> bool:
    """Is ``m`` the edge adjacency matrix of some digraph on its labels?

    Searches all ways to identify the 2n edge endpoints into vertices
    (set partitions in restricted-growth order), pruning as soon as an
    assigned head/tail pair contradicts ``m``.
    """
    n = m.n
    if n > cap:
        raise TooLarge(f"order {n} exceeds the realizability cap {cap}")
    cells = m.cells
    # endpoint 2k is the tail of edge k, 2k + 1 its head
    block = [-1] * (2 * n)

    def consistent(p: int) -> bool:
        k, is_head = divmod(p, 2)
        for q in range(p):
            j, q_head = divmod(q, 2)
            if is_head and not q_head:
                if (block[p] == block[q]) != bool(cells[k, j]):
                    return False
            elif q_head and not is_head:
                if (block[p] == block[q]) != bool(cells[j, k]):
                    return False
        return True

    def assign(p: int, used: int) -> bool:
        if p == 2 * n:
            return True
        for b in range(used + 1):
            block[p] = b
            if consistent(p) and assign(p + 1, max(used, b + 1)):
                return True
        block[p] = -1
        return False

    found = assign(0, 0)
    if found:
        h = _digraph_from_blocks(m, block)
        assert edge_adjacency_of(h).restricted(m.labels) == m
    return found


def _digraph_from_blocks(m: BinaryMatrix, block: list[int]) -> Digraph:
    nv = max(block) + 1
    vertices = tuple(Vertex(k + 1, f"u{k + 1}") for k in range(nv))
    edges = tuple(Edge(lab, block[2 * k], block[2 * k + 1]) for k, lab in enumerate(m.labels))
    return Digraph(vertices, edges)
