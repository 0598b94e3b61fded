"""Quasicanonical / canonical tests and the subdivision-based normalizers.

Every 1-cell of a relation matrix gets a charge ``s = rowsum + colsum`` and an
excess ``c`` over the smallest nonzero charge in its row and in its column.
A matrix splits into all-ones blocks (one block per vertex of the edge graph)
exactly when ``c`` vanishes on the matrix and on the minor of every 1-cell.
Cells that break this are removed by subdivision: ``x -> y`` becomes
``x -> t -> y`` with a fresh label ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

import numpy as np

from .errors import BoundExceeded, MalformedInput, NotARelation, TraceMismatch
from .matrix import BinaryMatrix, row_col_sums

__all__ = [
    "Witness",
    "CheckReport",
    "Step",
    "TransformTrace",
    "s_matrix",
    "c_matrix",
    "quasicanonical_check",
    "canonical_check",
    "delta_n",
    "contract",
    "quasinormalize",
    "canonicalize",
    "replay",
    "format_trace",
    "parse_trace",
]

Mode = Literal["quasicanonical", "canonical"]
ScanOrder = Literal["row", "column"]


@dataclass(frozen=True)
class Witness:
    kind: Literal["full-matrix-c", "minor-c", "complicated-block"]
    cell: tuple[str, str]
    value: int
    minor_of: tuple[str, str] | None = None


@dataclass(frozen=True)
class CheckReport:
    mode: Mode
    violations: tuple[Witness, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode,
            "violations": [
                {
                    "kind": w.kind,
                    "cell": list(w.cell),
                    "value": w.value,
                    "minor_of": list(w.minor_of) if w.minor_of else None,
                }
                for w in self.violations
            ],
        }


@dataclass(frozen=True)
class Step:
    """One subdivision (``S``) or contraction (``C``).

    For a subdivision ``label`` is the fresh element placed between ``x`` and
    ``y``; for a contraction it is the removed element.
    """

    kind: Literal["subdivide", "contract"]
    x: str
    y: str
    label: str


@dataclass(frozen=True)
class TransformTrace:
    steps: tuple[Step, ...] = ()
    original_labels: tuple[str, ...] = field(default=())

    @property
    def subdivisions(self) -> int:
        return sum(1 for s in self.steps if s.kind == "subdivide")

    @property
    def new_labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.steps if s.kind == "subdivide")

    def __len__(self) -> int:
        return len(self.steps)


def s_matrix(m: BinaryMatrix) -> np.ndarray:
    rows, cols = row_col_sums(m)
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    return m.cells.astype(np.int64) * (r[:, None] + c[None, :])


def _c_from_cells(cells: np.ndarray) -> np.ndarray:
    cells = cells.astype(np.int64)
    s = cells * (cells.sum(axis=1)[:, None] + cells.sum(axis=0)[None, :])
    if s.size == 0:
        return s
    masked = np.where(s > 0, s, np.iinfo(np.int64).max)
    row_min = masked.min(axis=1)
    col_min = masked.min(axis=0)
    excess = (s - row_min[:, None]) + (s - col_min[None, :])
    return np.where(s > 0, excess, 0)


def c_matrix(m: BinaryMatrix) -> np.ndarray:
    return _c_from_cells(m.cells)


def _minor_cells(cells: np.ndarray, i: int, j: int) -> np.ndarray:
    return np.delete(np.delete(cells, i, axis=0), j, axis=1)


def _minor_failures(m: BinaryMatrix) -> list[tuple[int, int, np.ndarray]]:
    """1-cells (0-based) whose minor has a nonzero c, with that minor's c-matrix."""
    if m.n == 1:
        return []
    out = []
    for i, j in m.nonzero():
        c = _c_from_cells(_minor_cells(m.cells, i, j))
        if c.any():
            out.append((i, j, c))
    return out


def quasicanonical_check(m: BinaryMatrix) -> CheckReport:
    violations: list[Witness] = []
    if m.n == 1:
        # the minor of a lone loop is empty, so the condition holds vacuously
        return CheckReport("quasicanonical", ())

    c = c_matrix(m)
    for i, j in zip(*np.nonzero(c)):
        violations.append(Witness("full-matrix-c", (m.labels[i], m.cols[j]), int(c[i, j])))

    for i, j, mc in _minor_failures(m):
        rows = m.labels[:i] + m.labels[i + 1:]
        cols = m.cols[:j] + m.cols[j + 1:]
        for a, b in zip(*np.nonzero(mc)):
            violations.append(
                Witness("minor-c", (rows[a], cols[b]), int(mc[a, b]),
                        minor_of=(m.labels[i], m.cols[j]))
            )
    return CheckReport("quasicanonical", tuple(violations))


def _complicated_cells(m: BinaryMatrix) -> list[tuple[int, int, int]]:
    rows, cols = row_col_sums(m)
    return [(i, j, min(rows[i], cols[j])) for i, j in m.nonzero() if min(rows[i], cols[j]) >= 2]


def canonical_check(m: BinaryMatrix) -> CheckReport:
    """Quasicanonical test plus: every 1-cell has rowsum 1 or colsum 1."""
    base = quasicanonical_check(m)
    extra = [
        Witness("complicated-block", (m.labels[i], m.cols[j]), v)
        for i, j, v in _complicated_cells(m)
    ]
    return CheckReport("canonical", base.violations + tuple(extra))


def _fresh_labels(taken: Sequence[str]) -> Iterator[str]:
    used = set(taken)
    k = 0
    while True:
        k += 1
        lab = f"t{k}"
        if lab not in used:
            used.add(lab)
            yield lab


def _require_relation(m: BinaryMatrix) -> None:
    if not m.is_relation:
        raise MalformedInput("operation needs a relation matrix (same row and column labels)")


def delta_n(m: BinaryMatrix, x: str, y: str, new_label: str | None = None) -> tuple[BinaryMatrix, Step]:
    """Replace the relation ``x -> y`` by ``x -> t -> y`` with a new element ``t``."""
    _require_relation(m)
    i, j = m.index(x), m.index(y)
    if not m.cells[i, j]:
        raise NotARelation(f"no relation {x} -> {y}")
    if new_label is None:
        new_label = next(_fresh_labels(m.labels))
    elif new_label in m.labels:
        raise MalformedInput(f"label {new_label!r} already in use")
    n = m.n
    cells = np.zeros((n + 1, n + 1), dtype=np.uint8)
    cells[:n, :n] = m.cells
    cells[i, j] = 0
    cells[i, n] = 1
    cells[n, j] = 1
    return BinaryMatrix(m.labels + (new_label,), cells), Step("subdivide", x, y, new_label)


def contract(m: BinaryMatrix, alpha: str, x: str, y: str) -> BinaryMatrix:
    """Remove ``alpha`` and write the relation ``x -> y`` (no precondition checks)."""
    a = m.index(alpha)
    keep = [k for k in range(m.n) if k != a]
    cells = m.cells[np.ix_(keep, keep)].copy()
    labels = tuple(m.labels[k] for k in keep)
    cells[labels.index(x), labels.index(y)] = 1
    return BinaryMatrix(labels, cells)


def _scan(cells: list[tuple[int, int]], order: ScanOrder) -> list[tuple[int, int]]:
    if order == "column":
        return sorted(cells, key=lambda ij: (ij[1], ij[0]))
    return sorted(cells)


class _Normalizer:
    """Shared state of a normalization run: the current matrix and its trace."""

    def __init__(self, m: BinaryMatrix, order: ScanOrder, bound: int) -> None:
        _require_relation(m)
        self.start = m
        self.m = m
        self.order = order
        self.bound = bound
        self.steps: list[Step] = []
        self.fresh = _fresh_labels(m.labels)

    def subdivide(self, cells: list[tuple[int, int]]) -> None:
        pairs = [(self.m.labels[i], self.m.labels[j]) for i, j in _scan(cells, self.order)]
        for x, y in pairs:
            if len(self.steps) >= self.bound:
                raise BoundExceeded(
                    f"more than {self.bound} subdivisions for an order-{self.start.n} matrix"
                )
            self.m, step = delta_n(self.m, x, y, next(self.fresh))
            self.steps.append(step)

    def quasi_pass(self) -> bool:
        """One round of the two-phase loop; False once the matrix is quasicanonical."""
        m = self.m
        if m.n == 1:
            return False
        c = c_matrix(m)
        if c.any():
            self.subdivide([(int(i), int(j)) for i, j in zip(*np.nonzero(c))])
            return True
        failing = [(i, j) for i, j, _ in _minor_failures(m)]
        if failing:
            self.subdivide(failing)
            return True
        return False

    def quasinormalize(self) -> None:
        while self.quasi_pass():
            pass

    def trace(self) -> TransformTrace:
        return TransformTrace(tuple(self.steps), self.start.labels)


def _quasi_bound(n: int) -> int:
    return n * n - 1


def quasinormalize(m: BinaryMatrix, order: ScanOrder = "row") -> tuple[BinaryMatrix, TransformTrace]:
    """Subdivide offending relations until the matrix is quasicanonical.

    Each round first subdivides every cell with a nonzero c; when the full
    c-matrix is clean it subdivides every 1-cell whose minor still shows a
    nonzero c.  Rounds repeat until neither applies.
    """
    run = _Normalizer(m, order, _quasi_bound(m.n))
    run.quasinormalize()
    return run.m, run.trace()


def canonicalize(m: BinaryMatrix, order: ScanOrder = "row") -> tuple[BinaryMatrix, TransformTrace]:
    """Quasinormalize, then split every complicated-block cell, to a fixpoint."""
    run = _Normalizer(m, order, max(m.n * m.n, 1))
    while True:
        run.quasinormalize()
        complicated = [(i, j) for i, j, _ in _complicated_cells(run.m)]
        if not complicated:
            break
        run.subdivide(complicated)
    return run.m, run.trace()


def replay(m: BinaryMatrix, trace: TransformTrace) -> BinaryMatrix:
    """Apply the steps of ``trace`` to ``m`` in order."""
    for step in trace.steps:
        try:
            if step.kind == "subdivide":
                m, _ = delta_n(m, step.x, step.y, step.label)
            else:
                m = contract(m, step.label, step.x, step.y)
        except (KeyError, NotARelation, MalformedInput) as exc:
            raise TraceMismatch(f"cannot replay {step}: {exc}") from exc
    return m


def format_trace(trace: TransformTrace) -> bytes:
    lines = ["trace v1"]
    for s in trace.steps:
        lines.append(f"{'S' if s.kind == 'subdivide' else 'C'} {s.x} {s.y} {s.label}")
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_trace(text: bytes | str, original_labels: Sequence[str] = ()) -> TransformTrace:
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedInput("trace file must be ASCII") from exc
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "trace v1":
        raise MalformedInput("trace file must start with 'trace v1'")
    steps = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4 or parts[0] not in ("S", "C"):
            raise MalformedInput(f"bad trace line {ln!r}")
        kind = "subdivide" if parts[0] == "S" else "contract"
        steps.append(Step(kind, parts[1], parts[2], parts[3]))
    return TransformTrace(tuple(steps), tuple(original_labels))

