"""Contraction of elementary elements down to a forming set.

An element with exactly one predecessor ``x`` and one successor ``y`` can be
removed and ``x -> alpha -> y`` replaced by ``x -> y`` without changing the
cyclomatic number, as long as ``x -> y`` was not already present.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotContractible, WouldCreateLoop, WouldMergeParallel
from .matrix import BinaryMatrix, row_col_sums
from .normal_form import Step, TransformTrace, contract

__all__ = [
    "Removal",
    "FormingResult",
    "sigma_diagonal",
    "reduce_step",
    "reduce_to_forming",
    "is_forming",
]


@dataclass(frozen=True)
class Removal:
    alpha: str
    x: str
    y: str


@dataclass(frozen=True)
class FormingResult:
    matrix: BinaryMatrix
    removed: tuple[Removal, ...]
    fully_forming: bool
    trace: TransformTrace


def sigma_diagonal(m: BinaryMatrix) -> tuple[int, ...]:
    rows, cols = row_col_sums(m)
    return tuple(r * c for r, c in zip(rows, cols))


def _endpoints(m: BinaryMatrix, a: int) -> tuple[int, int]:
    x = int(np.nonzero(m.cells[:, a])[0][0])
    y = int(np.nonzero(m.cells[a])[0][0])
    return x, y


def _check_step(m: BinaryMatrix, a: int, allow_loops: bool) -> tuple[int, int]:
    alpha = m.labels[a]
    if sigma_diagonal(m)[a] != 1:
        raise NotContractible(f"{alpha} does not have exactly one predecessor and one successor")
    x, y = _endpoints(m, a)
    if x == a or y == a:
        raise NotContractible(f"{alpha} only relates to itself")
    if m.cells[x, y]:
        raise WouldMergeParallel(f"{m.labels[x]} -> {m.labels[y]} already present")
    if x == y and not allow_loops:
        raise WouldCreateLoop(f"contracting {alpha} would put a loop on {m.labels[x]}")
    return x, y


def reduce_step(m: BinaryMatrix, alpha: str, allow_loops: bool = False) -> tuple[BinaryMatrix, Removal]:
    x, y = _check_step(m, m.index(alpha), allow_loops)
    rec = Removal(alpha, m.labels[x], m.labels[y])
    return contract(m, alpha, rec.x, rec.y), rec


def _legal(m: BinaryMatrix, a: int, allow_loops: bool) -> bool:
    try:
        _check_step(m, a, allow_loops)
    except (NotContractible, WouldMergeParallel, WouldCreateLoop):
        return False
    return True


def is_forming(m: BinaryMatrix, allow_loops: bool = False) -> bool:
    return not any(_legal(m, a, allow_loops) for a in range(m.n))


def reduce_to_forming(m: BinaryMatrix, allow_loops: bool = False) -> FormingResult:
    """Contract the smallest-indexed legal element until none is left."""
    original = m.labels
    removed: list[Removal] = []
    steps: list[Step] = []
    while True:
        a = next((a for a in range(m.n) if _legal(m, a, allow_loops)), None)
        if a is None:
            break
        m, rec = reduce_step(m, m.labels[a], allow_loops)
        removed.append(rec)
        steps.append(Step("contract", rec.x, rec.y, rec.alpha))
    # elementary elements may survive when their contraction is refused
    fully = 1 not in sigma_diagonal(m)
    return FormingResult(m, tuple(removed), fully, TransformTrace(tuple(steps), original))
