"""``dgdual`` command line.

Exit codes: 0 success, 1 a check or oracle reported failure, 2 bad input,
3 an internal bound was violated.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .edge_graph import build_edge_graph, f_matrix, validate_duality
from .errors import (
    BoundExceeded,
    DgdualError,
    InconsistentBlocks,
    NotQuasicanonical,
)
from .hamilton import brute_force_hamilton, hamilton_cycles
from .matrix import (
    BinaryMatrix,
    circuit_rank,
    cyclomatic_number,
    parse_matrix,
    serialize_matrix,
    weak_components,
)
from .normal_form import canonical_check, canonicalize, format_trace, quasicanonical_check, quasinormalize
from .reduction import reduce_to_forming
from .render import render_dot, render_json, render_report

__all__ = ["CommandOutcome", "run_command", "main"]


@dataclass
class CommandOutcome:
    exit_code: int
    stdout_report: str = ""
    artifacts: dict[str, str] = field(default_factory=dict)
    error: str = ""


class _Outcome(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgdual", description="Vertex/edge graph duality tools.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="test a matrix for quasicanonical or canonical form")
    c.add_argument("file")
    c.add_argument("--mode", choices=("quasi", "canonical"), default="quasi")
    c.add_argument("--json", action="store_true")

    n = sub.add_parser("normalize", help="subdivide relations until the form holds")
    n.add_argument("file")
    n.add_argument("--mode", choices=("quasi", "canonical"), required=True)
    n.add_argument("-o", "--output")
    n.add_argument("--trace")

    e = sub.add_parser("edge-graph", help="build H from a quasicanonical matrix")
    e.add_argument("file")
    e.add_argument("--dot")
    e.add_argument("--fmatrix")
    e.add_argument("--split-terminals", action="store_true")

    r = sub.add_parser("reduce", help="contract elementary elements to a forming set")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.add_argument("--allow-loops", action="store_true")

    h = sub.add_parser("hamilton", help="enumerate Hamilton cycles through the edge graph")
    h.add_argument("file")
    h.add_argument("--limit", type=int)
    h.add_argument("--oracle", action="store_true")
    form = h.add_mutually_exclusive_group()
    form.add_argument("--canonical", dest="form", action="store_const", const="canonical")
    form.add_argument("--quasi", dest="form", action="store_const", const="quasi")
    h.set_defaults(form="canonical")
    h.add_argument("--threads", type=int, default=1)

    i = sub.add_parser("invariants", help="print cyclomatic number, components and ones")
    i.add_argument("file")
    return p


def _read(path: str) -> BinaryMatrix:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Outcome(2, f"cannot read {path}: {exc.strerror}") from exc
    return parse_matrix(data)


def _write(path: str, data: bytes, kind: str, artifacts: dict[str, str]) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise _Outcome(2, f"cannot write {path}: {exc.strerror}") from exc
    artifacts[path] = kind


def _matrix_bytes(m: BinaryMatrix) -> bytes:
    return serialize_matrix(m) + b"\n"


def _cmd_check(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    report = canonical_check(m) if args.mode == "canonical" else quasicanonical_check(m)
    text = render_json(report) if args.json else render_report(report)
    return (0 if report.passed else 1), text


def _cmd_normalize(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    out, trace = canonicalize(m) if args.mode == "canonical" else quasinormalize(m)
    if args.trace:
        _write(args.trace, format_trace(trace), "trace", artifacts)
    if not args.output:
        return 0, serialize_matrix(out).decode("ascii")
    _write(args.output, _matrix_bytes(out), "matrix", artifacts)
    return 0, (
        f"mode={args.mode} order={m.n}->{out.n} subdivisions={trace.subdivisions} "
        f"nu={cyclomatic_number(out)}"
    )


def _cmd_edge_graph(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    try:
        model = build_edge_graph(m, split_terminals=args.split_terminals)
    except NotQuasicanonical:
        return 1, "FAIL matrix is not quasicanonical; run 'dgdual normalize' first"
    if args.dot:
        _write(args.dot, render_dot(model.h).encode("ascii"), "dot", artifacts)
    if args.fmatrix:
        _write(args.fmatrix, _matrix_bytes(f_matrix(model)), "matrix", artifacts)

    dual = validate_duality(m, model)
    lines = [
        f"vertices={len(model.h.vertices)} edges={len(model.h.edges)} "
        f"nu_G={cyclomatic_number(m)} nu_H={circuit_rank(model.h)} "
        f"duality={'ok' if dual else 'broken'}"
    ]
    width = max(len(q) for q in m.labels)
    lines.append(f"{'edge'.ljust(width)} N_hn N_hk")
    for q in m.labels:
        lines.append(
            f"{q.ljust(width)} {model.vertex_name(model.tails[q])} {model.vertex_name(model.heads[q])}"
        )
    return (0 if dual else 3), "\n".join(lines)


def _cmd_reduce(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    result = reduce_to_forming(m, allow_loops=args.allow_loops)
    if args.output:
        _write(args.output, _matrix_bytes(result.matrix), "matrix", artifacts)
    return 0, render_report(result)


def _cmd_hamilton(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    if args.limit is not None and args.limit < 1:
        raise _Outcome(2, "--limit must be positive")
    if args.threads < 1:
        raise _Outcome(2, "--threads must be positive")
    if args.oracle:
        expected = brute_force_hamilton(m)
    cycles = hamilton_cycles(m, limit=args.limit, form=args.form, threads=args.threads)
    text = render_report(cycles)
    if not args.oracle:
        return 0, text
    # with a limit the search may stop early; compare against the capped count
    want = expected.count if args.limit is None else min(expected.count, args.limit)
    if cycles.count != want or not set(cycles.cycles) <= set(expected.cycles):
        return 1, text + f"\noracle: MISMATCH brute_force={expected.count}"
    return 0, text + f"\noracle: agrees brute_force={expected.count}"


def _cmd_invariants(args, artifacts) -> tuple[int, str]:
    m = _read(args.file)
    return 0, f"nu={cyclomatic_number(m)} components={weak_components(m)} ones={m.ones}"


_COMMANDS = {
    "check": _cmd_check,
    "normalize": _cmd_normalize,
    "edge-graph": _cmd_edge_graph,
    "reduce": _cmd_reduce,
    "hamilton": _cmd_hamilton,
    "invariants": _cmd_invariants,
}


def run_command(argv: Sequence[str]) -> CommandOutcome:
    """Run one subcommand and collect its report instead of printing it."""
    parser = _build_parser()
    out, err = io.StringIO(), io.StringIO()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = 0 if exc.code in (0, None) else 2
        return CommandOutcome(code, out.getvalue().rstrip("\n"), error=err.getvalue().strip())

    artifacts: dict[str, str] = {}
    try:
        code, text = _COMMANDS[args.command](args, artifacts)
    except _Outcome as exc:
        return CommandOutcome(exc.code, "", artifacts, error=str(exc))
    except (BoundExceeded, InconsistentBlocks) as exc:
        return CommandOutcome(3, "", artifacts, error=f"internal bound violated: {exc}")
    except DgdualError as exc:
        return CommandOutcome(2, "", artifacts, error=f"{type(exc).__name__}: {exc}")
    return CommandOutcome(code, text, artifacts)


def main(argv: Sequence[str] | None = None) -> int:
    outcome = run_command(sys.argv[1:] if argv is None else argv)
    if outcome.stdout_report:
        print(outcome.stdout_report)
    if outcome.error:
        print(f"dgdual: {outcome.error}", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
