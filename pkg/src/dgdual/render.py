"""Text, JSON and DOT renderings used by the command line."""

from __future__ import annotations

import json

from .hamilton import CycleSet
from .matrix import Digraph
from .normal_form import CheckReport
from .reduction import FormingResult

__all__ = ["render_report", "render_json", "render_dot", "render_removed_table"]


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


def render_removed_table(result: FormingResult) -> str:
    rows = [("excluded", "pair", "element")]
    for r in result.removed:
        rows.append((r.alpha, f"{_pair(r.x, r.alpha)},{_pair(r.alpha, r.y)}", _pair(r.x, r.y)))
    widths = [max(len(row[k]) for row in rows) for k in range(3)]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0]), row[1].ljust(widths[1]), row[2]]
        lines.append(" | ".join(cells))
    return "\n".join(lines)


def render_report(report: CheckReport | FormingResult | CycleSet) -> str:
    if isinstance(report, CheckReport):
        status = "PASS" if report.passed else "FAIL"
        lines = [f"{status} {report.mode} violations={len(report.violations)}"]
        for w in report.violations:
            line = f"  {w.kind} cell={_pair(*w.cell)} value={w.value}"
            if w.minor_of is not None:
                line += f" minor_of={_pair(*w.minor_of)}"
            lines.append(line)
        return "\n".join(lines)
    if isinstance(report, FormingResult):
        m = report.matrix
        lines = [
            f"forming set ({m.n}): {','.join(m.labels)}",
            f"removed={len(report.removed)} fully_forming={str(report.fully_forming).lower()}",
            render_removed_table(report),
        ]
        return "\n".join(lines)
    if isinstance(report, CycleSet):
        noun = "cycle" if report.count == 1 else "cycles"
        lines = [f"{report.count} {noun}"]
        lines += ["->".join(c + c[:1]) for c in report.cycles]
        return "\n".join(lines)
    raise TypeError(f"cannot render {type(report).__name__}")


def render_json(report: CheckReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def render_dot(g: Digraph, name: str = "H") -> str:
    """DOT digraph, nodes by vertex number and edges by (tail number, label)."""
    lines = [f"digraph {name} {{"]
    for v in sorted(g.vertices, key=lambda v: v.number):
        lines.append(f"  {json.dumps(v.name)};")
    for e in sorted(g.edges, key=lambda e: (g.vertices[e.tail].number, e.id)):
        tail, head = g.vertices[e.tail].name, g.vertices[e.head].name
        lines.append(f"  {json.dumps(tail)} -> {json.dumps(head)} [label={json.dumps(e.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
