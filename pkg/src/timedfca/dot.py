"""Graphviz DOT rendering of a timed lattice."""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError
from .lattice import TimedLattice


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def lattice_to_dot(lattice: TimedLattice, max_objects: int = 3) -> str:
    order = {m: j for j, m in enumerate(lattice.context.attributes)}
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
    for c in lattice.concepts:
        intent = ", ".join(sorted(c.intent, key=order.__getitem__)) or "{}"
        members = sorted(c.extent.items(), key=lambda kv: (-kv[1], kv[0]))[:max_objects]
        shown = ", ".join(f"{g} ({mu:.2f})" for g, mu in members)
        if len(c.extent) > max_objects:
            shown += f", ... ({len(c.extent)} objects)"
        label = f"c{c.id}: {intent}\n{shown}" if shown else f"c{c.id}: {intent}"
        lines.append(f"  c{c.id} [label={_quote(label)}];")
    for low, high in lattice.hasse_edges:
        lines.append(f"  c{low} -> c{high} [style=solid];")
    for src, dst in lattice.temporal_edges:
        lines.append(f"  c{src} -> c{dst} [style=dashed, color=red, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(lattice: TimedLattice, path, max_objects: int = 3) -> None:
    path = Path(path)
    try:
        path.write_text(lattice_to_dot(lattice, max_objects), encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc
