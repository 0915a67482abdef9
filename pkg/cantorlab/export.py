"""Graphviz DOT text for complexes, deletion runs and bisection traces."""

from __future__ import annotations

from typing import Iterable, List, Mapping, Optional, Sequence

from .cantortrie import CylinderComplex, Leaf, Node


def _node_id(stem: str) -> str:
    return f'"n{stem}"'


def complex_to_dot(c: CylinderComplex, name: str = "complex", deleted: Sequence[str] = ()) -> str:
    """
    One DOT node per trie node; FULL leaves are filled boxes, EMPTY leaves
    plain boxes, and EMPTY leaves at, above or below a stem listed in `deleted`
    are drawn dashed.
    """
    lines: List[str] = [f'digraph "{name}" {{', "  node [fontname=monospace];"]
    marked = tuple(deleted)

    def _walk(node: Node, stem: str) -> None:
        label = stem or "ε"
        if isinstance(node, Leaf):
            style = "filled" if node.full else "solid"
            if not node.full and any(stem.startswith(d) or d.startswith(stem) for d in marked):
                style += ",dashed"
            lines.append(f'  {_node_id(stem)} [label="{label}" shape=box style="{style}"];')
            return
        lines.append(f'  {_node_id(stem)} [label="{label}" shape=circle];')
        for bit, child in (("0", node.zero), ("1", node.one)):
            _walk(child, stem + bit)
            lines.append(f'  {_node_id(stem)} -> {_node_id(stem + bit)} [label="{bit}"];')

    _walk(c.root, "")
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_dot(trace: Iterable[Mapping[str, str]], name: str = "bisection") -> str:
    """A chain of intervals [a, b] with the branch taken at each midpoint."""
    lines = [f'digraph "{name}" {{', "  rankdir=LR;", "  node [fontname=monospace shape=record];"]
    previous: Optional[str] = None
    prev_branch = ""
    for step, entry in enumerate(trace, start=1):
        node = f'"s{step}"'
        label = f"{{{entry['a']} | {entry['mid']} | {entry['b']}}}"
        colour = ' color="darkgreen"' if entry["branch"] == "HIT" else ""
        lines.append(f'  {node} [label="{label}"{colour}];')
        if previous is not None:
            lines.append(f'  {previous} -> {node} [label="{prev_branch}"];')
        previous, prev_branch = node, entry["branch"]
    lines.append("}")
    return "\n".join(lines) + "\n"
