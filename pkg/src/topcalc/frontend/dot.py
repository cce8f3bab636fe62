"""Graphviz export of reduction graphs."""

from __future__ import annotations

import hashlib

from ..metatheory import ReductionGraph
from .printer import print_term

LABEL_LIMIT = 80


def term_hash(key: str, length: int = 12) -> str:
    """Short stable digest of an alpha-key."""
    return hashlib.sha1(key.encode()).hexdigest()[:length]


def node_label(text: str, key: str) -> str:
    if len(text) <= LABEL_LIMIT:
        return text
    return f"{text[:LABEL_LIMIT]}... #{term_hash(key, 8)}"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ReductionGraph) -> str:
    ids = {k: f"n{i}" for i, k in enumerate(sorted(g.nodes, key=lambda k: (g.depth[k], k)))}
    sinks = set(g.sinks())
    lines = ["digraph reductions {", "  node [shape=box, fontname=monospace];"]
    for k, nid in sorted(ids.items(), key=lambda kv: int(kv[1][1:])):
        attrs = [f"label={_quote(node_label(print_term(g.nodes[k]), k))}"]
        if k == g.root:
            attrs.append("style=bold")
        if k in sinks:
            attrs.append("peripheries=2")
        lines.append(f"  {nid} [{', '.join(attrs)}];")
    for src, rule, dst in sorted(g.edges, key=lambda e: (int(ids[e[0]][1:]), int(ids[e[2]][1:]), e[1].value)):
        lines.append(f"  {ids[src]} -> {ids[dst]} [label={_quote(rule.value)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
