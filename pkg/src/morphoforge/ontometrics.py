"""Complexity metrics and concept union for leveled concept graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import DegenerateDataError, LevelConflictError, MorphoforgeError, StructureError


def fold_label(label):
    return label.strip().casefold()


@dataclass(frozen=True)
class Edge:
    parent: str
    child: str
    relation: str = ""
    beta: float | None = None


@dataclass
class Ontograph:
    """Concept graph: labelled vertices on levels, generalisation edges.

    Vertices are keyed by folded label.  Level-0 vertices are roots; a graph
    with several roots is a forest of ontographs (one per root).  Input
    graphs require every edge to descend exactly one level; unions only
    require edges to descend.
    """

    labels: dict[str, str] = field(default_factory=dict)
    levels: dict[str, int] = field(default_factory=dict)
    alpha: dict[str, float] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    strict_levels: bool = True

    def add_vertex(self, label, level, alpha=None):
        key = fold_label(label)
        if key in self.levels:
            raise StructureError(f"duplicate vertex {label!r}")
        if level < 0:
            raise StructureError(f"vertex {label!r}: negative level")
        if alpha is not None and alpha < 0:
            raise StructureError(f"vertex {label!r}: negative weight")
        self.labels[key] = label
        self.levels[key] = level
        if alpha is not None:
            self.alpha[key] = alpha
        return key

    def add_edge(self, parent, child, relation="", beta=None):
        if beta is not None and beta < 0:
            raise StructureError(f"edge {parent!r}->{child!r}: negative weight")
        self.edges.append(Edge(fold_label(parent), fold_label(child), relation, beta))

    @property
    def vertices(self):
        return set(self.levels)

    def roots(self):
        return sorted(v for v, h in self.levels.items() if h == 0)

    def out_degree(self):
        deg = dict.fromkeys(self.levels, 0)
        for e in self.edges:
            deg[e.parent] += 1
        return deg

    def validate(self):
        if not self.levels:
            raise StructureError("empty ontograph")
        if not self.roots():
            raise StructureError("no root vertex at level 0")
        has_parent = set()
        for e in self.edges:
            for end in (e.parent, e.child):
                if end not in self.levels:
                    raise StructureError(f"edge endpoint {end!r} is not a vertex")
            hp, hc = self.levels[e.parent], self.levels[e.child]
            if hc <= hp:
                raise LevelConflictError(
                    f"edge {self.labels[e.parent]!r}(level {hp}) -> {self.labels[e.child]!r}(level {hc}) "
                    "does not descend")
            if self.strict_levels and hc != hp + 1:
                raise StructureError(
                    f"edge {self.labels[e.parent]!r} -> {self.labels[e.child]!r} skips a level")
            has_parent.add(e.child)
        for v, h in self.levels.items():
            if h > 0 and v not in has_parent:
                raise StructureError(f"vertex {self.labels[v]!r} is disconnected (no parent)")
        return self

    def label_set(self):
        return frozenset(self.levels)

    def edge_set(self):
        return frozenset((e.parent, e.child, e.relation) for e in self.edges)

    # -- file format: V<TAB>label<TAB>level<TAB>alpha? / E<TAB>parent<TAB>child<TAB>rel?<TAB>beta?

    @classmethod
    def parse(cls, text, source="<ontograph>"):
        og = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.startswith("#"):
                continue
            parts = raw.split("\t")
            try:
                if parts[0] == "V" and len(parts) in (3, 4):
                    alpha = float(parts[3]) if len(parts) == 4 and parts[3] else None
                    og.add_vertex(parts[1], int(parts[2]), alpha)
                elif parts[0] == "E" and 3 <= len(parts) <= 5:
                    rel = parts[3] if len(parts) > 3 else ""
                    beta = float(parts[4]) if len(parts) == 5 and parts[4] else None
                    og.add_edge(parts[1], parts[2], rel, beta)
                else:
                    raise StructureError("expected a V or E record")
            except (ValueError, StructureError) as exc:
                raise StructureError(f"{source}:{lineno}: {exc}") from None
        return og.validate()

    @classmethod
    def load(cls, path):
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))

    def dumps(self):
        lines = []
        for v in sorted(self.levels, key=lambda v: (self.levels[v], v)):
            a = self.alpha.get(v)
            lines.append("\t".join(["V", self.labels[v], str(self.levels[v])]
                                   + ([repr_num(a)] if a is not None else [])))
        for e in self.edges:
            rec = ["E", self.labels[e.parent], self.labels[e.child], e.relation]
            if e.beta is not None:
                rec.append(repr_num(e.beta))
            lines.append("\t".join(rec))
        return "\n".join(lines) + "\n"


def repr_num(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def vertex_complexity(og):
    """One per root plus the sum of all out-degrees."""
    og.validate()
    return len(og.roots()) + sum(og.out_degree().values())


def uniform_complexity(branching, depth):
    """Vertex count of a uniform tree with ``depth`` levels and fan-out ``branching``."""
    if branching < 1 or depth < 1:
        raise ValueError("branching and depth must be >= 1")
    if branching == 1:
        return depth
    return (1 - branching ** depth) // (1 - branching)


def weighted_complexity(og):
    """Return ``(W_weighted, density)`` where density is ``W0 / W_weighted``.

    ``W_weighted`` sums each vertex weight plus the weights of its outgoing
    edges; ``W0`` is :func:`vertex_complexity`.
    """
    w0 = vertex_complexity(og)
    parts = []
    for v in sorted(og.levels):
        if v not in og.alpha:
            raise MorphoforgeError(f"vertex {og.labels[v]!r} has no weight")
        parts.append(og.alpha[v])
    for e in og.edges:
        if e.beta is None:
            raise MorphoforgeError(f"edge {og.labels[e.parent]!r}->{og.labels[e.child]!r} has no weight")
        parts.append(e.beta)
    total = math.fsum(parts)
    if total <= 0:
        raise DegenerateDataError("weighted complexity is zero; density undefined")
    return total, w0 / total


def concept_union(graphs):
    """Merge ontographs by folded label.

    Levels of shared labels take the minimum; edges are united (identity is
    parent, child, relation).  Weights of shared vertices/edges take the
    maximum.  A merged edge that no longer descends raises
    :class:`LevelConflictError`.
    """
    graphs = list(graphs)
    if not graphs:
        raise ValueError("nothing to unite")
    out = Ontograph(strict_levels=False)
    for g in graphs:
        for v, h in g.levels.items():
            if v in out.levels:
                out.levels[v] = min(out.levels[v], h)
                out.labels[v] = min(out.labels[v], g.labels[v])
            else:
                out.levels[v] = h
                out.labels[v] = g.labels[v]
            if v in g.alpha:
                out.alpha[v] = max(out.alpha.get(v, g.alpha[v]), g.alpha[v])
    edges = {}
    for g in graphs:
        for e in g.edges:
            key = (e.parent, e.child, e.relation)
            prev = edges.get(key)
            if prev is None or (e.beta is not None and (prev.beta is None or e.beta > prev.beta)):
                edges[key] = e
    out.edges = [edges[k] for k in sorted(edges)]
    return out.validate()


def uniform_tree(branching, depth, prefix="v"):
    """Explicit uniform tree with ``depth`` levels, each inner vertex having ``branching`` children."""
    og = Ontograph()
    og.add_vertex(f"{prefix}0", 0)
    frontier = [f"{prefix}0"]
    counter = 1
    for level in range(1, depth):
        nxt = []
        for parent in frontier:
            for _ in range(branching):
                name = f"{prefix}{counter}"
                counter += 1
                og.add_vertex(name, level)
                og.add_edge(parent, name)
                nxt.append(name)
        frontier = nxt
    return og.validate()


def metrics(og):
    out = {"vertices": len(og.levels), "edges": len(og.edges), "roots": len(og.roots()),
           "depth": max(og.levels.values()) + 1, "W": vertex_complexity(og)}
    try:
        w, omega = weighted_complexity(og)
        out["Wweighted"] = w
        out["omega"] = omega
    except MorphoforgeError:
        out["Wweighted"] = None
        out["omega"] = None
    return out
