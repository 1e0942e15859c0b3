"""The GRAPH of graphs: levels, scores, optimal marks, filling sequences.

NODEs are isomorphism classes of connected comparison graphs, grouped into
levels by edge count; EDGEs join classes that differ by a single edge.
Scores attach Monte Carlo results to NODEs, after which each level gets an
optimal mark and the question sequences are read off as paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graphs import (
    CanonicalForm,
    GraphClass,
    LabeledGraph,
    canonical_form,
    class_from_graph6,
    is_connected,
    labeled_copies,
)
from .simulate import GraphScore, default_margins

META_MIN_N = 4
META_MAX_N = 8

Edge = tuple[int, int]


@dataclass(frozen=True)
class MetaGraph:
    """Levels of graph classes plus the single-edge-addition relation."""

    n: int
    levels: dict[int, tuple[GraphClass, ...]] = field(compare=False)
    meta_edges: frozenset[tuple[str, str]]  # (class g6 at level e, class g6 at level e+1)

    @property
    def e_min(self) -> int:
        return self.n - 1

    @property
    def e_max(self) -> int:
        return self.n * (self.n - 1) // 2

    def level_of(self, g6: str) -> int:
        for e, classes in self.levels.items():
            if any(c.g6 == g6 for c in classes):
                return e
        raise KeyError(g6)

    def upward(self, g6: str) -> list[str]:
        return sorted(upper for lower, upper in self.meta_edges if lower == g6)

    def downward(self, g6: str) -> list[str]:
        return sorted(lower for lower, upper in self.meta_edges if upper == g6)


def build_metagraph(n: int) -> MetaGraph:
    """Enumerate all levels and connect classes one edge apart."""
    if not META_MIN_N <= n <= META_MAX_N:
        raise ValueError(f"metagraph supported for {META_MIN_N} <= n <= {META_MAX_N}")
    from .graphs import enumerate_connected_classes

    levels = {
        e: tuple(enumerate_connected_classes(n, e))
        for e in range(n - 1, n * (n - 1) // 2 + 1)
    }
    edges = set()
    for e, classes in levels.items():
        if e == n - 1:
            continue
        for cls in classes:
            rep = cls.representative
            for edge in sorted(rep.edges):
                smaller = rep.without_edge(edge)
                if is_connected(smaller):
                    edges.add((canonical_form(smaller).graph6(), cls.g6))
    return MetaGraph(n=n, levels=levels, meta_edges=frozenset(edges))


@dataclass(frozen=True)
class ScoredMetaGraph:
    """Metagraph with scores, per-level optimal marks and margin-based ties."""

    meta: MetaGraph
    scores: dict[str, GraphScore] = field(compare=False)
    optimal: dict[int, str] = field(compare=False)
    near_optimal: dict[int, tuple[str, ...]] = field(compare=False)
    margins: dict[str, float] = field(compare=False)
    exact_ties: dict[int, bool] = field(compare=False)

    def __eq__(self, other):
        if not isinstance(other, ScoredMetaGraph):
            return NotImplemented
        return (
            self.meta == other.meta
            and {k: v.to_dict() for k, v in self.scores.items()}
            == {k: v.to_dict() for k, v in other.scores.items()}
            and self.optimal == other.optimal
            and self.near_optimal == other.near_optimal
            and self.margins == other.margins
            and self.exact_ties == other.exact_ties
        )


def mark_optimal(meta: MetaGraph, scores: dict[str, GraphScore], margins=None) -> ScoredMetaGraph:
    """Pick the per-level argmin of mean Euclidean distance (level-averaged).

    Classes whose distance or rank correlation is within twice the margin of
    error of the level's best are recorded as near-optimal; exact value ties
    are broken toward the smaller canonical bitstring and flagged.
    """
    sample_counts = set()
    for e, classes in meta.levels.items():
        for cls in classes:
            if cls.g6 not in scores:
                raise ValueError(f"missing score for class {cls.g6} at level {e}")
            sample_counts.update(s.n_samples for s in scores[cls.g6].levels.values())
    if margins is None:
        margins = default_margins(min(sample_counts))
    optimal: dict[int, str] = {}
    near: dict[int, tuple[str, ...]] = {}
    ties: dict[int, bool] = {}
    for e, classes in sorted(meta.levels.items()):
        ranked = sorted(
            classes, key=lambda c: (scores[c.g6].avg_mean_d_euc(), c.canon.bits)
        )
        best = ranked[0]
        best_d = scores[best.g6].avg_mean_d_euc()
        best_tau = max(scores[c.g6].avg_mean_tau() for c in classes)
        optimal[e] = best.g6
        ties[e] = len(ranked) > 1 and scores[ranked[1].g6].avg_mean_d_euc() == best_d
        close = []
        for cls in ranked[1:]:
            sc = scores[cls.g6]
            if (
                sc.avg_mean_d_euc() - best_d <= 2 * margins["d_euc"]
                or best_tau - sc.avg_mean_tau() <= 2 * margins["tau"]
            ):
                close.append(cls.g6)
        near[e] = tuple(close)
    return ScoredMetaGraph(
        meta=meta,
        scores=dict(scores),
        optimal=optimal,
        near_optimal=near,
        margins=dict(margins),
        exact_ties=ties,
    )


@dataclass(frozen=True)
class FillingSequence:
    """Concrete ordered comparison list whose prefixes walk the metagraph."""

    n: int
    kind: str  # star | cycle | main | standalone
    steps: tuple[Edge, ...]
    groups: tuple[int, ...]  # sizes of interchangeable runs, in order
    start_level: int  # edge count of the first constrained prefix
    realized_levels: dict[int, str] = field(compare=False)  # e -> optimal | near_optimal

    def __post_init__(self):
        if sum(self.groups) != len(self.steps):
            raise ValueError("group sizes must partition the steps")

    def prefix_graph(self, k: int) -> LabeledGraph:
        return LabeledGraph(self.n, frozenset(self.steps[:k]))

    def group_boundaries(self) -> list[int]:
        out = []
        total = 0
        for size in self.groups:
            total += size
            out.append(total)
        return out

    def group_of_step(self, index: int) -> int:
        """Group number (0-based) containing the given 0-based step index."""
        total = 0
        for g, size in enumerate(self.groups):
            total += size
            if index < total:
                return g
        raise IndexError(index)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "steps": [list(s) for s in self.steps],
            "groups": list(self.groups),
            "start_level": self.start_level,
            "realized_levels": {str(e): flag for e, flag in sorted(self.realized_levels.items())},
        }

    @staticmethod
    def from_dict(d: dict) -> "FillingSequence":
        return FillingSequence(
            n=d["n"],
            kind=d["kind"],
            steps=tuple((int(i), int(j)) for i, j in d["steps"]),
            groups=tuple(d["groups"]),
            start_level=d["start_level"],
            realized_levels={int(e): flag for e, flag in d["realized_levels"].items()},
        )


def _lexmin_copy(cls: GraphClass) -> list[Edge]:
    """The labeled copy of the class whose sorted edge list is smallest."""
    best = min(labeled_copies(cls.representative), key=lambda es: tuple(sorted(es)))
    return sorted(best)


def _best_path(scored: ScoredMetaGraph) -> list[str]:
    """Path ending at the complete graph that hits the most per-level optima.

    Ties are resolved toward the smallest total distance excess, then toward
    the shortest path, then by canonical bits at each divergence.
    """
    meta = scored.meta
    avg_d = {g6: sc.avg_mean_d_euc() for g6, sc in scored.scores.items()}
    excess = {}
    level_by_g6 = {}
    for e, classes in meta.levels.items():
        base = avg_d[scored.optimal[e]]
        for cls in classes:
            excess[cls.g6] = avg_d[cls.g6] - base
            level_by_g6[cls.g6] = e
    up = {g6: [] for g6 in level_by_g6}
    for lower, upper in meta.meta_edges:
        up[lower].append(upper)
    # value of the best path from a node (inclusive) up to the complete graph
    value: dict[str, tuple[int, float]] = {}
    succ: dict[str, str | None] = {}
    for e in range(meta.e_max, meta.e_min - 1, -1):
        for cls in meta.levels[e]:
            g6 = cls.g6
            own = (1 if scored.optimal[e] == g6 else 0, -excess[g6])
            if e == meta.e_max:
                value[g6] = own
                succ[g6] = None
                continue
            choices = sorted(
                up[g6], key=lambda u: (value[u], -class_from_graph6(u).canon.bits), reverse=True
            )
            best_up = choices[0]
            value[g6] = (own[0] + value[best_up][0], own[1] + value[best_up][1])
            succ[g6] = best_up
    # pick the start: most optima, least excess, then prefer the higher level
    start = max(
        (cls.g6 for e in meta.levels for cls in meta.levels[e]),
        key=lambda g6: (value[g6], level_by_g6[g6], -class_from_graph6(g6).canon.bits),
    )
    path = [start]
    while succ[path[-1]] is not None:
        path.append(succ[path[-1]])
    return path


def _realize_path(scored: ScoredMetaGraph, path: list[str], kind: str) -> FillingSequence:
    """Turn a class path into a labeled comparison order, smallest-first."""
    meta = scored.meta
    n = meta.n
    start_cls = class_from_graph6(path[0])
    head = _lexmin_copy(start_cls)
    steps: list[Edge] = list(head)
    current = set(head)
    for g6 in path[1:]:
        target = class_from_graph6(g6).canon
        for cand in sorted(LabeledGraph(n, frozenset(current)).non_edges()):
            if canonical_form(LabeledGraph(n, frozenset(current | {cand}))) == target:
                steps.append(cand)
                current.add(cand)
                break
        else:
            raise RuntimeError(f"no single edge extends the realization to {g6}")
    realized = {}
    for offset, g6 in enumerate(path):
        e = start_cls.e + offset
        realized[e] = "optimal" if scored.optimal[e] == g6 else "near_optimal"
    return FillingSequence(
        n=n,
        kind=kind,
        steps=tuple(steps),
        groups=(len(head),) + (1,) * (len(path) - 1),
        start_level=start_cls.e,
        realized_levels=realized,
    )


def _standalone(scored: ScoredMetaGraph, e: int) -> FillingSequence:
    cls = class_from_graph6(scored.optimal[e])
    steps = tuple(_lexmin_copy(cls))
    kind = "star" if cls.is_star else ("cycle" if cls.is_cycle else "standalone")
    return FillingSequence(
        n=scored.meta.n,
        kind=kind,
        steps=steps,
        groups=(len(steps),),
        start_level=e,
        realized_levels={e: "optimal"},
    )


def extract_sequences(scored: ScoredMetaGraph) -> list[FillingSequence]:
    """Standalone optimal prefixes below the main path, then the main sequence.

    The main sequence realizes the path found by _best_path; levels whose
    path node is not the per-level optimum are flagged near_optimal (the
    in-between NODEs admitted to keep the path connected).
    """
    path = _best_path(scored)
    start_e = scored.meta.level_of(path[0])
    out = [_standalone(scored, e) for e in range(scored.meta.e_min, start_e)]
    out.append(_realize_path(scored, path, "main"))
    return out


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_metagraph(scored: ScoredMetaGraph, format: str = "dot") -> str:
    """Render the scored metagraph as Graphviz DOT or a faithful JSON dump."""
    if format == "json":
        return _export_json(scored)
    if format == "dot":
        return _export_dot(scored)
    raise ValueError(f"unknown export format {format!r}")


def _export_dot(scored: ScoredMetaGraph) -> str:
    meta = scored.meta
    lines = [f"graph graph_of_graphs_n{meta.n} {{", "  rankdir=TB;",
             '  node [shape=box, style=filled, fillcolor=white];']
    for e in sorted(meta.levels):
        lines.append(f"  subgraph cluster_e{e} {{")
        lines.append(f'    rank=same; label="e={e}"; style=invis;')
        for cls in meta.levels[e]:
            color = "white"
            if scored.optimal.get(e) == cls.g6:
                color = "green"
            elif cls.g6 in scored.near_optimal.get(e, ()):
                color = "orange"
            label = f"{cls.g6} deg={','.join(map(str, cls.degree_sequence))}"
            lines.append(
                f"    {_dot_quote(cls.g6)} [label={_dot_quote(label)}, fillcolor={color}];"
            )
        lines.append("  }")
    for lower, upper in sorted(meta.meta_edges):
        e_low = meta.level_of(lower)
        both_optimal = scored.optimal.get(e_low) == lower and scored.optimal.get(e_low + 1) == upper
        style = " [color=green, penwidth=2]" if both_optimal else ""
        lines.append(f"  {_dot_quote(lower)} -- {_dot_quote(upper)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_json(scored: ScoredMetaGraph) -> str:
    meta = scored.meta
    doc = {
        "schema": "pcmfill-metagraph/1",
        "n": meta.n,
        "levels": {
            str(e): [cls.to_dict() for cls in classes]
            for e, classes in sorted(meta.levels.items())
        },
        "meta_edges": sorted([list(pair) for pair in meta.meta_edges]),
        "scores": {g6: sc.to_dict() for g6, sc in sorted(scored.scores.items())} or None,
        "optimal": {str(e): g6 for e, g6 in sorted(scored.optimal.items())},
        "near_optimal": {str(e): list(v) for e, v in sorted(scored.near_optimal.items())},
        "margins": scored.margins,
        "exact_ties": {str(e): v for e, v in sorted(scored.exact_ties.items())},
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def import_metagraph_json(text: str) -> ScoredMetaGraph:
    doc = json.loads(text)
    if doc.get("schema") != "pcmfill-metagraph/1":
        raise ValueError(f"unknown metagraph schema {doc.get('schema')!r}")
    levels = {
        int(e): tuple(class_from_graph6(c["g6"]) for c in classes)
        for e, classes in doc["levels"].items()
    }
    meta = MetaGraph(
        n=doc["n"],
        levels=levels,
        meta_edges=frozenset((lower, upper) for lower, upper in doc["meta_edges"]),
    )
    scores = {
        g6: GraphScore.from_dict(sc) for g6, sc in (doc["scores"] or {}).items()
    }
    return ScoredMetaGraph(
        meta=meta,
        scores=scores,
        optimal={int(e): g6 for e, g6 in doc["optimal"].items()},
        near_optimal={int(e): tuple(v) for e, v in doc["near_optimal"].items()},
        margins=doc["margins"],
        exact_ties={int(e): v for e, v in doc["exact_ties"].items()},
    )
