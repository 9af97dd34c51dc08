"""Aspect relation graph: construction, PageRank ranking, hierarchy.

Nodes are normalized aspects; a directed edge runs satellite -> nucleus
for every aspect pair seen at an internal tree node whose two head EDUs
are both active and carry aspects.  Merging per-document results is a
plain counter sum, so it is commutative and worker-count independent.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .adt import AspectDiscourseTree, AspectEDU, AInternal, head_unit
from .discourse import NN, NS, RelationLabel


@dataclass(frozen=True)
class AspectRelation:
    source: str  # satellite-side aspect
    target: str  # nucleus-side aspect
    relation: RelationLabel
    doc_id: str


@dataclass
class NodeStats:
    frequency: int = 0
    sentiment_counts: list[int] = field(default_factory=lambda: [0, 0, 0])


@dataclass
class EdgeStats:
    weight: int = 0
    relation_counts: dict[RelationLabel, int] = field(default_factory=dict)


@dataclass
class ARRG:
    nodes: dict[str, NodeStats] = field(default_factory=dict)
    edges: dict[tuple[str, str], EdgeStats] = field(default_factory=dict)

    def node(self, aspect: str) -> NodeStats:
        stats = self.nodes.get(aspect)
        if stats is None:
            stats = self.nodes[aspect] = NodeStats()
        return stats

    def add_occurrence(self, aspect: str, polarity_index: int) -> None:
        stats = self.node(aspect)
        stats.frequency += 1
        stats.sentiment_counts[polarity_index] += 1

    def add_relation(self, relation: AspectRelation) -> None:
        self.node(relation.source)
        self.node(relation.target)
        stats = self.edges.get((relation.source, relation.target))
        if stats is None:
            stats = self.edges[(relation.source, relation.target)] = EdgeStats()
        stats.weight += 1
        stats.relation_counts[relation.relation] = \
            stats.relation_counts.get(relation.relation, 0) + 1


@dataclass(frozen=True)
class RankedAspect:
    aspect: str
    score: float


@dataclass(frozen=True)
class AspectHierarchyTree:
    root: str
    children: dict[str, tuple[str, ...]]


def extract_relations(adt: AspectDiscourseTree) -> list[AspectRelation]:
    """Breadth-first pass pairing the head EDUs of each internal node."""
    relations: list[AspectRelation] = []
    if not isinstance(adt.root, AInternal):
        return relations
    queue: deque[AInternal] = deque([adt.root])
    while queue:
        node = queue.popleft()
        left_head = head_unit(node.left)
        right_head = head_unit(node.right)
        if left_head.active and right_head.active \
                and left_head.aspects and right_head.aspects:
            if node.nuclearity == NS:
                pairs = [(s, n) for s in right_head.aspects for n in left_head.aspects]
            elif node.nuclearity == NN:
                pairs = [(s, n) for s in right_head.aspects for n in left_head.aspects]
                pairs += [(s, n) for s in left_head.aspects for n in right_head.aspects]
            else:  # SN
                pairs = [(s, n) for s in left_head.aspects for n in right_head.aspects]
            for satellite, nucleus in pairs:
                if satellite.normalized == nucleus.normalized:
                    continue
                relations.append(AspectRelation(
                    source=satellite.normalized,
                    target=nucleus.normalized,
                    relation=node.relation,
                    doc_id=adt.doc_id,
                ))
        for child in (node.left, node.right):
            if isinstance(child, AInternal):
                queue.append(child)
    return relations


def merge_into_graph(
    graph: ARRG,
    relations: Iterable[AspectRelation],
    active_units: Iterable[AspectEDU],
) -> ARRG:
    """Fold one document's relations and active leaves into the graph."""
    for unit in active_units:
        if not unit.active:
            continue
        for candidate in unit.aspects:
            graph.add_occurrence(candidate.normalized, unit.polarity.index)
    for relation in relations:
        graph.add_relation(relation)
    return graph


def pagerank(
    graph: ARRG,
    damping: float = 0.85,
    eps: float = 1e-9,
    max_iter: int = 100,
) -> list[RankedAspect]:
    """Weighted PageRank with uniform teleport and dangling redistribution."""
    names = sorted(graph.nodes)
    n = len(names)
    if n == 0:
        raise ValueError("pagerank needs a non-empty graph")
    index = {name: i for i, name in enumerate(names)}

    out_weight = [0.0] * n
    out_edges: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (source, target), stats in graph.edges.items():
        s, t = index[source], index[target]
        out_weight[s] += stats.weight
        out_edges[s].append((t, float(stats.weight)))

    rank = [1.0 / n] * n
    for _ in range(max_iter):
        dangling = sum(rank[i] for i in range(n) if out_weight[i] == 0.0)
        base = (1.0 - damping) / n + damping * dangling / n
        new = [base] * n
        for i in range(n):
            if out_weight[i] == 0.0:
                continue
            share = damping * rank[i] / out_weight[i]
            for t, w in out_edges[i]:
                new[t] += share * w
        delta = sum(abs(new[i] - rank[i]) for i in range(n))
        rank = new
        if delta < eps:
            break

    ranked = [RankedAspect(name, rank[index[name]]) for name in names]
    ranked.sort(key=lambda r: (-r.score, r.aspect))
    return ranked


def filter_by_importance(ranked: Sequence[RankedAspect], factor: float) -> list[str]:
    """First ceil(factor * len) aspects of the ranked list."""
    if not 0.0 < factor <= 1.0:
        raise ValueError(f"importance factor must be in (0, 1], got {factor}")
    if not ranked:
        return []
    # round before ceil so 0.15 * 20 does not float up to 4
    kept = math.ceil(round(factor * len(ranked), 9))
    kept = min(max(kept, 1), len(ranked))
    return [r.aspect for r in ranked[:kept]]


def build_hierarchy(graph: ARRG, kept: Sequence[str]) -> AspectHierarchyTree:
    """Maximum spanning forest of the kept subgraph, rooted by rank.

    Undirected weights sum both edge directions; each component is rooted
    at its best-ranked member and children sort by rank.  Disconnected
    components hang under a synthetic "*" root.
    """
    if not kept:
        raise ValueError("cannot build a hierarchy from an empty aspect set")
    rank_of = {aspect: i for i, aspect in enumerate(kept)}

    undirected: dict[tuple[str, str], float] = {}
    for (source, target), stats in graph.edges.items():
        if source not in rank_of or target not in rank_of:
            continue
        key = (source, target) if source <= target else (target, source)
        undirected[key] = undirected.get(key, 0.0) + stats.weight

    # Kruskal, heaviest first, lexicographic tie-break
    parent = {aspect: aspect for aspect in kept}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    adjacency: dict[str, list[str]] = {aspect: [] for aspect in kept}
    for (u, v), w in sorted(undirected.items(), key=lambda kv: (-kv[1], kv[0])):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            adjacency[u].append(v)
            adjacency[v].append(u)

    components: dict[str, list[str]] = {}
    for aspect in kept:  # kept is rank-ordered, so roots come first
        components.setdefault(find(aspect), []).append(aspect)

    children: dict[str, list[str]] = {}
    roots: list[str] = []
    for members in components.values():
        root = min(members, key=lambda a: rank_of[a])
        roots.append(root)
        seen = {root}
        queue = deque([root])
        while queue:
            current = queue.popleft()
            kids = sorted((a for a in adjacency[current] if a not in seen),
                          key=lambda a: rank_of[a])
            children[current] = kids
            for kid in kids:
                seen.add(kid)
                queue.append(kid)

    roots.sort(key=lambda a: rank_of[a])
    if len(roots) == 1:
        root = roots[0]
    else:
        root = "*"
        children[root] = roots
    return AspectHierarchyTree(
        root=root,
        children={aspect: tuple(kids) for aspect, kids in children.items()},
    )


def graph_to_dict(graph: ARRG, ranked: Sequence[RankedAspect]) -> dict:
    """Stable serialization: nodes by pagerank desc then name, edges by key."""
    scores = {r.aspect: r.score for r in ranked}
    nodes = [
        {
            "aspect": name,
            "frequency": stats.frequency,
            "sentiment_counts": list(stats.sentiment_counts),
            "pagerank": scores.get(name, 0.0),
        }
        for name, stats in sorted(
            graph.nodes.items(),
            key=lambda kv: (-scores.get(kv[0], 0.0), kv[0]),
        )
    ]
    edges = [
        {
            "source": source,
            "target": target,
            "weight": stats.weight,
            "relation_counts": {
                label.value: count
                for label, count in sorted(stats.relation_counts.items(),
                                           key=lambda kv: kv[0].value)
            },
        }
        for (source, target), stats in sorted(graph.edges.items())
    ]
    return {"nodes": nodes, "edges": edges}


def graph_to_json(graph: ARRG, ranked: Sequence[RankedAspect]) -> str:
    return json.dumps(graph_to_dict(graph, ranked), indent=2, sort_keys=True)
