"""Graph models, community detection and DOT / GraphML / JSON export.

Two graph shapes are used downstream:

* :class:`BipartiteGraph` links terms (left side) to publications or
  authors (right side).
* :class:`CooccurrenceGraph` links keyphrases that share publications,
  weighted by the number of shared publications.

Both are immutable; constructors validate their invariants.
"""
from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Union

from .errors import UnknownTermError
from .keyphrase import KeyphraseIndex

TERM = "term"
PUBLICATION = "publication"
AUTHOR = "author"
_KINDS = (TERM, PUBLICATION, AUTHOR)


@dataclass(frozen=True)
class BipartiteGraph:
    left: frozenset[str]
    right: frozenset[str]
    edges: Mapping[tuple[str, str], int]
    right_kind: str = PUBLICATION
    left_kind: str = TERM

    def __post_init__(self):
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))
        object.__setattr__(self, "edges", dict(sorted(self.edges.items())))
        if self.left_kind not in _KINDS or self.right_kind not in _KINDS:
            raise ValueError("unknown node kind")
        for (a, b), w in self.edges.items():
            if a not in self.left or b not in self.right:
                raise ValueError(f"edge ({a!r}, {b!r}) does not cross the bipartition")
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) has weight {w!r} < 1")

    def degree(self, label: str, side: str = "right") -> int:
        pos = 1 if side == "right" else 0
        return sum(1 for e in self.edges if e[pos] == label)

    def neighbors(self, label: str, side: str = "left") -> set[str]:
        if side == "left":
            return {b for a, b in self.edges if a == label}
        return {a for a, b in self.edges if b == label}


@dataclass(frozen=True)
class CooccurrenceGraph:
    nodes: frozenset[str]
    edges: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        canon = {}
        for (a, b), w in self.edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) references an unknown node")
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) has weight {w!r} < 1")
            key = (a, b) if a < b else (b, a)
            if key in canon and canon[key] != w:
                raise ValueError(f"conflicting weights for {key}")
            canon[key] = w
        object.__setattr__(self, "edges", dict(sorted(canon.items())))

    def weight(self, a: str, b: str) -> int:
        return self.edges.get((a, b) if a < b else (b, a), 0)

    def adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {n: {} for n in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        return adj

    def filter_edges(self, min_weight: int) -> "CooccurrenceGraph":
        return CooccurrenceGraph(
            self.nodes, {e: w for e, w in self.edges.items() if w >= min_weight})


Graph = Union[BipartiteGraph, CooccurrenceGraph]


@dataclass(frozen=True)
class Community:
    id: int
    members: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValueError("community must have at least one member")


def build_cooccurrence(index: KeyphraseIndex, terms: Iterable[str]) -> CooccurrenceGraph:
    """Link terms that share at least one publication.

    Edge weight is the number of shared publications. Terms without any
    partner stay in the graph as isolated nodes.
    """
    terms = sorted(set(terms))
    for t in terms:
        if t not in index:
            raise UnknownTermError(t)
    # invert postings restricted to the requested terms
    by_doc: dict[str, list[str]] = defaultdict(list)
    for t in terms:
        for d in index[t].doc_ids:
            by_doc[d].append(t)
    weights: dict[tuple[str, str], int] = defaultdict(int)
    for doc_terms in by_doc.values():
        for a, b in combinations(sorted(doc_terms), 2):
            weights[(a, b)] += 1
    return CooccurrenceGraph(frozenset(terms), dict(weights))


# -- community detection ----------------------------------------------------

def modularity(graph: CooccurrenceGraph, communities: Iterable[Iterable[str]],
               resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a partition of ``graph.nodes``."""
    m = sum(graph.edges.values())
    if m == 0:
        return 0.0
    degree = defaultdict(int)
    for (a, b), w in graph.edges.items():
        degree[a] += w
        degree[b] += w
    q = 0.0
    for members in communities:
        members = set(members)
        inner = sum(w for (a, b), w in graph.edges.items() if a in members and b in members)
        tot = sum(degree[n] for n in members)
        q += inner / m - resolution * (tot / (2 * m)) ** 2
    return q


def _one_level(adj: list[dict[int, float]], degree: list[float], m2: float,
               resolution: float) -> tuple[list[int], bool]:
    """Local-move phase: each node joins the neighbouring community with the
    best modularity gain. Nodes are visited in index order; among equal gains
    the lowest community id wins, and a node only leaves its community on a
    strict improvement."""
    n = len(adj)
    comm = list(range(n))
    tot = list(degree)
    improved = False
    eps = 1e-12
    moved = True
    while moved:
        moved = False
        for i in range(n):
            ci = comm[i]
            k_i = degree[i]
            links: dict[int, float] = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] += w
            tot[ci] -= k_i
            best_c = ci
            best_gain = links.get(ci, 0.0) - resolution * tot[ci] * k_i / m2
            for c in sorted(links):
                gain = links[c] - resolution * tot[c] * k_i / m2
                if gain > best_gain + eps:
                    best_c, best_gain = c, gain
            tot[best_c] += k_i
            if best_c != ci:
                comm[i] = best_c
                moved = improved = True
    return comm, improved


def _renumber(comm: list[int]) -> list[int]:
    mapping: dict[int, int] = {}
    return [mapping.setdefault(c, len(mapping)) for c in comm]


def _components(nodes: Iterable[str], adj: Mapping[str, Mapping[str, int]]) -> list[set[str]]:
    seen: set[str] = set()
    out = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        out.append(comp)
    return out


def louvain_partition(graph: CooccurrenceGraph, resolution: float = 1.0) -> list[set[str]]:
    """Deterministic multi-level greedy modularity optimisation."""
    labels = sorted(graph.nodes)
    if not labels:
        return []
    pos = {lab: i for i, lab in enumerate(labels)}
    adj: list[dict[int, float]] = [dict() for _ in labels]
    for (a, b), w in graph.edges.items():
        adj[pos[a]][pos[b]] = adj[pos[a]].get(pos[b], 0) + w
        adj[pos[b]][pos[a]] = adj[pos[b]].get(pos[a], 0) + w
    degree = [float(sum(nb.values())) for nb in adj]
    m2 = sum(degree)
    membership = list(range(len(labels)))
    if m2 > 0:
        while True:
            comm, improved = _one_level(adj, degree, m2, resolution)
            if not improved:
                break
            comm = _renumber(comm)
            membership = [comm[c] for c in membership]
            k = max(comm) + 1
            agg: list[dict[int, float]] = [defaultdict(float) for _ in range(k)]
            agg_degree = [0.0] * k
            for i, nbrs in enumerate(adj):
                agg_degree[comm[i]] += degree[i]
                for j, w in nbrs.items():
                    if comm[i] != comm[j]:
                        agg[comm[i]][comm[j]] += w
            adj, degree = [dict(d) for d in agg], agg_degree
    groups: dict[int, set[str]] = defaultdict(set)
    for lab, c in zip(labels, membership):
        groups[c].add(lab)
    # a greedy pass can leave a community internally disconnected; split it,
    # which never lowers modularity
    full_adj = graph.adjacency()
    parts = []
    for members in groups.values():
        sub = {n: {nb: w for nb, w in full_adj[n].items() if nb in members} for n in members}
        parts.extend(_components(members, sub))
    return parts


EXACT_COMPONENT_LIMIT = 8


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _exact_component(members: set[str], adj: Mapping[str, Mapping[str, int]],
                     m: float, resolution: float) -> list[set[str]]:
    """Best partition of one connected component by enumeration.

    Scores use the whole graph's edge total ``m``, so the per-component
    optima add up to the global optimum.
    """
    degree = {n: sum(adj[n].values()) for n in members}
    best, best_q = None, float("-inf")
    for part in _set_partitions(sorted(members)):
        q = 0.0
        for block in part:
            bs = set(block)
            inner = sum(w for n in block for nb, w in adj[n].items() if nb in bs) / 2
            tot = sum(degree[n] for n in block)
            q += inner / m - resolution * (tot / (2 * m)) ** 2
        if q > best_q + 1e-12:
            best, best_q = part, q
    return [set(b) for b in best]


def detect_communities(graph: CooccurrenceGraph, min_edge_weight: int = 1,
                       resolution: float = 1.0) -> list[Community]:
    """Partition keyphrases into communities.

    Edges lighter than ``min_edge_weight`` are ignored. Large components are
    split by :func:`louvain_partition`; components of at most
    ``EXACT_COMPONENT_LIMIT`` nodes are solved exactly, where greedy moves
    occasionally stall below the optimum. Communities never span connected
    components and are numbered by their smallest member label, so ids are
    stable across runs.
    """
    if min_edge_weight > 1:
        graph = graph.filter_edges(min_edge_weight)
    m = sum(graph.edges.values())
    adj = graph.adjacency()
    parts = []
    small = set()
    for comp in _components(graph.nodes, adj):
        if len(comp) == 1 or m == 0:
            parts.append(comp)
            small |= comp
        elif len(comp) <= EXACT_COMPONENT_LIMIT:
            parts.extend(_exact_component(comp, adj, m, resolution))
            small |= comp
    if len(small) < len(graph.nodes):
        parts.extend(p for p in louvain_partition(graph, resolution) if not p & small)
    parts = sorted(parts, key=min)
    return [Community(i, frozenset(p)) for i, p in enumerate(parts)]


# -- export -----------------------------------------------------------------

def _nodes(graph: Graph) -> list[tuple[str, str]]:
    """(label, kind) pairs in emission order."""
    if isinstance(graph, BipartiteGraph):
        nodes = [(lab, graph.left_kind) for lab in graph.left]
        nodes += [(lab, graph.right_kind) for lab in graph.right]
    else:
        nodes = [(lab, TERM) for lab in graph.nodes]
    return sorted(nodes)


def _edge_ids(graph: Graph, ids: Mapping[tuple[str, str], str]):
    if isinstance(graph, BipartiteGraph):
        for (a, b), w in graph.edges.items():
            yield ids[(a, graph.left_kind)], ids[(b, graph.right_kind)], w
    else:
        for (a, b), w in graph.edges.items():
            yield ids[(a, TERM)], ids[(b, TERM)], w


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(graph: Graph, name: str = "G") -> str:
    nodes = _nodes(graph)
    ids = {node: f"n{i}" for i, node in enumerate(nodes)}
    lines = [f"graph {_dot_quote(name)} {{"]
    for (label, kind), nid in ids.items():
        lines.append(f"  {nid} [label={_dot_quote(label)}, kind={kind}];")
    for a, b, w in _edge_ids(graph, ids):
        lines.append(f"  {a} -- {b} [weight={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def to_graphml(graph: Graph) -> str:
    root = ET.Element("graphml", {"xmlns": _GRAPHML_NS})
    for key_id, target, name, typ in (("d0", "node", "label", "string"),
                                      ("d1", "node", "kind", "string"),
                                      ("d2", "edge", "weight", "int")):
        ET.SubElement(root, "key", {"id": key_id, "for": target,
                                    "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "undirected"})
    nodes = _nodes(graph)
    ids = {node: f"n{i}" for i, node in enumerate(nodes)}
    for (label, kind), nid in ids.items():
        el = ET.SubElement(g, "node", {"id": nid})
        ET.SubElement(el, "data", {"key": "d0"}).text = label
        ET.SubElement(el, "data", {"key": "d1"}).text = kind
    for i, (a, b, w) in enumerate(_edge_ids(graph, ids)):
        el = ET.SubElement(g, "edge", {"id": f"e{i}", "source": a, "target": b})
        ET.SubElement(el, "data", {"key": "d2"}).text = str(w)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def graph_to_dict(graph: Graph) -> dict:
    d = {"type": "bipartite" if isinstance(graph, BipartiteGraph) else "cooccurrence"}
    if isinstance(graph, BipartiteGraph):
        # kept explicitly so that a graph with an empty side still round-trips
        d["sides"] = {"left": graph.left_kind, "right": graph.right_kind}
    d["nodes"] = [{"label": lab, "kind": kind} for lab, kind in _nodes(graph)]
    d["edges"] = [{"src": a, "dst": b, "weight": w} for (a, b), w in graph.edges.items()]
    return d


def to_json(graph: Graph) -> str:
    return json.dumps(graph_to_dict(graph), indent=1, ensure_ascii=False) + "\n"


def graph_from_dict(d: dict) -> Graph:
    edges = {(e["src"], e["dst"]): e["weight"] for e in d["edges"]}
    if d.get("type", "bipartite") == "cooccurrence":
        return CooccurrenceGraph(frozenset(n["label"] for n in d["nodes"]), edges)
    sides = d.get("sides", {})
    left_kind = sides.get("left", TERM)
    if "right" in sides:
        right_kind = sides["right"]
    else:
        right_kind = next((n["kind"] for n in d["nodes"] if n["kind"] != left_kind), PUBLICATION)
    # bipartite edges always run left -> right
    left = frozenset(n["label"] for n in d["nodes"] if n["kind"] == left_kind)
    right = frozenset(n["label"] for n in d["nodes"] if n["kind"] != left_kind)
    return BipartiteGraph(left, right, edges, right_kind=right_kind, left_kind=left_kind)


def from_json(text: str) -> Graph:
    return graph_from_dict(json.loads(text))


FORMATS = {"dot": to_dot, "graphml": to_graphml, "json": to_json}


def export_graph(graph: Graph, format: str = "dot") -> str:
    try:
        writer = FORMATS[format]
    except KeyError:
        raise ValueError(f"unsupported format {format!r}; choose from {sorted(FORMATS)}") from None
    return writer(graph)
