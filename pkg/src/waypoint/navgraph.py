"""Geocoded building graph with deterministic shortest-path routing.

Building elements (rooms, corridors, stairs, entrances) are nodes carrying
geocodes; undirected edges link them. Edge weights default to the great-
circle distance between endpoints, plus a configurable stair penalty per
floor crossed. Routing is Dijkstra with a deterministic tie-break: among
equal-cost routes the lexicographically smallest node-id sequence wins.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .errors import DocumentError, DomainError, GraphError, UnknownNodeError, UnreachableError
from .geo import GeoPoint, haversine_distance

GRAPH_VERSION = 1

#: Extra cost, in meters, per floor crossed by an edge; models vertical effort.
DEFAULT_STAIR_PENALTY_M = 5.0

NODE_KINDS = ("room", "corridor", "stair", "entrance")


@dataclass(frozen=True)
class NavNode:
    id: str
    point: GeoPoint
    kind: str = "room"

    def __post_init__(self) -> None:
        if self.kind not in NODE_KINDS:
            raise DomainError(f"node {self.id!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class NavEdge:
    """An undirected link; weight is derived from geocodes when omitted."""

    a: str
    b: str
    weight_m: float | None = None


@dataclass(frozen=True)
class NavGraph:
    nodes: Mapping[str, NavNode]
    edges: tuple[tuple[str, str, float], ...]  # canonical: a < b, sorted
    adjacency: Mapping[str, tuple[tuple[str, float], ...]]

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Route:
    nodes: tuple[str, ...]
    total_m: float


def build_graph(
    nodes: Iterable[NavNode],
    edges: Iterable[NavEdge],
    stair_penalty_m: float = DEFAULT_STAIR_PENALTY_M,
) -> NavGraph:
    """Validate nodes and edges and resolve edge weights.

    Raises:
        GraphError: listing every duplicate id, dangling endpoint, duplicate
            undirected edge, self-loop, non-positive explicit weight, or
            zero-distance edge between distinct co-located nodes.
    """
    node_map: dict[str, NavNode] = {}
    problems: list[str] = []
    for node in nodes:
        if node.id in node_map:
            problems.append(f"duplicate node id {node.id!r}")
        node_map[node.id] = node

    resolved: list[tuple[str, str, float]] = []
    seen_pairs: set[tuple[str, str]] = set()
    for edge in edges:
        if edge.a == edge.b:
            problems.append(f"self-loop edge {edge.a!r}")
            continue
        missing = [e for e in (edge.a, edge.b) if e not in node_map]
        if missing:
            problems.extend(f"edge {edge.a!r}-{edge.b!r}: unknown node {m!r}" for m in missing)
            continue
        pair = (min(edge.a, edge.b), max(edge.a, edge.b))
        if pair in seen_pairs:
            problems.append(f"duplicate edge {pair[0]!r}-{pair[1]!r}")
            continue
        seen_pairs.add(pair)
        if edge.weight_m is not None:
            if edge.weight_m <= 0:
                problems.append(f"edge {edge.a!r}-{edge.b!r}: non-positive weight {edge.weight_m}")
                continue
            weight = float(edge.weight_m)
        else:
            na, nb = node_map[edge.a], node_map[edge.b]
            weight = haversine_distance(na.point, nb.point)
            floors_crossed = abs(na.point.floor - nb.point.floor)
            if floors_crossed:
                weight += stair_penalty_m * floors_crossed
            if weight == 0.0:
                problems.append(
                    f"edge {edge.a!r}-{edge.b!r}: zero distance between distinct co-located nodes"
                )
                continue
        resolved.append((pair[0], pair[1], weight))

    if problems:
        raise GraphError("invalid graph: " + "; ".join(problems))

    resolved.sort()
    adjacency: dict[str, list[tuple[str, float]]] = {node_id: [] for node_id in node_map}
    for a, b, w in resolved:
        adjacency[a].append((b, w))
        adjacency[b].append((a, w))
    return NavGraph(
        nodes=node_map,
        edges=tuple(resolved),
        adjacency={node_id: tuple(sorted(nbrs)) for node_id, nbrs in adjacency.items()},
    )


def shortest_path(graph: NavGraph, src: str, dst: str) -> Route:
    """Dijkstra shortest path between two nodes.

    Among equal-cost routes the lexicographically smallest node-id sequence
    is returned, so results are reproducible. ``src == dst`` yields the
    single-node route with total 0.

    Raises:
        UnknownNodeError: either endpoint is missing from the graph.
        UnreachableError: no path exists, naming both endpoints.
    """
    for node_id in (src, dst):
        if node_id not in graph.nodes:
            raise UnknownNodeError(f"unknown node {node_id!r}")
    # The heap orders candidates by (cost, node-id sequence); popping is
    # therefore Dijkstra with the lexicographic tie-break built in.
    frontier: list[tuple[float, tuple[str, ...]]] = [(0.0, (src,))]
    settled: set[str] = set()
    while frontier:
        cost, path = heapq.heappop(frontier)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == dst:
            return Route(nodes=path, total_m=cost)
        for nbr, weight in graph.adjacency[node]:
            if nbr not in settled:
                heapq.heappush(frontier, (cost + weight, path + (nbr,)))
    raise UnreachableError(f"no path from {src!r} to {dst!r}")


def route_length(graph: NavGraph, node_ids: Sequence[str]) -> float:
    """Sum of edge weights along a node sequence; raises if not adjacent."""
    total = 0.0
    for a, b in zip(node_ids, node_ids[1:]):
        for nbr, weight in graph.adjacency[a]:
            if nbr == b:
                total += weight
                break
        else:
            raise DomainError(f"nodes {a!r} and {b!r} are not adjacent")
    return total


# ---------------------------------------------------------------------------
# Persistence.

def graph_document(graph: NavGraph) -> dict:
    return {
        "version": GRAPH_VERSION,
        "nodes": [
            {
                "id": node.id,
                "lat": node.point.lat,
                "lon": node.point.lon,
                "floor": node.point.floor,
                "kind": node.kind,
            }
            for node in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            {"a": a, "b": b, "weight_m": w}
            for a, b, w in sorted(graph.edges)
        ],
    }


def save_graph(graph: NavGraph, sink: IO[str]) -> None:
    json.dump(graph_document(graph), sink, indent=2, sort_keys=True)
    sink.write("\n")


def load_graph(source: IO[str], stair_penalty_m: float = DEFAULT_STAIR_PENALTY_M) -> NavGraph:
    """Load and validate a graph document.

    Raises:
        DocumentError: malformed JSON, unsupported version, bad fields.
        GraphError: structurally invalid graph.
    """
    try:
        doc = json.load(source)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"invalid graph document at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise DocumentError("graph document: missing field 'version'")
    if doc["version"] != GRAPH_VERSION:
        raise DocumentError(
            f"unsupported graph version {doc['version']!r} (supported: {GRAPH_VERSION})"
        )
    nodes: list[NavNode] = []
    for i, entry in enumerate(doc.get("nodes", [])):
        path = f"nodes[{i}]"
        try:
            nodes.append(
                NavNode(
                    id=str(entry["id"]),
                    point=GeoPoint(
                        lat=float(entry["lat"]),
                        lon=float(entry["lon"]),
                        floor=int(entry["floor"]),
                    ),
                    kind=str(entry.get("kind", "room")),
                )
            )
        except KeyError as exc:
            raise DocumentError(f"{path}: missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError, DomainError) as exc:
            raise DocumentError(f"{path}: {exc}") from exc
    edges: list[NavEdge] = []
    for i, entry in enumerate(doc.get("edges", [])):
        path = f"edges[{i}]"
        try:
            weight = entry.get("weight_m")
            edges.append(
                NavEdge(
                    a=str(entry["a"]),
                    b=str(entry["b"]),
                    weight_m=None if weight is None else float(weight),
                )
            )
        except KeyError as exc:
            raise DocumentError(f"{path}: missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"{path}: {exc}") from exc
    return build_graph(nodes, edges, stair_penalty_m=stair_penalty_m)
