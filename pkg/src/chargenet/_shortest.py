"""Single-source shortest paths over small adjacency maps.

Shared plumbing for road-network snapping and charger-graph distances.
Deterministic: equal-cost frontier entries pop in node-id order, and a
predecessor is only replaced on strict improvement.
"""

from __future__ import annotations

import heapq
from typing import Hashable, Mapping, Sequence, TypeVar

Node = TypeVar("Node", bound=Hashable)


def single_source(
    adj: Mapping[Node, Sequence[tuple[Node, float]]], source: Node
) -> tuple[dict[Node, float], dict[Node, Node]]:
    """Dijkstra from ``source``. Returns (distance, predecessor) maps.

    Weights must be nonnegative. Nodes must be mutually comparable (ids are
    strings everywhere in this package) so ties pop deterministically.
    """
    dist: dict[Node, float] = {}
    pred: dict[Node, Node] = {}
    best: dict[Node, float] = {source: 0.0}
    heap: list[tuple[float, Node]] = [(0.0, source)]
    while heap:
        d, node = heapq.heappop(heap)
        if node in dist:
            continue
        dist[node] = d
        for neighbor, weight in adj.get(node, ()):
            nd = d + weight
            if neighbor not in dist and (neighbor not in best or nd < best[neighbor]):
                best[neighbor] = nd
                pred[neighbor] = node
                heapq.heappush(heap, (nd, neighbor))
    return dist, pred


def path_to(pred: Mapping[Node, Node], source: Node, target: Node) -> list[Node]:
    """Reconstruct the node sequence source..target from predecessors."""
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    path.reverse()
    return path
