"""Charger-network robustness: centrality metrics and percolation curves.

Stations form an undirected graph with an edge wherever two sites sit
within λ_max miles of each other (a CC-range hop). Centralities say which
stations the network leans on; percolation says how the connected mass
decays as stations fail randomly or are removed by importance.
"""

from __future__ import annotations

import math
import random
import statistics
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import _shortest
from .geo import GeoPoint, haversine_miles
from .ingest import ChargerStation, RoadNetwork


@dataclass
class ChargerGraph:
    """Undirected station graph; edge weight is the connecting distance."""

    nodes: tuple[str, ...]
    adj: dict[str, dict[str, float]]
    lambda_max_mi: float

    def __post_init__(self) -> None:
        for u, neighbors in self.adj.items():
            for v, weight in neighbors.items():
                if u == v:
                    raise ValueError(f"self-loop at {u!r}")
                if not 0.0 < weight <= self.lambda_max_mi:
                    raise ValueError(
                        f"edge {u!r}-{v!r} weight {weight} outside (0, {self.lambda_max_mi}]"
                    )
                if self.adj.get(v, {}).get(u) != weight:
                    raise ValueError(f"edge {u!r}-{v!r} is not symmetric")

    def edge_count(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2


def _road_station_distances(
    stations: Sequence[ChargerStation], road_net: RoadNetwork
) -> dict[tuple[str, str], float]:
    """Pairwise station distances along the road network.

    Stations snap to their nearest road node by great-circle distance
    (ties to the smaller node id); distances are shortest-path lengths
    between snapped nodes.
    """
    adj: dict[str, list[tuple[str, float]]] = {n: [] for n in road_net.nodes}
    for arc in road_net.arcs:
        adj[arc.from_id].append((arc.to_id, arc.length_mi))

    snapped = {s.id: snap_to_road(s.location, road_net) for s in stations}
    out: dict[tuple[str, str], float] = {}
    for station in stations:
        dist, _pred = _shortest.single_source(adj, snapped[station.id])
        for other in stations:
            if other.id == station.id:
                continue
            d = dist.get(snapped[other.id])
            if d is not None:
                out[(station.id, other.id)] = d
    return out


def snap_to_road(point: GeoPoint, road_net: RoadNetwork) -> str:
    """Nearest road node by great-circle distance, ties to the smaller id."""
    if not road_net.nodes:
        raise ValueError("road network has no nodes")
    return min(
        road_net.nodes,
        key=lambda node_id: (haversine_miles(point, road_net.nodes[node_id]), node_id),
    )


def build_charger_graph(
    stations: Iterable[ChargerStation],
    lambda_max_mi: float,
    road_net: RoadNetwork | None = None,
) -> ChargerGraph:
    """Connect every station pair within lambda_max_mi.

    Geodesic distances by default; with a road network, shortest-path road
    distances between snapped nodes. Coincident stations (distance 0) get
    no edge; edge weights are strictly positive.
    """
    if not lambda_max_mi > 0:
        raise ValueError(f"lambda_max_mi must be positive, got {lambda_max_mi!r}")
    stations = list(stations)
    adj: dict[str, dict[str, float]] = {s.id: {} for s in stations}
    if road_net is not None:
        road_dist = _road_station_distances(stations, road_net)
    for i, a in enumerate(stations):
        for b in stations[i + 1 :]:
            if road_net is None:
                d = haversine_miles(a.location, b.location)
            else:
                # Directed detours can differ; connect on the better direction.
                candidates = [
                    road_dist[key]
                    for key in ((a.id, b.id), (b.id, a.id))
                    if key in road_dist
                ]
                if not candidates:
                    continue
                d = min(candidates)
            if 0.0 < d <= lambda_max_mi:
                adj[a.id][b.id] = d
                adj[b.id][a.id] = d
    return ChargerGraph(nodes=tuple(s.id for s in stations), adj=adj, lambda_max_mi=lambda_max_mi)


def degree_centrality(g: ChargerGraph) -> dict[str, float]:
    """deg(v) / (n - 1); zero for a single-node graph."""
    n = len(g.nodes)
    if n <= 1:
        return {v: 0.0 for v in g.nodes}
    return {v: len(g.adj[v]) / (n - 1) for v in g.nodes}


def _brandes_source_pass(
    g: ChargerGraph, source: str, weighted: bool
) -> tuple[list[str], dict[str, list[str]], dict[str, int]]:
    """Shortest-path DAG from one source: finish order, predecessors, path counts."""
    preds: dict[str, list[str]] = {v: [] for v in g.nodes}
    sigma: dict[str, int] = {v: 0 for v in g.nodes}
    sigma[source] = 1
    order: list[str] = []

    if not weighted:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(g.adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        return order, preds, sigma

    import heapq

    final: dict[str, float] = {}
    seen: dict[str, float] = {source: 0.0}
    heap: list[tuple[float, str]] = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in final:
            continue
        final[v] = d
        order.append(v)
        for w, weight in g.adj[v].items():
            if w in final:
                continue
            nd = d + weight
            if w not in seen or nd < seen[w]:
                seen[w] = nd
                heapq.heappush(heap, (nd, w))
                sigma[w] = sigma[v]
                preds[w] = [v]
            elif nd == seen[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def betweenness_centrality(g: ChargerGraph, weighted: bool = True) -> dict[str, float]:
    """Brandes' betweenness over shortest paths, normalized to [0, 1].

    Weighted by edge distance by default; ``weighted=False`` counts hops.
    Path multiplicities are exact (sigma counts), no sampling.
    """
    bc = {v: 0.0 for v in g.nodes}
    n = len(g.nodes)
    if n < 3:
        return bc
    for source in g.nodes:
        order, preds, sigma = _brandes_source_pass(g, source, weighted)
        delta = {v: 0.0 for v in g.nodes}
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != source:
                bc[w] += delta[w]
    # Each unordered pair was counted from both endpoints; fold that factor
    # into the (n-1)(n-2)/2 normalization.
    scale = 1.0 / ((n - 1) * (n - 2))
    return {v: bc[v] * scale for v in g.nodes}


def _gcc_fraction(g: ChargerGraph, removed: set[str]) -> float:
    """Largest connected component size over the original node count."""
    n = len(g.nodes)
    if n == 0:
        return 0.0
    kept = [v for v in g.nodes if v not in removed]
    unvisited = set(kept)
    largest = 0
    while unvisited:
        root = unvisited.pop()
        size = 1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.adj[v]:
                if w in unvisited:
                    unvisited.remove(w)
                    size += 1
                    queue.append(w)
        largest = max(largest, size)
    return largest / n


def percolate(
    g: ChargerGraph,
    fractions: Sequence[float],
    mode: str = "random",
    trials: int = 30,
    seed: int = 0,
    ranking: Mapping[str, float] | None = None,
) -> list[tuple[float, ...]]:
    """Largest-component decay as ⌊f·n⌋ nodes are removed per fraction f.

    mode="random": remove uniformly at random, ``trials`` repetitions per
    fraction with a seeded generator; rows are (f, mean GCC, std).
    mode="targeted": remove by descending ranking value (ties broken by
    node id); rows are (f, GCC).
    """
    fracs = list(fractions)
    if any(not 0.0 <= f <= 1.0 for f in fracs):
        raise ValueError("fractions must lie in [0, 1]")
    if fracs != sorted(fracs):
        raise ValueError("fractions must be sorted ascending")
    n = len(g.nodes)
    base_order = sorted(g.nodes)

    if mode == "random":
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials!r}")
        rng = random.Random(seed)
        curve: list[tuple[float, ...]] = []
        for f in fracs:
            k = math.floor(f * n)
            samples = [
                _gcc_fraction(g, set(rng.sample(base_order, k))) for _ in range(trials)
            ]
            mean = statistics.fmean(samples)
            std = statistics.pstdev(samples) if len(samples) > 1 else 0.0
            curve.append((f, mean, std))
        return curve

    if mode == "targeted":
        if ranking is None:
            raise ValueError("targeted mode needs a ranking")
        by_importance = sorted(base_order, key=lambda v: (-ranking.get(v, 0.0), v))
        return [
            (f, _gcc_fraction(g, set(by_importance[: math.floor(f * n)]))) for f in fracs
        ]

    raise ValueError(f"mode must be 'random' or 'targeted', got {mode!r}")


@dataclass
class RobustnessReport:
    """Everything the CLI/service emit for the robustness view."""

    lambda_max_mi: float
    degree: dict[str, float]
    betweenness: dict[str, float]
    percolation_random: list[tuple[float, float, float]]
    percolation_targeted: list[tuple[float, float]]
    node_count: int = 0
    edge_count: int = 0
    fractions: list[float] = field(default_factory=list)
    trials: int = 0
    seed: int = 0


DEFAULT_FRACTIONS = tuple(round(0.1 * i, 1) for i in range(11))


def compute_robustness(
    stations: Iterable[ChargerStation],
    lambda_max_mi: float,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    trials: int = 30,
    seed: int = 0,
    road_net: RoadNetwork | None = None,
    weighted: bool = True,
    targeted_by: str = "betweenness",
) -> RobustnessReport:
    """Build the charger graph and run the full robustness suite."""
    g = build_charger_graph(stations, lambda_max_mi, road_net=road_net)
    degree = degree_centrality(g)
    betweenness = betweenness_centrality(g, weighted=weighted)
    if targeted_by == "degree":
        ranking: Mapping[str, float] = degree
    elif targeted_by == "betweenness":
        ranking = betweenness
    else:
        raise ValueError(f"targeted_by must be 'degree' or 'betweenness', got {targeted_by!r}")
    return RobustnessReport(
        lambda_max_mi=lambda_max_mi,
        degree=degree,
        betweenness=betweenness,
        percolation_random=[
            (f, m, s) for f, m, s in percolate(g, list(fractions), "random", trials=trials, seed=seed)
        ],
        percolation_targeted=[
            (f, v) for f, v in percolate(g, list(fractions), "targeted", ranking=ranking)
        ],
        node_count=len(g.nodes),
        edge_count=g.edge_count(),
        fractions=list(fractions),
        trials=trials,
        seed=seed,
    )
