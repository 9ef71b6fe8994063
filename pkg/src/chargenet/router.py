"""Charge-aware route optimization over a charger overlay graph.

The overlay has one node per charging station plus the origin and
destination; an arc exists only where the battery can actually make the
hop (range feasibility is enforced at build time, so the solver never has
to reason about SOC). The solved objective is

    sum(arc cost) + alpha * sum(wait at visited stations)

with arc cost in minutes by default (``objective="distance"`` switches to
miles, putting alpha in miles per minute). Station waits enter through a
node-splitting transformation: charger i becomes i_in -> i_out with an
internal arc costing alpha * W_i, which prices the wait exactly on visited
stations and keeps the search an ordinary nonnegative shortest path, so a
label-setting pass is exact. Ties break toward the lexicographically
smaller node-id sequence.
"""

from __future__ import annotations

import dataclasses
import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .charging import EVModel, cc_range_miles, charge_time_minutes
from .congestion import DemandConfig, build_wait_profiles
from .geo import GeoPoint, haversine_miles
from .ingest import ChargerStation, RoadNetwork, TrafficPoint
from . import _shortest
from .robustness import snap_to_road

ORIGIN_ID = "__origin__"
DESTINATION_ID = "__destination__"

DEFAULT_AVG_SPEED_MPH = 60.0

# Exhaustive path enumeration stays tractable only on small overlays.
ORACLE_MAX_NODES = 14

_OBJECTIVES = ("time", "distance")


class Infeasible(Exception):
    """No route satisfies the per-leg range limits."""


class InvalidQuery(ValueError):
    """Query parameters violate their invariants (SOC window, alpha sign)."""


class TooLarge(ValueError):
    """Overlay exceeds the brute-force enumeration bound."""


class OverlayArc(NamedTuple):
    from_id: str
    to_id: str
    dist_mi: float
    time_min: float


class RouteLeg(NamedTuple):
    from_id: str
    to_id: str
    dist_mi: float
    time_min: float


@dataclass
class StopPlan:
    """One charging stop: queueing wait plus time on the plug."""

    station_id: str
    wait_min: float
    charge_min: float
    arrive_soc: float | None = None
    depart_soc: float | None = None


@dataclass
class OverlayGraph:
    """Range-feasible charger hop graph between an origin and destination."""

    charger_ids: tuple[str, ...]
    arcs: list[OverlayArc]
    wait_min: dict[str, float]
    start_range_mi: float
    leg_range_mi: float
    origin_id: str = ORIGIN_ID
    destination_id: str = DESTINATION_ID
    points: dict[str, GeoPoint] | None = None
    road_paths: dict[tuple[str, str], list[str]] | None = None

    def __post_init__(self) -> None:
        endpoints = {self.origin_id, self.destination_id}
        ids = set(self.charger_ids) | endpoints
        if len(ids) != len(self.charger_ids) + len(endpoints):
            raise ValueError("charger ids must be distinct from each other and the endpoints")
        for node_id, wait in self.wait_min.items():
            if wait < 0:
                raise ValueError(f"wait_min[{node_id!r}] must be >= 0, got {wait}")
        for arc in self.arcs:
            if arc.from_id not in ids or arc.to_id not in ids:
                raise ValueError(f"arc {arc.from_id}->{arc.to_id} references an unknown node")
            if arc.dist_mi < 0 or arc.time_min < 0:
                raise ValueError(f"arc {arc.from_id}->{arc.to_id} has negative metrics")
            limit = self.start_range_mi if arc.from_id == self.origin_id else self.leg_range_mi
            if arc.dist_mi > limit:
                raise ValueError(
                    f"arc {arc.from_id}->{arc.to_id} length {arc.dist_mi} exceeds its "
                    f"range limit {limit}"
                )

    def node_count(self) -> int:
        return len(self.charger_ids) + (1 if self.origin_id == self.destination_id else 2)

    def wait_at(self, node_id: str) -> float:
        return self.wait_min.get(node_id, 0.0)

    def out_arcs(self) -> dict[str, list[OverlayArc]]:
        adj: dict[str, list[OverlayArc]] = {}
        for arc in self.arcs:
            adj.setdefault(arc.from_id, []).append(arc)
        return adj


@dataclass(frozen=True)
class RouteQuery:
    """One routing request. wait_profiles maps station id to minutes."""

    origin: GeoPoint
    destination: GeoPoint
    ev: EVModel
    soc_start: float
    alpha: float = 1.0
    wait_profiles: Mapping[str, float] | None = None
    objective: str = "time"
    cv_overshoot: bool = False

    def __post_init__(self) -> None:
        if not self.ev.soc_min <= self.soc_start <= 1.0:
            raise InvalidQuery(
                f"soc_start must be in [{self.ev.soc_min}, 1], got {self.soc_start!r}"
            )
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise InvalidQuery(f"alpha must be >= 0, got {self.alpha!r}")
        if self.objective not in _OBJECTIVES:
            raise InvalidQuery(f"objective must be one of {_OBJECTIVES}, got {self.objective!r}")
        if self.wait_profiles is not None:
            for station_id, wait in self.wait_profiles.items():
                if wait < 0:
                    raise InvalidQuery(f"wait for {station_id!r} must be >= 0, got {wait!r}")


@dataclass
class RoutePlan:
    """A solved route: ordered stops, legs, and the time budget."""

    stops: list[StopPlan]
    legs: list[RouteLeg]
    travel_min: float
    wait_min: float
    charge_min: float
    total_min: float
    objective_value: float
    alpha: float
    objective: str = "time"
    leg_points: list[list[GeoPoint]] | None = None

    def node_sequence(self) -> list[str]:
        if not self.legs:
            return []
        return [self.legs[0].from_id] + [leg.to_id for leg in self.legs]


def _empty_plan(alpha: float, objective: str) -> RoutePlan:
    return RoutePlan(
        stops=[],
        legs=[],
        travel_min=0.0,
        wait_min=0.0,
        charge_min=0.0,
        total_min=0.0,
        objective_value=0.0,
        alpha=alpha,
        objective=objective,
    )


def _pair_metrics(
    points: dict[str, GeoPoint],
    road_net: RoadNetwork | None,
    avg_speed_mph: float,
) -> dict[tuple[str, str], tuple[float, float, list[str] | None]]:
    """dist/time (and road path) for every ordered pair of named points.

    Geodesic mode: great-circle distance at a flat average speed. Road mode:
    snap each point to its nearest node, take shortest-path length, and sum
    the travel times along that same path. Pairs a road network cannot
    connect are absent from the result.
    """
    names = list(points)
    out: dict[tuple[str, str], tuple[float, float, list[str] | None]] = {}
    if road_net is None:
        for a in names:
            for b in names:
                if a == b:
                    continue
                dist = haversine_miles(points[a], points[b])
                out[(a, b)] = (dist, dist / avg_speed_mph * 60.0, None)
        return out

    adj: dict[str, list[tuple[str, float]]] = {n: [] for n in road_net.nodes}
    arc_time: dict[tuple[str, str], float] = {}
    for arc in road_net.arcs:
        adj[arc.from_id].append((arc.to_id, arc.length_mi))
        key = (arc.from_id, arc.to_id)
        # Parallel arcs: keep the faster one at equal length.
        if key not in arc_time or arc.time_min < arc_time[key]:
            arc_time[key] = arc.time_min

    snapped = {name: snap_to_road(points[name], road_net) for name in names}
    for a in names:
        dist, pred = _shortest.single_source(adj, snapped[a])
        for b in names:
            if a == b:
                continue
            target = snapped[b]
            if target not in dist:
                continue
            path = _shortest.path_to(pred, snapped[a], target)
            time_min = sum(arc_time[(u, v)] for u, v in zip(path, path[1:]))
            out[(a, b)] = (dist[target], time_min, path)
    return out


def build_overlay(
    query: RouteQuery,
    stations: Iterable[ChargerStation],
    road_net: RoadNetwork | None = None,
    avg_speed_mph: float = DEFAULT_AVG_SPEED_MPH,
) -> OverlayGraph:
    """Assemble the range-feasible hop graph for one query.

    Arc rules: origin->x needs dist <= (soc_start - soc_min) * rated range
    (what the pack holds at departure); charger->charger and
    charger->destination need dist <= the CC-phase range (depart at soc_cv,
    arrive at soc_min). The CV-overshoot mode stretches the latter to a
    full pack, (1 - soc_min) * rated range.
    """
    stations = list(stations)
    ev = query.ev
    start_range = (query.soc_start - ev.soc_min) * ev.rated_range_mi
    if query.cv_overshoot:
        leg_range = (1.0 - ev.soc_min) * ev.rated_range_mi
    else:
        leg_range = cc_range_miles(ev)

    points: dict[str, GeoPoint] = {ORIGIN_ID: query.origin, DESTINATION_ID: query.destination}
    for s in stations:
        if s.id in points:
            raise ValueError(f"station id {s.id!r} collides with a reserved overlay name")
        points[s.id] = s.location

    waits = dict(query.wait_profiles or {})
    wait_min = {s.id: float(waits.get(s.id, 0.0)) for s in stations}
    wait_min[ORIGIN_ID] = 0.0
    wait_min[DESTINATION_ID] = 0.0

    if haversine_miles(query.origin, query.destination) == 0.0:
        return OverlayGraph(
            charger_ids=tuple(s.id for s in stations),
            arcs=[],
            wait_min=wait_min,
            start_range_mi=start_range,
            leg_range_mi=leg_range,
            origin_id=ORIGIN_ID,
            destination_id=ORIGIN_ID,
            points=points,
        )

    metrics = _pair_metrics(points, road_net, avg_speed_mph)
    arcs: list[OverlayArc] = []
    road_paths: dict[tuple[str, str], list[str]] = {}

    def add(a: str, b: str, limit: float) -> None:
        got = metrics.get((a, b))
        if got is None:
            return
        dist, time_min, path = got
        if dist <= limit:
            arcs.append(OverlayArc(a, b, dist, time_min))
            if path is not None:
                road_paths[(a, b)] = path

    charger_ids = [s.id for s in stations]
    for j in charger_ids:
        add(ORIGIN_ID, j, start_range)
    for i in charger_ids:
        for j in charger_ids:
            if i != j:
                add(i, j, leg_range)
    for i in charger_ids:
        add(i, DESTINATION_ID, leg_range)
    add(ORIGIN_ID, DESTINATION_ID, start_range)

    return OverlayGraph(
        charger_ids=tuple(charger_ids),
        arcs=arcs,
        wait_min=wait_min,
        start_range_mi=start_range,
        leg_range_mi=leg_range,
        points=points,
        road_paths=road_paths if road_net is not None else None,
    )


def _arc_cost(arc: OverlayArc, objective: str) -> float:
    return arc.time_min if objective == "time" else arc.dist_mi


def _plan_from_path(
    overlay: OverlayGraph, node_path: Sequence[str], objective_value: float,
    alpha: float, objective: str
) -> RoutePlan:
    by_pair: dict[tuple[str, str], OverlayArc] = {}
    for arc in overlay.arcs:
        key = (arc.from_id, arc.to_id)
        if key not in by_pair or _arc_cost(arc, objective) < _arc_cost(by_pair[key], objective):
            by_pair[key] = arc
    legs = [
        RouteLeg(*by_pair[(u, v)]) for u, v in zip(node_path, node_path[1:])
    ]
    stops = [
        StopPlan(station_id=v, wait_min=overlay.wait_at(v), charge_min=0.0)
        for v in node_path[1:-1]
    ]
    travel = sum(leg.time_min for leg in legs)
    wait = sum(stop.wait_min for stop in stops)
    return RoutePlan(
        stops=stops,
        legs=legs,
        travel_min=travel,
        wait_min=wait,
        charge_min=0.0,
        total_min=travel + wait,
        objective_value=objective_value,
        alpha=alpha,
        objective=objective,
    )


def solve(overlay: OverlayGraph, alpha: float, objective: str = "time") -> RoutePlan:
    """Exact minimum of arc cost plus alpha-weighted waits at visited stops.

    Node-splitting plus label-setting search: charger i becomes
    i_in -> i_out with internal cost alpha * W_i, so the wait is paid
    exactly when the station is on the path. Deterministic: equal-cost
    candidates resolve toward the smaller node-id sequence.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    if objective not in _OBJECTIVES:
        raise ValueError(f"objective must be one of {_OBJECTIVES}, got {objective!r}")
    if overlay.origin_id == overlay.destination_id:
        return _empty_plan(alpha, objective)

    # Split-node states: (id, "a") is the entry half, (id, "b") the exit
    # half; the internal a->b hop carries the priced wait.
    internal = {
        node_id: alpha * overlay.wait_at(node_id) for node_id in overlay.charger_ids
    }
    internal[overlay.origin_id] = 0.0
    internal[overlay.destination_id] = 0.0
    adj = overlay.out_arcs()

    start = (overlay.origin_id, "a")
    goal = (overlay.destination_id, "b")
    # Heap entries carry the visible node sequence so that cost ties pop in
    # lexicographic path order.
    heap: list[tuple[float, tuple[str, ...], tuple[str, str]]] = [
        (0.0, (overlay.origin_id,), start)
    ]
    done: set[tuple[str, str]] = set()
    while heap:
        cost, seq, state = heapq.heappop(heap)
        if state in done:
            continue
        done.add(state)
        node_id, half = state
        if state == goal:
            return _plan_from_path(overlay, list(seq), cost, alpha, objective)
        if half == "a":
            nxt = (node_id, "b")
            if nxt not in done:
                heapq.heappush(heap, (cost + internal[node_id], seq, nxt))
        else:
            for arc in adj.get(node_id, ()):
                nxt = (arc.to_id, "a")
                if nxt not in done:
                    heapq.heappush(
                        heap, (cost + _arc_cost(arc, objective), seq + (arc.to_id,), nxt)
                    )
    raise Infeasible("destination unreachable: no range-feasible charger sequence")


def brute_force_oracle(
    overlay: OverlayGraph, alpha: float, objective: str = "time"
) -> tuple[float, tuple[str, ...]]:
    """Exhaustive minimum over all simple origin->destination paths.

    Independent check for the solver: enumerates every simple path and
    folds costs in the same order the search does (leg, then wait), so
    agreement is exact, not approximate. Bounded to small overlays.
    """
    if overlay.node_count() > ORACLE_MAX_NODES:
        raise TooLarge(f"oracle is limited to {ORACLE_MAX_NODES} nodes")
    if overlay.origin_id == overlay.destination_id:
        return 0.0, (overlay.origin_id,)

    adj = overlay.out_arcs()
    for arcs in adj.values():
        arcs.sort(key=lambda a: (a.to_id, _arc_cost(a, objective)))

    best: tuple[float, tuple[str, ...]] | None = None

    def visit(node: str, cost: float, path: tuple[str, ...], seen: set[str]) -> None:
        nonlocal best
        if node == overlay.destination_id:
            candidate = (cost, path)
            if best is None or candidate < best:
                best = candidate
            return
        for arc in adj.get(node, ()):
            if arc.to_id in seen:
                continue
            nxt_cost = cost + _arc_cost(arc, objective)
            if arc.to_id != overlay.destination_id:
                nxt_cost = nxt_cost + alpha * overlay.wait_at(arc.to_id)
            seen.add(arc.to_id)
            visit(arc.to_id, nxt_cost, path + (arc.to_id,), seen)
            seen.remove(arc.to_id)

    visit(overlay.origin_id, 0.0, (overlay.origin_id,), {overlay.origin_id})
    if best is None:
        raise Infeasible("destination unreachable: no range-feasible charger sequence")
    return best


def _diagnose_infeasible(
    query: RouteQuery,
    stations: Sequence[ChargerStation],
    road_net: RoadNetwork | None,
    avg_speed_mph: float,
    start_range: float,
    leg_range: float,
) -> str:
    """Explain why no route exists: disconnection, or the tightest gap.

    Runs a minimax search over the unfiltered overlay, scoring each arc by
    dist / its range limit, and reports the bottleneck leg of the best
    possible route.
    """
    points: dict[str, GeoPoint] = {ORIGIN_ID: query.origin, DESTINATION_ID: query.destination}
    for s in stations:
        points[s.id] = s.location
    metrics = _pair_metrics(points, road_net, avg_speed_mph)

    def limit_for(a: str) -> float:
        return start_range if a == ORIGIN_ID else leg_range

    names = list(points)
    # Minimax on the leg-to-limit ratio: best[(node)] = smallest achievable
    # worst ratio from the origin.
    best: dict[str, tuple[float, float, str, str]] = {}
    heap: list[tuple[float, str, tuple[float, str, str]]] = [
        (0.0, ORIGIN_ID, (0.0, ORIGIN_ID, ORIGIN_ID))
    ]
    seen: set[str] = set()
    worst_arc: dict[str, tuple[float, str, str]] = {ORIGIN_ID: (0.0, ORIGIN_ID, ORIGIN_ID)}
    ratio_at: dict[str, float] = {}
    while heap:
        ratio, node, arc_info = heapq.heappop(heap)
        if node in seen:
            continue
        seen.add(node)
        ratio_at[node] = ratio
        worst_arc[node] = arc_info
        if node == DESTINATION_ID:
            break
        for other in names:
            if other in seen or other == ORIGIN_ID or other == node:
                continue
            got = metrics.get((node, other))
            if got is None:
                continue
            limit = limit_for(node)
            if limit <= 0:
                continue
            leg_ratio = got[0] / limit
            new_ratio = max(ratio, leg_ratio)
            current = arc_info if leg_ratio <= ratio else (got[0], node, other)
            heapq.heappush(heap, (new_ratio, other, current))

    if DESTINATION_ID not in ratio_at:
        if start_range <= 0:
            return (
                "no feasible route: starting charge equals the reserve floor, "
                "so the vehicle cannot leave the origin"
            )
        return (
            "no feasible route: origin and destination are not connected "
            "through the road network or charger set"
        )
    dist, u, v = worst_arc[DESTINATION_ID]
    limit = start_range if u == ORIGIN_ID else leg_range
    return (
        f"no feasible route: the best charger sequence still needs a "
        f"{dist:.1f} mi leg ({u} to {v}) but the range limit for that hop is "
        f"{limit:.1f} mi; charger spacing is too sparse for this vehicle"
    )


def plan_route(
    query: RouteQuery,
    stations: Iterable[ChargerStation],
    road_net: RoadNetwork | None = None,
    traffic: Sequence[TrafficPoint] | None = None,
    demand_cfg: DemandConfig | None = None,
    avg_speed_mph: float = DEFAULT_AVG_SPEED_MPH,
) -> RoutePlan:
    """Full pipeline: waits, overlay, exact solve, then charge times.

    Wait profiles come from the query when supplied, otherwise from the
    congestion model over ``traffic`` (zero waits when neither is given).
    Charging at each stop targets the CV transition SOC; the opt-in
    CV-overshoot mode raises the target just enough for the next leg.
    """
    stations = list(stations)
    ev = query.ev

    if query.wait_profiles is not None:
        waits = {k: float(v) for k, v in query.wait_profiles.items()}
    elif traffic is not None:
        profiles = build_wait_profiles(stations, traffic, demand_cfg or DemandConfig())
        waits = {station_id: p.wait_min for station_id, p in profiles.items()}
    else:
        waits = {}
    effective = dataclasses.replace(query, wait_profiles=waits)

    overlay = build_overlay(effective, stations, road_net, avg_speed_mph)
    try:
        plan = solve(overlay, query.alpha, query.objective)
    except Infeasible:
        raise Infeasible(
            _diagnose_infeasible(
                effective, stations, road_net, avg_speed_mph,
                overlay.start_range_mi, overlay.leg_range_mi,
            )
        ) from None

    power_by_id = {s.id: s.power_kw for s in stations}
    soc = query.soc_start
    charge_total = 0.0
    for idx, leg in enumerate(plan.legs):
        soc = soc - leg.dist_mi / ev.rated_range_mi
        if idx < len(plan.legs) - 1:
            stop = plan.stops[idx]
            target = ev.soc_cv
            if query.cv_overshoot:
                needed = ev.soc_min + plan.legs[idx + 1].dist_mi / ev.rated_range_mi
                target = max(target, needed)
            stop.arrive_soc = soc
            if soc >= target:
                stop.charge_min = 0.0
            else:
                stop.charge_min = charge_time_minutes(
                    ev, power_by_id[stop.station_id], soc, target
                )
            soc = max(soc, target)
            stop.depart_soc = soc
            charge_total += stop.charge_min

    plan.charge_min = charge_total
    plan.total_min = plan.travel_min + plan.wait_min + plan.charge_min
    if overlay.points is not None and plan.legs:
        plan.leg_points = []
        for leg in plan.legs:
            road_path = (overlay.road_paths or {}).get((leg.from_id, leg.to_id))
            if road_path is not None and road_net is not None:
                plan.leg_points.append([road_net.nodes[n] for n in road_path])
            else:
                plan.leg_points.append(
                    [overlay.points[leg.from_id], overlay.points[leg.to_id]]
                )
    return plan


def plan_to_dict(plan: RoutePlan) -> dict:
    """JSON-ready view of a plan."""
    return {
        "stops": [
            {
                "station_id": s.station_id,
                "wait_min": s.wait_min,
                "charge_min": s.charge_min,
                "arrive_soc": s.arrive_soc,
                "depart_soc": s.depart_soc,
            }
            for s in plan.stops
        ],
        "legs": [
            {
                "from": leg.from_id,
                "to": leg.to_id,
                "dist_mi": leg.dist_mi,
                "time_min": leg.time_min,
            }
            for leg in plan.legs
        ],
        "totals": {
            "travel_min": plan.travel_min,
            "wait_min": plan.wait_min,
            "charge_min": plan.charge_min,
            "total_min": plan.total_min,
        },
        "objective_value": plan.objective_value,
        "objective": plan.objective,
        "alpha": plan.alpha,
    }


def plan_to_geojson(plan: RoutePlan) -> dict:
    """Route legs as LineStrings plus one Point per charging stop."""
    features: list[dict] = []
    leg_points = plan.leg_points or []
    for leg, pts in zip(plan.legs, leg_points):
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[p.lon, p.lat] for p in pts],
                },
                "properties": {
                    "from": leg.from_id,
                    "to": leg.to_id,
                    "dist_mi": leg.dist_mi,
                    "time_min": leg.time_min,
                },
            }
        )
    stop_points: dict[str, GeoPoint] = {}
    for pts, leg in zip(leg_points, plan.legs):
        if pts:
            stop_points[leg.to_id] = pts[-1]
    for stop in plan.stops:
        point = stop_points.get(stop.station_id)
        if point is None:
            continue
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [point.lon, point.lat]},
                "properties": {
                    "station_id": stop.station_id,
                    "wait_min": stop.wait_min,
                    "charge_min": stop.charge_min,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
