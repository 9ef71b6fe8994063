"""Loaders for charger, traffic, and road-network inputs.

All loaders are deterministic (same bytes, same values), validate eagerly,
and return immutable-by-convention objects that are safe to share across
threads. Numeric parsing is locale-independent with '.' as the decimal
separator.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .geo import GeoPoint, haversine_miles

DEFAULT_PORTS = 1
DEFAULT_POWER_KW = 50.0
DEFAULT_SPEED_MPH = 40.0

# Sanity band for edge speeds, explicit or implied by length/time.
MIN_SPEED_MPH = 1.0
MAX_SPEED_MPH = 100.0


class ParseError(ValueError):
    """A malformed cell. Carries the file, 1-based data row, and column."""

    def __init__(self, path: str, row: int, column: str, message: str):
        self.path = path
        self.row = row
        self.column = column
        super().__init__(f"{path} row {row}, column {column!r}: {message}")


class DuplicateId(ValueError):
    """Two rows claim the same identifier."""


class DanglingEdge(ValueError):
    """An edge references a node id that was never defined."""

    def __init__(self, from_id: str, to_id: str):
        self.from_id = from_id
        self.to_id = to_id
        super().__init__(f"edge {from_id!r} -> {to_id!r} references an unknown node")


@dataclass(frozen=True)
class ChargerStation:
    """A charging site with some number of identical DC ports."""

    id: str
    location: GeoPoint
    ports: int = DEFAULT_PORTS
    power_kw: float = DEFAULT_POWER_KW

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("station id must be non-empty")
        if not (isinstance(self.ports, int) and self.ports >= 1):
            raise ValueError(f"ports must be an integer >= 1, got {self.ports!r}")
        if not (math.isfinite(self.power_kw) and self.power_kw > 0):
            raise ValueError(f"power_kw must be positive, got {self.power_kw!r}")


@dataclass(frozen=True)
class TrafficPoint:
    """A roadside count location with annual-average daily traffic."""

    id: str
    location: GeoPoint
    aadt: float

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("traffic point id must be non-empty")
        if not (math.isfinite(self.aadt) and self.aadt >= 0):
            raise ValueError(f"aadt must be >= 0, got {self.aadt!r}")


class RoadArc(NamedTuple):
    """One directed road segment."""

    from_id: str
    to_id: str
    length_mi: float
    time_min: float


@dataclass
class RoadNetwork:
    """Directed road graph. Undirected edge rows expand to two arcs."""

    nodes: dict[str, GeoPoint]
    arcs: list[RoadArc] = field(default_factory=list)

    def __post_init__(self) -> None:
        for arc in self.arcs:
            if arc.from_id not in self.nodes or arc.to_id not in self.nodes:
                raise DanglingEdge(arc.from_id, arc.to_id)
            if not (math.isfinite(arc.length_mi) and arc.length_mi > 0):
                raise ValueError(f"arc {arc.from_id}->{arc.to_id}: length must be positive")
            if not (math.isfinite(arc.time_min) and arc.time_min > 0):
                raise ValueError(f"arc {arc.from_id}->{arc.to_id}: time must be positive")
            implied = arc.length_mi / (arc.time_min / 60.0)
            if not MIN_SPEED_MPH < implied <= MAX_SPEED_MPH:
                raise ValueError(
                    f"arc {arc.from_id}->{arc.to_id}: implied speed {implied:.2f} mph "
                    f"outside ({MIN_SPEED_MPH}, {MAX_SPEED_MPH}]"
                )

    def adjacency(self) -> dict[str, list[RoadArc]]:
        """Out-arcs keyed by source node."""
        adj: dict[str, list[RoadArc]] = {node: [] for node in self.nodes}
        for arc in self.arcs:
            adj[arc.from_id].append(arc)
        return adj


def _cell(row: dict[str, str], column: str) -> str:
    return (row.get(column) or "").strip()


def _parse_point(path: str, row_num: int, row: dict[str, str]) -> GeoPoint:
    lat = _parse_float(path, row_num, row, "lat")
    lon = _parse_float(path, row_num, row, "lon")
    try:
        return GeoPoint(lat=lat, lon=lon)
    except ValueError as exc:
        column = "lat" if "latitude" in str(exc) else "lon"
        raise ParseError(path, row_num, column, str(exc)) from None


def _parse_float(path: str, row_num: int, row: dict[str, str], column: str) -> float:
    raw = _cell(row, column)
    if raw == "":
        raise ParseError(path, row_num, column, "missing value")
    try:
        return float(raw)
    except ValueError:
        raise ParseError(path, row_num, column, f"not a number: {raw!r}") from None


def _read_rows(path: str, required: tuple[str, ...]) -> Iterator[tuple[int, dict[str, str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise ParseError(path, 0, col, "missing required column")
        for row_num, row in enumerate(reader, start=1):
            yield row_num, row


def load_chargers(path: str) -> tuple[list[ChargerStation], list[str]]:
    """Read chargers.csv (id,lat,lon,ports,power_kw).

    Rows missing ports or power_kw get the defaults (1 port, 50 kW); each
    fallback is reported in the returned warning list rather than silently
    applied.
    """
    stations: list[ChargerStation] = []
    warnings: list[str] = []
    seen: set[str] = set()
    for row_num, row in _read_rows(path, ("id", "lat", "lon")):
        station_id = _cell(row, "id")
        if not station_id:
            raise ParseError(path, row_num, "id", "missing value")
        if station_id in seen:
            raise DuplicateId(f"{path}: duplicate station id {station_id!r}")
        seen.add(station_id)
        point = _parse_point(path, row_num, row)

        raw_ports = _cell(row, "ports")
        if raw_ports == "":
            ports = DEFAULT_PORTS
            warnings.append(f"row {row_num} ({station_id}): ports missing, defaulted to {DEFAULT_PORTS}")
        else:
            try:
                ports = int(raw_ports)
            except ValueError:
                raise ParseError(path, row_num, "ports", f"not an integer: {raw_ports!r}") from None
            if ports < 1:
                raise ParseError(path, row_num, "ports", f"must be >= 1, got {ports}")

        raw_power = _cell(row, "power_kw")
        if raw_power == "":
            power_kw = DEFAULT_POWER_KW
            warnings.append(
                f"row {row_num} ({station_id}): power_kw missing, defaulted to {DEFAULT_POWER_KW:g}"
            )
        else:
            power_kw = _parse_float(path, row_num, row, "power_kw")
            if power_kw <= 0:
                raise ParseError(path, row_num, "power_kw", f"must be positive, got {power_kw}")

        stations.append(ChargerStation(id=station_id, location=point, ports=ports, power_kw=power_kw))
    return stations, warnings


def load_traffic(path: str) -> tuple[list[TrafficPoint], list[str]]:
    """Read traffic.csv (id,lat,lon,aadt). aadt is total both-direction flow."""
    points: list[TrafficPoint] = []
    seen: set[str] = set()
    for row_num, row in _read_rows(path, ("id", "lat", "lon", "aadt")):
        point_id = _cell(row, "id")
        if not point_id:
            raise ParseError(path, row_num, "id", "missing value")
        if point_id in seen:
            raise DuplicateId(f"{path}: duplicate traffic point id {point_id!r}")
        seen.add(point_id)
        location = _parse_point(path, row_num, row)
        aadt = _parse_float(path, row_num, row, "aadt")
        if aadt < 0:
            raise ParseError(path, row_num, "aadt", f"must be >= 0, got {aadt}")
        points.append(TrafficPoint(id=point_id, location=location, aadt=aadt))
    return points, []


def _edge_arcs(
    path: str, row_num: int, row: dict[str, str], nodes: dict[str, GeoPoint]
) -> list[RoadArc]:
    from_id = _cell(row, "from")
    to_id = _cell(row, "to")
    if not from_id:
        raise ParseError(path, row_num, "from", "missing value")
    if not to_id:
        raise ParseError(path, row_num, "to", "missing value")
    if from_id not in nodes or to_id not in nodes:
        raise DanglingEdge(from_id, to_id)

    length = _parse_float(path, row_num, row, "length_miles")
    if length <= 0:
        raise ParseError(path, row_num, "length_miles", f"must be positive, got {length}")

    raw_speed = _cell(row, "speed_mph")
    speed = DEFAULT_SPEED_MPH if raw_speed == "" else _parse_float(path, row_num, row, "speed_mph")

    raw_time = _cell(row, "time_min")
    if raw_time == "":
        time_min = length / speed * 60.0
    else:
        time_min = _parse_float(path, row_num, row, "time_min")
        if time_min <= 0:
            raise ParseError(path, row_num, "time_min", f"must be positive, got {time_min}")

    implied = length / (time_min / 60.0)
    if not MIN_SPEED_MPH < implied <= MAX_SPEED_MPH:
        raise ParseError(
            path,
            row_num,
            "speed_mph" if raw_time == "" else "time_min",
            f"implied speed {implied:.2f} mph outside ({MIN_SPEED_MPH}, {MAX_SPEED_MPH}]",
        )

    raw_oneway = _cell(row, "oneway")
    if raw_oneway not in ("0", "1"):
        raise ParseError(path, row_num, "oneway", f"must be 0 or 1, got {raw_oneway!r}")

    arcs = [RoadArc(from_id, to_id, length, time_min)]
    if raw_oneway == "0":
        arcs.append(RoadArc(to_id, from_id, length, time_min))
    return arcs


def load_road_network(nodes_path: str, edges_path: str) -> tuple[RoadNetwork, list[str]]:
    """Read nodes.csv (id,lat,lon) and edges.csv (from,to,length_miles,speed_mph,oneway).

    An optional time_min column overrides the speed-derived travel time.
    oneway=0 rows expand to one arc in each direction.
    """
    nodes: dict[str, GeoPoint] = {}
    for row_num, row in _read_rows(nodes_path, ("id", "lat", "lon")):
        node_id = _cell(row, "id")
        if not node_id:
            raise ParseError(nodes_path, row_num, "id", "missing value")
        if node_id in nodes:
            raise DuplicateId(f"{nodes_path}: duplicate node id {node_id!r}")
        nodes[node_id] = _parse_point(nodes_path, row_num, row)

    arcs: list[RoadArc] = []
    for row_num, row in _read_rows(edges_path, ("from", "to", "length_miles", "oneway")):
        arcs.extend(_edge_arcs(edges_path, row_num, row, nodes))

    return RoadNetwork(nodes=nodes, arcs=arcs), []


def load_road_network_geojson(path: str) -> tuple[RoadNetwork, list[str]]:
    """Read a FeatureCollection of LineStrings as a road network.

    Each consecutive coordinate pair becomes an edge whose length defaults
    to the great-circle distance; a feature-level ``length_miles`` property
    rescales the segment lengths to match a surveyed total. Recognized
    properties: speed_mph (default 40), oneway (0/1, default 0),
    length_miles. Nodes are synthesized per distinct coordinate, named
    gj0, gj1, ... in order of first appearance.
    """
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("type") != "FeatureCollection":
        raise ParseError(path, 0, "type", "expected a FeatureCollection")

    nodes: dict[str, GeoPoint] = {}
    node_by_coord: dict[tuple[float, float], str] = {}
    arcs: list[RoadArc] = []
    warnings: list[str] = []

    def node_for(feature_num: int, coord: list[float]) -> str:
        if not (isinstance(coord, list) and len(coord) >= 2):
            raise ParseError(path, feature_num, "coordinates", f"bad coordinate {coord!r}")
        lon, lat = float(coord[0]), float(coord[1])
        key = (lon, lat)
        if key not in node_by_coord:
            name = f"gj{len(node_by_coord)}"
            node_by_coord[key] = name
            try:
                nodes[name] = GeoPoint(lat=lat, lon=lon)
            except ValueError as exc:
                raise ParseError(path, feature_num, "coordinates", str(exc)) from None
        return node_by_coord[key]

    for feature_num, feature in enumerate(doc.get("features", []), start=1):
        geometry = feature.get("geometry") or {}
        if geometry.get("type") != "LineString":
            warnings.append(f"feature {feature_num}: skipped non-LineString geometry")
            continue
        coords = geometry.get("coordinates") or []
        if len(coords) < 2:
            raise ParseError(path, feature_num, "coordinates", "LineString needs 2+ points")
        props = feature.get("properties") or {}
        speed = float(props.get("speed_mph") or DEFAULT_SPEED_MPH)
        oneway = int(props.get("oneway") or 0)
        if oneway not in (0, 1):
            raise ParseError(path, feature_num, "oneway", f"must be 0 or 1, got {oneway!r}")

        ids = [node_for(feature_num, c) for c in coords]
        seg_lengths = [
            haversine_miles(nodes[a], nodes[b]) for a, b in zip(ids, ids[1:])
        ]
        total = sum(seg_lengths)
        if total <= 0:
            raise ParseError(path, feature_num, "coordinates", "zero-length LineString")
        if props.get("length_miles") is not None:
            scale = float(props["length_miles"]) / total
            if scale <= 0:
                raise ParseError(path, feature_num, "length_miles", "must be positive")
            seg_lengths = [s * scale for s in seg_lengths]

        for (a, b), seg in zip(zip(ids, ids[1:]), seg_lengths):
            if seg <= 0:
                raise ParseError(path, feature_num, "coordinates", "repeated coordinate")
            time_min = seg / speed * 60.0
            arcs.append(RoadArc(a, b, seg, time_min))
            if oneway == 0:
                arcs.append(RoadArc(b, a, seg, time_min))

    return RoadNetwork(nodes=nodes, arcs=arcs), warnings
