#!/usr/bin/env python3
"""Regenerate the synthetic fixture datasets under fixtures/.

Two networks:

- metro/: a 210-mile east-west corridor with spur-connected chargers, a
  slower parallel arterial, and traffic counts tuned so the mid-corridor
  station is congested while the main stop keeps a modest 15-minute wait.
- diamond/: two disjoint chains between the same endpoints, one shorter
  but congested, one longer and clear, for trade-off demonstrations.

All coordinates are rounded to 6 decimals so that points meant to coincide
(chargers at road nodes, counts at chargers) match exactly.
"""

from __future__ import annotations

import csv
import os

ROOT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

BASE_LAT = 32.9
BASE_LON = -97.6
DLON_PER_10MI = 0.1722
DLAT_PER_10MI = 0.1446


def corridor_point(mile: float, north_mi: float = 0.0) -> tuple[float, float]:
    lat = round(BASE_LAT + north_mi / 10.0 * DLAT_PER_10MI, 6)
    lon = round(BASE_LON + mile / 10.0 * DLON_PER_10MI, 6)
    return lat, lon


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def build_metro() -> None:
    base = os.path.join(ROOT, "metro")
    nodes: list[list] = []
    edges: list[list] = []

    def add_node(node_id: str, lat: float, lon: float) -> None:
        nodes.append([node_id, lat, lon])

    def add_edge(a: str, b: str, length: float, speed: float, time_min: float) -> None:
        edges.append([a, b, length, speed, time_min, 0])

    # Main corridor: n00 .. n21, 10-mile hops at 60 mph.
    for k in range(22):
        lat, lon = corridor_point(k * 10)
        add_node(f"n{k:02d}", lat, lon)
    for k in range(21):
        add_edge(f"n{k:02d}", f"n{k + 1:02d}", 10, 60, 10)

    # Spurs: (attach corridor node, chain of (node id, miles further out)).
    spurs = {
        "u1a": ("n02", 5, +1),
        "u3a": ("n04", 9, +1),
        "s1a": ("n06", 10, +1),
        "s1b": ("s1a", 10, +1),
        "s2a": ("n15", 10, -1),
        "u4a": ("n17", 7, -1),
        "u2a": ("n19", 5, +1),
    }
    position: dict[str, tuple[float, float]] = {}
    for k in range(22):
        position[f"n{k:02d}"] = (k * 10.0, 0.0)
    for node_id, (attach, miles, sign) in spurs.items():
        mile, north = position[attach]
        north2 = north + sign * miles
        position[node_id] = (mile, north2)
        lat, lon = corridor_point(mile, north2)
        add_node(node_id, lat, lon)
        add_edge(attach, node_id, miles, 60, miles)

    # Parallel arterial 20 miles north: slower, never a shortcut.
    for k in range(16):
        lat, lon = corridor_point(30 + k * 12, 20)
        add_node(f"a{k:02d}", lat, lon)
    for k in range(15):
        add_edge(f"a{k:02d}", f"a{k + 1:02d}", 12, 40, 18)
    add_edge("n03", "a00", 16, 48, 20)
    add_edge("n18", "a15", 16, 48, 20)

    write_csv(os.path.join(base, "nodes.csv"), ["id", "lat", "lon"], nodes)
    write_csv(
        os.path.join(base, "edges.csv"),
        ["from", "to", "length_miles", "speed_mph", "time_min", "oneway"],
        edges,
    )

    node_coord = {row[0]: (row[1], row[2]) for row in nodes}

    def at(node_id: str) -> tuple[float, float]:
        return node_coord[node_id]

    chargers = [
        # id, node, ports, power_kw
        ("b-main", "n12", 2, 120),
        ("c-mid", "n09", 1, 50),
        ("sp-north", "s1b", 1, 150),
        ("sp-south", "s2a", 1, 120),
        ("u-west", "u1a", 1, 50),
        ("u-east", "u2a", 1, 50),
        ("u-nw", "u3a", 1, 250),
        ("u-se", "u4a", 1, 120),
    ]
    write_csv(
        os.path.join(base, "chargers.csv"),
        ["id", "lat", "lon", "ports", "power_kw"],
        [[cid, *at(node), ports, power] for cid, node, ports, power in chargers],
    )

    traffic = [
        # Counts at charger sites (aadt tuned for target waits at
        # charge_need_share=1.0, ev_share=0.01):
        ("t-main", *at("n12"), 24000),   # 10/h on 2 ports -> 15 min wait
        ("t-mid", *at("n09"), 60000),    # 25/h on 1 port -> capped 60
        ("t-se", *at("u4a"), 14400),     # 6/h on 1 port -> 30
        ("t-west", *at("u1a"), 7200),    # under capacity -> 0
        ("t-east", *at("u2a"), 4800),
        ("t-nw", *at("u3a"), 2400),
        ("t-north", *at("s1b"), 3600),
        ("t-south", *at("s2a"), 6000),
        # Orphans far from every charger: two demand clusters for siting.
        ("o-north1", 33.5, -97.4, 9000),
        ("o-north2", 33.52, -97.38, 11000),
        ("o-south1", 32.3, -95.2, 3000),
        ("o-south2", 32.28, -95.18, 2000),
    ]
    write_csv(
        os.path.join(base, "traffic.csv"),
        ["id", "lat", "lon", "aadt"],
        [list(row) for row in traffic],
    )

    with open(os.path.join(base, "demand.cfg"), "w", encoding="utf-8") as fh:
        fh.write(
            "# metro demand model: urban catchment, every EV passing stops once\n"
            "ev_share = 0.01\n"
            "charge_need_share = 1.0\n"
            "service_min = 15\n"
            "wait_cap_min = 60\n"
            "assign_radius_mi = 2\n"
            "split_mode = equal\n"
            "avg_speed_mph = 60\n"
        )
    print(f"wrote {os.path.join(base, 'demand.cfg')}")


def build_diamond() -> None:
    base = os.path.join(ROOT, "diamond")
    nodes = [
        ["d00", 32.9, -97.5],
        ["a1", 32.5, -95.7],
        ["b1", 33.3, -95.7],
        ["dd", 32.9, -93.9],
        ["e1", 32.75, -93.85],
    ]
    edges = [
        ["d00", "a1", 95, 60, 95, 0],
        ["a1", "dd", 95, 60, 95, 0],
        ["d00", "b1", 105, 60, 105, 0],
        ["b1", "dd", 105, 60, 105, 0],
        ["dd", "e1", 20, 60, 20, 0],
    ]
    write_csv(os.path.join(base, "nodes.csv"), ["id", "lat", "lon"], nodes)
    write_csv(
        os.path.join(base, "edges.csv"),
        ["from", "to", "length_miles", "speed_mph", "time_min", "oneway"],
        edges,
    )
    write_csv(
        os.path.join(base, "chargers.csv"),
        ["id", "lat", "lon", "ports", "power_kw"],
        [
            ["c1", 32.5, -95.7, 1, 120],
            ["c2", 33.3, -95.7, 2, 120],
            ["c3-spare", 32.75, -93.85, 1, 50],
        ],
    )
    write_csv(
        os.path.join(base, "traffic.csv"),
        ["id", "lat", "lon", "aadt"],
        [["t1", 32.5, -95.7, 17600]],  # 7.33/h on 1 port -> ~50 min wait
    )
    with open(os.path.join(base, "demand.cfg"), "w", encoding="utf-8") as fh:
        fh.write(
            "# diamond demand model: same catchment rules as the metro set\n"
            "ev_share = 0.01\n"
            "charge_need_share = 1.0\n"
            "service_min = 15\n"
            "wait_cap_min = 60\n"
            "assign_radius_mi = 2\n"
            "split_mode = equal\n"
            "avg_speed_mph = 60\n"
        )


def build_ev_models() -> None:
    write_csv(
        os.path.join(ROOT, "ev_models.csv"),
        ["name", "battery_kwh", "rated_range_mi", "soc_min", "soc_cv", "cv_tau_min"],
        [
            ["base209", 50, 209, "", "", ""],
            ["lr281", 60, 281, 0.15, 0.80, 20],
            ["max353", 95, 353, 0.15, 0.80, 20],
        ],
    )


if __name__ == "__main__":
    build_metro()
    build_diamond()
    build_ev_models()
