"""Record service responses as JSON fixtures for the web UI tests.

Runs the HTTP app in-process over both shipped fixture datasets and saves
selected response bodies under frontend/tests/fixtures/. Rerun after any
change to the service or the fixture data, then rerun the frontend suite.
"""

from __future__ import annotations

import json
import os
import sys

from fastapi.testclient import TestClient

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from chargenet.cli import parse_config_file, resolve_demand_config
from chargenet.ingest import load_chargers, load_road_network, load_traffic
from chargenet.service.app import ServiceState, create_app

ROOT = os.path.join(os.path.dirname(__file__), "..")
OUT = os.path.join(ROOT, "frontend", "tests", "fixtures")


def client_for(fixture: str, with_roads: bool = True) -> TestClient:
    base = os.path.join(ROOT, "fixtures", fixture)
    stations, _ = load_chargers(os.path.join(base, "chargers.csv"))
    traffic, _ = load_traffic(os.path.join(base, "traffic.csv"))
    road = None
    if with_roads:
        road, _ = load_road_network(
            os.path.join(base, "nodes.csv"), os.path.join(base, "edges.csv")
        )
    cfg, _ = resolve_demand_config(parse_config_file(os.path.join(base, "demand.cfg")))
    state = ServiceState.build(
        stations=stations, traffic=traffic, road_net=road, demand_cfg=cfg
    )
    return TestClient(create_app(state))


def save(name: str, status: int, body: object) -> None:
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, name), "w", encoding="utf-8") as fh:
        json.dump({"status": status, "body": body}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {name} ({status})")


def main() -> None:
    metro = client_for("metro")
    diamond = client_for("diamond")

    r = metro.get("/stations")
    save("stations_metro.json", r.status_code, r.json())
    r = metro.get("/ev-models")
    save("ev_models.json", r.status_code, r.json())

    plan_body = {
        "from": {"lat": 32.9, "lon": -97.6},
        "to": {"lat": 32.9, "lon": -93.9838},
        "ev": "lr281",
        "soc_start": 0.8,
        "alpha": 1.0,
    }
    r = metro.post("/plan", json=plan_body)
    save("plan_metro.json", r.status_code, r.json())

    same = dict(plan_body, to=plan_body["from"])
    r = metro.post("/plan", json=same)
    save("plan_same_point.json", r.status_code, r.json())

    r = metro.post("/plan", json=dict(plan_body, soc_start=0.16))
    save("plan_infeasible.json", r.status_code, r.json())

    r = metro.post("/plan", json=dict(plan_body, soc_start=0.05))
    save("plan_invalid.json", r.status_code, r.json())

    r = diamond.get("/stations")
    save("stations_diamond.json", r.status_code, r.json())

    diamond_body = {
        "from": {"lat": 32.9, "lon": -97.5},
        "to": {"lat": 32.9, "lon": -93.9},
        "ev": "lr281",
        "soc_start": 0.8,
    }
    for alpha in (0.0, 1.0):
        r = diamond.post("/plan", json=dict(diamond_body, alpha=alpha))
        save(f"plan_diamond_alpha{int(alpha)}.json", r.status_code, r.json())


if __name__ == "__main__":
    main()
