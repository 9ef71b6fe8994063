"""Shared fixtures: loaded datasets and the acceptance summary hook."""

from __future__ import annotations

import os

import pytest

from chargenet.congestion import DemandConfig
from chargenet.ingest import load_chargers, load_road_network, load_traffic

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


@pytest.fixture(scope="session")
def metro():
    """The corridor dataset: 45 road nodes, 8 chargers, 12 traffic points."""
    stations, _ = load_chargers(fixture_path("metro", "chargers.csv"))
    traffic, _ = load_traffic(fixture_path("metro", "traffic.csv"))
    road, _ = load_road_network(
        fixture_path("metro", "nodes.csv"), fixture_path("metro", "edges.csv")
    )
    cfg = DemandConfig(
        ev_share=0.01,
        charge_need_share=1.0,
        service_min=15.0,
        wait_cap_min=60.0,
        assign_radius_mi=2.0,
    )
    return {"stations": stations, "traffic": traffic, "road": road, "cfg": cfg}


@pytest.fixture(scope="session")
def diamond():
    """Two disjoint chains: short but congested vs long and clear."""
    stations, _ = load_chargers(fixture_path("diamond", "chargers.csv"))
    traffic, _ = load_traffic(fixture_path("diamond", "traffic.csv"))
    road, _ = load_road_network(
        fixture_path("diamond", "nodes.csv"), fixture_path("diamond", "edges.csv")
    )
    cfg = DemandConfig(
        ev_share=0.01,
        charge_need_share=1.0,
        service_min=15.0,
        wait_cap_min=60.0,
        assign_radius_mi=2.0,
    )
    return {"stations": stations, "traffic": traffic, "road": road, "cfg": cfg}


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows: list[tuple[str, str]] = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", None) == "call" and "test_acceptance" in rep.nodeid:
                rows.append((rep.nodeid.split("::")[-1], "PASS" if status == "passed" else "FAIL"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"[acceptance] {name}: {outcome}")
