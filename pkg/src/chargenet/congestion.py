"""Traffic counts to per-station charging demand and waiting time.

Demand: each count point sheds ``hourly_flow * ev_share * charge_need_share``
charging arrivals per hour onto the stations within its catchment radius.
Wait: a deterministic fluid overload model; queueing delay appears only when
hourly arrivals exceed hourly service capacity, capped at ``wait_cap_min``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .geo import haversine_miles
from .ingest import ChargerStation, TrafficPoint

# Floor for inverse-distance weights so coincident points stay finite.
_MIN_WEIGHT_DISTANCE_MI = 0.1

_SPLIT_MODES = ("equal", "inverse_distance")


@dataclass(frozen=True)
class DemandConfig:
    """Knobs for turning traffic counts into charging arrivals and waits."""

    ev_share: float = 0.01
    charge_need_share: float = 0.01
    service_min: float = 15.0
    wait_cap_min: float = 60.0
    assign_radius_mi: float = 40.0
    split_mode: str = "equal"

    def __post_init__(self) -> None:
        for name in ("ev_share", "charge_need_share"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {value!r}")
        for name in ("service_min", "wait_cap_min", "assign_radius_mi"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        if self.split_mode not in _SPLIT_MODES:
            raise ValueError(f"split_mode must be one of {_SPLIT_MODES}, got {self.split_mode!r}")


# Named presets: "urban" tightens the catchment to city scale; "fleet-share"
# uses the statewide registered-EV fraction instead of the observed 1%.
PRESETS: dict[str, DemandConfig] = {
    "default": DemandConfig(),
    "urban": DemandConfig(assign_radius_mi=2.0),
    "fleet-share": DemandConfig(ev_share=0.014),
}


@dataclass(frozen=True)
class WaitProfile:
    """Demand and resulting queueing delay at one station."""

    station_id: str
    arrivals_per_hour: float
    wait_min: float

    def __post_init__(self) -> None:
        if self.arrivals_per_hour < 0:
            raise ValueError(f"arrivals_per_hour must be >= 0, got {self.arrivals_per_hour!r}")
        if self.wait_min < 0:
            raise ValueError(f"wait_min must be >= 0, got {self.wait_min!r}")


def hourly_flow(aadt: float) -> float:
    """Vehicles per hour under a uniform-over-day assumption."""
    if aadt < 0:
        raise ValueError(f"aadt must be >= 0, got {aadt!r}")
    return aadt / 24.0


def assign_demand(
    stations: Iterable[ChargerStation],
    traffic_points: Iterable[TrafficPoint],
    cfg: DemandConfig,
) -> tuple[dict[str, float], float]:
    """Distribute charging arrivals from count points to nearby stations.

    Returns (arrivals per hour by station id, orphaned arrivals per hour).
    A point splits its demand over every station within assign_radius_mi
    (boundary inclusive), equally or by inverse distance per cfg.split_mode;
    a point covered by no station adds to the orphaned total.
    """
    stations = list(stations)
    arrivals: dict[str, float] = {s.id: 0.0 for s in stations}
    orphaned = 0.0
    for point in traffic_points:
        demand = hourly_flow(point.aadt) * cfg.ev_share * cfg.charge_need_share
        covering = [
            (s, haversine_miles(point.location, s.location))
            for s in stations
            if haversine_miles(point.location, s.location) <= cfg.assign_radius_mi
        ]
        if not covering:
            orphaned += demand
            continue
        if cfg.split_mode == "equal":
            share = demand / len(covering)
            for station, _dist in covering:
                arrivals[station.id] += share
        else:
            weights = [1.0 / max(dist, _MIN_WEIGHT_DISTANCE_MI) for _s, dist in covering]
            total = sum(weights)
            for (station, _dist), weight in zip(covering, weights):
                arrivals[station.id] += demand * weight / total
    return arrivals, orphaned


def waiting_time(arrivals_per_hour: float, ports: int, cfg: DemandConfig) -> float:
    """Expected wait in minutes under the fluid overload model.

    Utilization rho = arrivals * service_min / (60 * ports). No wait while
    the station keeps up (rho <= 1); past that, each hour of arrivals is
    delayed by the hourly backlog, capped at cfg.wait_cap_min.
    """
    if ports < 1:
        raise ValueError(f"ports must be >= 1, got {ports!r}")
    if arrivals_per_hour < 0:
        raise ValueError(f"arrivals_per_hour must be >= 0, got {arrivals_per_hour!r}")
    rho = arrivals_per_hour * cfg.service_min / (60.0 * ports)
    return min(cfg.wait_cap_min, max(0.0, (rho - 1.0) * 60.0))


def build_wait_profiles(
    stations: Iterable[ChargerStation],
    traffic_points: Iterable[TrafficPoint],
    cfg: DemandConfig,
) -> dict[str, WaitProfile]:
    """Full pipeline: demand assignment plus wait for every station."""
    stations = list(stations)
    arrivals, _orphaned = assign_demand(stations, traffic_points, cfg)
    profiles: dict[str, WaitProfile] = {}
    for station in stations:
        rate = arrivals.get(station.id, 0.0)
        profiles[station.id] = WaitProfile(
            station_id=station.id,
            arrivals_per_hour=rate,
            wait_min=waiting_time(rate, station.ports, cfg),
        )
    return profiles


def wait_minutes_by_station(profiles: Mapping[str, WaitProfile]) -> dict[str, float]:
    """Flatten profiles to the station_id -> minutes map the router consumes."""
    return {station_id: p.wait_min for station_id, p in profiles.items()}
