"""JSON-over-HTTP facade over the planning library.

The service holds one immutable dataset snapshot loaded at startup; every
handler is a thin adapter that validates, calls the corresponding library
function, and serializes its result. No analytics logic lives here, so a
response always equals the library call's own serialization.

Error contract: 400 with {error, detail} for malformed or invalid input,
422 for requests that are well-formed but unsatisfiable (infeasible route,
k larger than the uncovered set).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..charging import DEFAULT_EV_MODELS, EVModel, cc_range_miles
from ..congestion import DemandConfig, WaitProfile, build_wait_profiles
from ..geo import GeoPoint
from ..ingest import ChargerStation, RoadNetwork, TrafficPoint
from ..robustness import compute_robustness
from ..router import (
    Infeasible,
    InvalidQuery,
    RouteQuery,
    plan_route,
    plan_to_dict,
    plan_to_geojson,
)
from ..siting import EmptyDemand, InvalidK, coverage, propose_sites
from .schemas import PlanRequest, SiteProposalRequest


@dataclass(frozen=True)
class ServiceState:
    """Immutable dataset snapshot every request observes."""

    stations: tuple[ChargerStation, ...]
    traffic: tuple[TrafficPoint, ...]
    road_net: RoadNetwork | None
    demand_cfg: DemandConfig
    wait_profiles: Mapping[str, WaitProfile]
    ev_models: Mapping[str, EVModel]
    avg_speed_mph: float = 60.0
    cors_origins: tuple[str, ...] = ("*",)

    @classmethod
    def build(
        cls,
        stations: Sequence[ChargerStation],
        traffic: Sequence[TrafficPoint] = (),
        road_net: RoadNetwork | None = None,
        demand_cfg: DemandConfig | None = None,
        ev_models: Mapping[str, EVModel] | None = None,
        avg_speed_mph: float = 60.0,
        cors_origins: Sequence[str] = ("*",),
    ) -> "ServiceState":
        cfg = demand_cfg or DemandConfig()
        return cls(
            stations=tuple(stations),
            traffic=tuple(traffic),
            road_net=road_net,
            demand_cfg=cfg,
            wait_profiles=build_wait_profiles(stations, traffic, cfg),
            ev_models=dict(ev_models or DEFAULT_EV_MODELS),
            avg_speed_mph=avg_speed_mph,
            cors_origins=tuple(cors_origins),
        )

    def wait_map(self) -> dict[str, float]:
        return {sid: p.wait_min for sid, p in self.wait_profiles.items()}


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="chargenet", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(state.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "bad_request", str(exc.errors()))

    @app.exception_handler(InvalidQuery)
    async def invalid_query(_request: Request, exc: InvalidQuery) -> JSONResponse:
        return _error(400, "invalid_query", str(exc))

    @app.exception_handler(ValueError)
    async def invalid_value(_request: Request, exc: ValueError) -> JSONResponse:
        return _error(400, "bad_request", str(exc))

    @app.exception_handler(Infeasible)
    async def infeasible(_request: Request, exc: Infeasible) -> JSONResponse:
        return _error(422, "infeasible", str(exc))

    @app.exception_handler(InvalidK)
    async def invalid_k(_request: Request, exc: InvalidK) -> JSONResponse:
        return _error(422, "invalid_k", str(exc))

    @app.exception_handler(EmptyDemand)
    async def empty_demand(_request: Request, exc: EmptyDemand) -> JSONResponse:
        return _error(422, "empty_demand", str(exc))

    @app.get("/stations")
    def get_stations() -> list[dict]:
        waits = state.wait_map()
        return [
            {
                "id": s.id,
                "lat": s.location.lat,
                "lon": s.location.lon,
                "ports": s.ports,
                "power_kw": s.power_kw,
                "wait_min": waits.get(s.id, 0.0),
            }
            for s in state.stations
        ]

    @app.get("/ev-models")
    def get_ev_models() -> list[dict]:
        return [
            {
                "name": m.name,
                "battery_kwh": m.battery_kwh,
                "rated_range_mi": m.rated_range_mi,
                "soc_min": m.soc_min,
                "soc_cv": m.soc_cv,
                "cv_tau_min": m.cv_tau_min,
                "cc_range_mi": cc_range_miles(m),
            }
            for _name, m in sorted(state.ev_models.items())
        ]

    @app.post("/plan")
    def post_plan(body: PlanRequest) -> dict:
        ev = state.ev_models.get(body.ev)
        if ev is None:
            raise ValueError(
                f"unknown EV model {body.ev!r}; choices: {', '.join(sorted(state.ev_models))}"
            )
        query = RouteQuery(
            origin=GeoPoint(lat=body.origin.lat, lon=body.origin.lon),
            destination=GeoPoint(lat=body.destination.lat, lon=body.destination.lon),
            ev=ev,
            soc_start=body.soc_start,
            alpha=body.alpha,
            wait_profiles=state.wait_map(),
            objective=body.objective,
            cv_overshoot=body.cv_overshoot,
        )
        plan = plan_route(
            query,
            list(state.stations),
            state.road_net,
            avg_speed_mph=state.avg_speed_mph,
        )
        result = plan_to_dict(plan)
        result["geojson"] = plan_to_geojson(plan)
        return result

    @app.get("/coverage")
    def get_coverage(radius_mi: float | None = Query(default=None, gt=0)) -> dict:
        radius = radius_mi if radius_mi is not None else state.demand_cfg.assign_radius_mi
        result = coverage(state.stations, state.traffic, radius)
        return {
            "radius_mi": radius,
            "covered": [
                {"point_id": pid, "station_ids": sids} for pid, sids in result.covered
            ],
            "uncovered": result.uncovered,
        }

    @app.post("/site-proposals")
    def post_site_proposals(body: SiteProposalRequest) -> dict:
        radius = body.radius_mi if body.radius_mi is not None else state.demand_cfg.assign_radius_mi
        if radius <= 0:
            raise ValueError(f"radius_mi must be positive, got {radius}")
        result = coverage(state.stations, state.traffic, radius)
        proposal = propose_sites(result.uncovered, list(state.traffic), k=body.k, seed=body.seed)
        return {
            "radius_mi": radius,
            "k": proposal.k,
            "seed": proposal.seed,
            "uncovered_count": len(result.uncovered),
            "clusters": [
                {"cluster": idx, "lat": c.lat, "lon": c.lon, "demand_aadt": demand}
                for idx, (c, demand) in enumerate(
                    zip(proposal.centroids, proposal.demand_per_cluster)
                )
            ],
            "assignment": proposal.assignment,
        }

    @app.get("/robustness")
    def get_robustness(
        lambda_max_mi: float | None = Query(default=None, gt=0),
        trials: int = Query(default=30, ge=1),
        seed: int = 0,
        weighted: bool = True,
        targeted_by: str = Query(default="betweenness", pattern="^(betweenness|degree)$"),
    ) -> dict:
        lam = (
            lambda_max_mi
            if lambda_max_mi is not None
            else cc_range_miles(state.ev_models.get("lr281") or next(iter(state.ev_models.values())))
        )
        report = compute_robustness(
            state.stations,
            lam,
            trials=trials,
            seed=seed,
            road_net=state.road_net,
            weighted=weighted,
            targeted_by=targeted_by,
        )
        return {
            "lambda_max_mi": report.lambda_max_mi,
            "node_count": report.node_count,
            "edge_count": report.edge_count,
            "seed": report.seed,
            "trials": report.trials,
            "degree": report.degree,
            "betweenness": report.betweenness,
            "percolation_random": [
                {"fraction": f, "mean_gcc": m, "std_gcc": s}
                for f, m, s in report.percolation_random
            ],
            "percolation_targeted": [
                {"fraction": f, "gcc": g} for f, g in report.percolation_targeted
            ],
        }

    return app
