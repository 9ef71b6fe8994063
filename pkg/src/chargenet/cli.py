"""Command-line front end: coverage, site, robustness, plan, serve.

Every output file embeds the run manifest (inputs, config, seed) so a
result can be reproduced from its header alone: CSV files carry it in a
leading ``#`` comment line, GeoJSON in an ``x_run`` top-level member.
Exit codes are a stable contract: 0 success, 1 infeasible or empty
result, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import socket
import sys
from dataclasses import dataclass
from typing import Sequence

from .charging import DEFAULT_EV_MODELS, EVModel, cc_range_miles, load_ev_models
from .congestion import PRESETS, DemandConfig, build_wait_profiles
from .geo import GeoPoint
from .ingest import (
    ChargerStation,
    DanglingEdge,
    DuplicateId,
    ParseError,
    RoadNetwork,
    TrafficPoint,
    load_chargers,
    load_road_network,
    load_road_network_geojson,
    load_traffic,
)
from .robustness import compute_robustness
from .router import Infeasible, InvalidQuery, RouteQuery, plan_route, plan_to_dict, plan_to_geojson
from .siting import EmptyDemand, InvalidK, coverage, propose_sites

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2

DEFAULT_EV_NAME = "lr281"

# Config keys that configure the run but are not DemandConfig fields.
_EXTRA_CONFIG_KEYS = ("preset", "avg_speed_mph", "lambda_max_mi")
_DEMAND_FIELDS = tuple(f.name for f in dataclasses.fields(DemandConfig))


@dataclass
class RunManifest:
    """What produced an output file; stamped into every artifact."""

    command: str
    seed: int
    inputs: dict[str, str]
    config: dict[str, object]

    def as_dict(self) -> dict[str, object]:
        return {
            "command": self.command,
            "seed": self.seed,
            "inputs": dict(sorted(self.inputs.items())),
            "config": dict(sorted(self.config.items())),
        }

    def header_line(self) -> str:
        return "# chargenet " + json.dumps(self.as_dict(), sort_keys=True)


def write_csv_report(
    path: str, manifest: RunManifest, columns: Sequence[str], rows: Sequence[Sequence[object]]
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(manifest.header_line() + "\n")
        writer = csv.writer(fh)
        writer.writerow(list(columns))
        writer.writerows(rows)


def write_geojson_report(path: str, manifest: RunManifest, features: list[dict]) -> None:
    doc = {"type": "FeatureCollection", "x_run": manifest.as_dict(), "features": features}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_json_report(path: str, manifest: RunManifest, body: dict) -> None:
    doc = {"x_run": manifest.as_dict(), **body}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_num, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path} line {line_num}: expected key = value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip().strip("'\"")
    return out


def resolve_demand_config(raw: dict[str, str]) -> tuple[DemandConfig, dict[str, str]]:
    """Split a config mapping into a DemandConfig and the extra settings."""
    extras = {k: v for k, v in raw.items() if k in _EXTRA_CONFIG_KEYS}
    unknown = [k for k in raw if k not in _DEMAND_FIELDS and k not in _EXTRA_CONFIG_KEYS]
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    base = PRESETS["default"]
    if "preset" in extras:
        preset = extras["preset"]
        if preset not in PRESETS:
            raise ValueError(f"unknown preset {preset!r}; choices: {', '.join(sorted(PRESETS))}")
        base = PRESETS[preset]
    overrides: dict[str, object] = {}
    for name in _DEMAND_FIELDS:
        if name in raw:
            overrides[name] = raw[name] if name == "split_mode" else float(raw[name])
    return dataclasses.replace(base, **overrides), extras


def _manifest_config(cfg: DemandConfig, **extra: object) -> dict[str, object]:
    body: dict[str, object] = dataclasses.asdict(cfg)
    body.update(extra)
    return body


@dataclass
class LoadedInputs:
    stations: list[ChargerStation]
    traffic: list[TrafficPoint]
    road_net: RoadNetwork | None
    demand_cfg: DemandConfig
    extras: dict[str, str]
    warnings: list[str]
    inputs: dict[str, str]


def _load_inputs(args: argparse.Namespace, need_traffic: bool = False) -> LoadedInputs:
    raw_cfg: dict[str, str] = {}
    inputs: dict[str, str] = {}
    if getattr(args, "config", None):
        raw_cfg = parse_config_file(args.config)
        inputs["config"] = args.config
    demand_cfg, extras = resolve_demand_config(raw_cfg)

    warnings: list[str] = []
    stations: list[ChargerStation] = []
    if getattr(args, "chargers", None):
        stations, charger_warnings = load_chargers(args.chargers)
        warnings.extend(charger_warnings)
        inputs["chargers"] = args.chargers

    traffic: list[TrafficPoint] = []
    if getattr(args, "traffic", None):
        traffic, traffic_warnings = load_traffic(args.traffic)
        warnings.extend(traffic_warnings)
        inputs["traffic"] = args.traffic
    elif need_traffic:
        raise ValueError("this command needs --traffic")

    road_net: RoadNetwork | None = None
    nodes = getattr(args, "nodes", None)
    edges = getattr(args, "edges", None)
    if nodes and edges:
        road_net, road_warnings = load_road_network(nodes, edges)
        warnings.extend(road_warnings)
        inputs["nodes"] = nodes
        inputs["edges"] = edges
    elif nodes and str(nodes).endswith(".geojson") and not edges:
        road_net, road_warnings = load_road_network_geojson(nodes)
        warnings.extend(road_warnings)
        inputs["nodes"] = nodes
    elif nodes or edges:
        raise ValueError("--nodes and --edges must be given together (or --nodes file.geojson)")

    return LoadedInputs(stations, traffic, road_net, demand_cfg, extras, warnings, inputs)


def _out_path(args: argparse.Namespace, name: str) -> str:
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _print_warnings(warnings: list[str]) -> None:
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)


def cmd_coverage(args: argparse.Namespace) -> int:
    loaded = _load_inputs(args, need_traffic=True)
    _print_warnings(loaded.warnings)
    radius = args.radius if args.radius is not None else loaded.demand_cfg.assign_radius_mi
    result = coverage(loaded.stations, loaded.traffic, radius)

    manifest = RunManifest(
        command="coverage",
        seed=args.seed,
        inputs=loaded.inputs,
        config=_manifest_config(loaded.demand_cfg, radius_mi=radius),
    )
    covered_by = dict(result.covered)
    rows = []
    for point in loaded.traffic:
        stations = covered_by.get(point.id)
        rows.append(
            [point.id, 1 if stations is not None else 0, ";".join(stations or [])]
        )
    write_csv_report(
        _out_path(args, "coverage.csv"), manifest, ["point_id", "covered", "station_ids"], rows
    )

    features = [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.location.lon, p.location.lat]},
            "properties": {
                "kind": "demand",
                "id": p.id,
                "aadt": p.aadt,
                "covered": p.id in covered_by,
            },
        }
        for p in loaded.traffic
    ] + [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [s.location.lon, s.location.lat]},
            "properties": {
                "kind": "station",
                "id": s.id,
                "ports": s.ports,
                "power_kw": s.power_kw,
                "radius_mi": radius,
            },
        }
        for s in loaded.stations
    ]
    write_geojson_report(_out_path(args, "coverage.geojson"), manifest, features)

    print(
        f"coverage: {len(result.covered)} covered, {len(result.uncovered)} uncovered "
        f"of {len(loaded.traffic)} points (radius {radius:g} mi)"
    )
    return EXIT_OK


def cmd_site(args: argparse.Namespace) -> int:
    loaded = _load_inputs(args, need_traffic=True)
    _print_warnings(loaded.warnings)
    radius = args.radius if args.radius is not None else loaded.demand_cfg.assign_radius_mi
    result = coverage(loaded.stations, loaded.traffic, radius)
    proposal = propose_sites(result.uncovered, loaded.traffic, k=args.k, seed=args.seed)

    manifest = RunManifest(
        command="site",
        seed=args.seed,
        inputs=loaded.inputs,
        config=_manifest_config(loaded.demand_cfg, radius_mi=radius, k=args.k),
    )
    rows = [
        [idx, c.lat, c.lon, demand]
        for idx, (c, demand) in enumerate(zip(proposal.centroids, proposal.demand_per_cluster))
    ]
    write_csv_report(
        _out_path(args, "sites.csv"), manifest, ["cluster", "lat", "lon", "demand_aadt"], rows
    )
    features = [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [c.lon, c.lat]},
            "properties": {"cluster": idx, "demand_aadt": demand},
        }
        for idx, (c, demand) in enumerate(zip(proposal.centroids, proposal.demand_per_cluster))
    ]
    write_geojson_report(_out_path(args, "sites.geojson"), manifest, features)
    print(
        f"site: {len(result.uncovered)} uncovered points clustered into {proposal.k}; "
        f"top cluster demand {proposal.demand_per_cluster[0]:g} aadt"
    )
    return EXIT_OK


def _quantile_bucket(value: float, values: list[float]) -> int:
    """Quartile index 0..3 of value within values (for map styling)."""
    below = sum(1 for v in values if v < value)
    rank = below / len(values) if values else 0.0
    return min(3, int(rank * 4))


def cmd_robustness(args: argparse.Namespace) -> int:
    loaded = _load_inputs(args)
    _print_warnings(loaded.warnings)
    if not loaded.stations:
        raise ValueError("this command needs --chargers")
    lambda_max = args.lambda_max
    if lambda_max is None:
        lambda_max = float(
            loaded.extras.get("lambda_max_mi", cc_range_miles(DEFAULT_EV_MODELS[DEFAULT_EV_NAME]))
        )
    fractions = (
        [float(f) for f in args.fractions.split(",")]
        if args.fractions
        else [round(0.1 * i, 1) for i in range(11)]
    )
    report = compute_robustness(
        loaded.stations,
        lambda_max,
        fractions=fractions,
        trials=args.trials,
        seed=args.seed,
        road_net=loaded.road_net,
        weighted=not args.unweighted,
        targeted_by=args.targeted_by,
    )

    manifest = RunManifest(
        command="robustness",
        seed=args.seed,
        inputs=loaded.inputs,
        config={
            "lambda_max_mi": lambda_max,
            "trials": args.trials,
            "fractions": fractions,
            "weighted": not args.unweighted,
            "targeted_by": args.targeted_by,
        },
    )
    station_ids = [s.id for s in loaded.stations]
    write_csv_report(
        _out_path(args, "centrality.csv"),
        manifest,
        ["station_id", "degree", "betweenness"],
        [[sid, report.degree[sid], report.betweenness[sid]] for sid in station_ids],
    )
    write_csv_report(
        _out_path(args, "percolation_random.csv"),
        manifest,
        ["fraction_removed", "mean_gcc", "std_gcc"],
        [list(row) for row in report.percolation_random],
    )
    write_csv_report(
        _out_path(args, "percolation_targeted.csv"),
        manifest,
        ["fraction_removed", "gcc"],
        [list(row) for row in report.percolation_targeted],
    )
    betweenness_values = [report.betweenness[sid] for sid in station_ids]
    features = [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [s.location.lon, s.location.lat]},
            "properties": {
                "id": s.id,
                "degree": report.degree[s.id],
                "betweenness": report.betweenness[s.id],
                "betweenness_quartile": _quantile_bucket(
                    report.betweenness[s.id], betweenness_values
                ),
            },
        }
        for s in loaded.stations
    ]
    write_geojson_report(_out_path(args, "robustness.geojson"), manifest, features)
    print(
        f"robustness: {report.node_count} stations, {report.edge_count} edges at "
        f"lambda {lambda_max:g} mi; random GCC at f=0.5: "
        f"{dict((f, m) for f, m, _ in report.percolation_random).get(0.5, float('nan')):.3f}"
    )
    return EXIT_OK


def _parse_latlon(text: str, flag: str) -> GeoPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{flag} expects 'lat,lon', got {text!r}")
    try:
        return GeoPoint(lat=float(parts[0]), lon=float(parts[1]))
    except ValueError as exc:
        raise ValueError(f"{flag}: {exc}") from None


def _resolve_ev(args: argparse.Namespace) -> tuple[EVModel, dict[str, str]]:
    catalog = dict(DEFAULT_EV_MODELS)
    inputs: dict[str, str] = {}
    if getattr(args, "ev_models", None):
        for model in load_ev_models(args.ev_models):
            catalog[model.name] = model
        inputs["ev_models"] = args.ev_models
    name = args.ev
    if name not in catalog:
        raise ValueError(f"unknown EV model {name!r}; choices: {', '.join(sorted(catalog))}")
    return catalog[name], inputs


def cmd_plan(args: argparse.Namespace) -> int:
    loaded = _load_inputs(args)
    _print_warnings(loaded.warnings)
    ev, ev_inputs = _resolve_ev(args)
    origin = _parse_latlon(args.origin, "--from")
    destination = _parse_latlon(args.destination, "--to")
    avg_speed = (
        args.avg_speed
        if args.avg_speed is not None
        else float(loaded.extras.get("avg_speed_mph", 60.0))
    )

    query = RouteQuery(
        origin=origin,
        destination=destination,
        ev=ev,
        soc_start=args.soc,
        alpha=args.alpha,
        objective=args.objective,
        cv_overshoot=args.cv_overshoot,
    )
    plan = plan_route(
        query,
        loaded.stations,
        loaded.road_net,
        traffic=loaded.traffic if loaded.traffic else None,
        demand_cfg=loaded.demand_cfg,
        avg_speed_mph=avg_speed,
    )

    manifest = RunManifest(
        command="plan",
        seed=args.seed,
        inputs={**loaded.inputs, **ev_inputs},
        config=_manifest_config(
            loaded.demand_cfg,
            ev=ev.name,
            soc_start=args.soc,
            alpha=args.alpha,
            objective=args.objective,
            cv_overshoot=args.cv_overshoot,
            avg_speed_mph=avg_speed,
            origin=[origin.lat, origin.lon],
            destination=[destination.lat, destination.lon],
        ),
    )
    write_json_report(_out_path(args, "plan.json"), manifest, plan_to_dict(plan))
    write_geojson_report(
        _out_path(args, "plan.geojson"), manifest, plan_to_geojson(plan)["features"]
    )

    sequence = plan.node_sequence()
    print("route:", " -> ".join(sequence) if sequence else "(origin is destination)")
    if plan.stops:
        print(f"{'stop':<14}{'wait_min':>10}{'charge_min':>12}{'arrive_soc':>12}{'depart_soc':>12}")
        for stop in plan.stops:
            arrive = f"{stop.arrive_soc:.4f}" if stop.arrive_soc is not None else "-"
            depart = f"{stop.depart_soc:.4f}" if stop.depart_soc is not None else "-"
            print(
                f"{stop.station_id:<14}{stop.wait_min:>10.4f}{stop.charge_min:>12.4f}"
                f"{arrive:>12}{depart:>12}"
            )
    print(
        f"totals: travel_min={plan.travel_min:.4f} wait_min={plan.wait_min:.4f} "
        f"charge_min={plan.charge_min:.4f} total_min={plan.total_min:.4f}"
    )
    print(
        f"objective_value={plan.objective_value:.6f} alpha={plan.alpha:g} "
        f"objective={plan.objective}"
    )
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    loaded = _load_inputs(args)
    _print_warnings(loaded.warnings)
    ev_catalog = dict(DEFAULT_EV_MODELS)
    if getattr(args, "ev_models", None):
        for model in load_ev_models(args.ev_models):
            ev_catalog[model.name] = model

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as exc:
        probe.close()
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    probe.close()

    from .service.app import ServiceState, create_app

    state = ServiceState.build(
        stations=loaded.stations,
        traffic=loaded.traffic,
        road_net=loaded.road_net,
        demand_cfg=loaded.demand_cfg,
        ev_models=ev_catalog,
        avg_speed_mph=float(loaded.extras.get("avg_speed_mph", 60.0)),
        cors_origins=[args.cors] if args.cors else ["*"],
    )
    app = create_app(state)

    import uvicorn

    print(f"serving on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chargenet",
        description="EV charging network planning and routing toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--chargers", help="chargers.csv (id,lat,lon,ports,power_kw)")
    shared.add_argument("--traffic", help="traffic.csv (id,lat,lon,aadt)")
    shared.add_argument("--nodes", help="nodes.csv (id,lat,lon) or a road .geojson")
    shared.add_argument("--edges", help="edges.csv (from,to,length_miles,speed_mph,oneway)")
    shared.add_argument("--config", help="key=value config file")
    shared.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    shared.add_argument("--out", default=".", help="output directory (default .)")

    p = sub.add_parser("coverage", parents=[shared], help="coverage of demand points")
    p.add_argument("--radius", type=float, help="coverage radius in miles")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("site", parents=[shared], help="propose new charger sites")
    p.add_argument("--radius", type=float, help="coverage radius in miles")
    p.add_argument("-k", type=int, default=5, help="number of proposed sites (default 5)")
    p.set_defaults(func=cmd_site)

    p = sub.add_parser("robustness", parents=[shared], help="centrality and percolation")
    p.add_argument("--lambda-max", type=float, dest="lambda_max",
                   help="max edge distance in miles (default: CC range of lr281)")
    p.add_argument("--trials", type=int, default=30, help="random percolation trials")
    p.add_argument("--fractions", help="comma-separated removal fractions")
    p.add_argument("--unweighted", action="store_true", help="hop-count betweenness")
    p.add_argument("--targeted-by", choices=("betweenness", "degree"),
                   default="betweenness", dest="targeted_by")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("plan", parents=[shared], help="plan a charge-aware route")
    p.add_argument("--from", required=True, dest="origin", metavar="LAT,LON")
    p.add_argument("--to", required=True, dest="destination", metavar="LAT,LON")
    p.add_argument("--ev", default=DEFAULT_EV_NAME, help=f"EV model (default {DEFAULT_EV_NAME})")
    p.add_argument("--soc", type=float, default=0.8, help="starting SOC (default 0.8)")
    p.add_argument("--alpha", type=float, default=1.0, help="wait weight (default 1.0)")
    p.add_argument("--ev-models", dest="ev_models", help="extra EV catalog CSV")
    p.add_argument("--objective", choices=("time", "distance"), default="time")
    p.add_argument("--cv-overshoot", action="store_true", dest="cv_overshoot",
                   help="allow charging past the CV transition to skip stops")
    p.add_argument("--avg-speed", type=float, dest="avg_speed",
                   help="assumed speed when no road network is given (default 60)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ev-models", dest="ev_models", help="extra EV catalog CSV")
    p.add_argument("--cors", help="allowed CORS origin (default *)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except EmptyDemand as exc:
        print(f"empty result: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (
        ParseError,
        DuplicateId,
        DanglingEdge,
        InvalidK,
        InvalidQuery,
        FileNotFoundError,
        IsADirectoryError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
