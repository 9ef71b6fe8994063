"""Overlay construction, the exact solver, and the full planning pipeline."""

import math
import random

import pytest

from chargenet.charging import DEFAULT_EV_MODELS, EVModel, UnreachableSoc
from chargenet.geo import EARTH_RADIUS_MI, GeoPoint
from chargenet.ingest import ChargerStation
from chargenet.router import (
    DESTINATION_ID,
    ORIGIN_ID,
    Infeasible,
    InvalidQuery,
    OverlayArc,
    OverlayGraph,
    RouteQuery,
    TooLarge,
    brute_force_oracle,
    build_overlay,
    plan_route,
    plan_to_dict,
    plan_to_geojson,
    solve,
)
from overlays import make_random_overlay

LR = DEFAULT_EV_MODELS["lr281"]

# degrees of latitude per mile on the great circle
DEG_PER_MI = 1.0 / (EARTH_RADIUS_MI * math.pi / 180.0)


def station(sid, lat, lon, ports=1, power_kw=120.0):
    return ChargerStation(id=sid, location=GeoPoint(lat, lon), ports=ports, power_kw=power_kw)


def overlay_2stop(w1=0.0, w2=0.0):
    """origin -> (c1 | c2) -> destination with symmetric 100-minute routes."""
    arcs = [
        OverlayArc(ORIGIN_ID, "c1", 50.0, 50.0),
        OverlayArc(ORIGIN_ID, "c2", 50.0, 50.0),
        OverlayArc("c1", DESTINATION_ID, 50.0, 50.0),
        OverlayArc("c2", DESTINATION_ID, 50.0, 50.0),
    ]
    return OverlayGraph(
        charger_ids=("c1", "c2"),
        arcs=arcs,
        wait_min={"c1": w1, "c2": w2},
        start_range_mi=60.0,
        leg_range_mi=60.0,
    )


# ------------------------------------------------------------------ queries


def test_query_validation():
    origin = GeoPoint(30.0, -95.0)
    dest = GeoPoint(31.0, -95.0)
    with pytest.raises(InvalidQuery):
        RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=0.1)
    with pytest.raises(InvalidQuery):
        RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=1.2)
    with pytest.raises(InvalidQuery):
        RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=0.8, alpha=-1.0)
    with pytest.raises(InvalidQuery):
        RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=0.8, objective="money")
    with pytest.raises(InvalidQuery):
        RouteQuery(
            origin=origin,
            destination=dest,
            ev=LR,
            soc_start=0.8,
            wait_profiles={"x": -5.0},
        )


# ------------------------------------------------------------------ overlay


def test_overlay_validates_structure():
    with pytest.raises(ValueError):
        OverlayGraph(
            charger_ids=("c1", "c1"),
            arcs=[],
            wait_min={},
            start_range_mi=50.0,
            leg_range_mi=50.0,
        )
    with pytest.raises(ValueError):
        OverlayGraph(
            charger_ids=("c1",),
            arcs=[],
            wait_min={"c1": -1.0},
            start_range_mi=50.0,
            leg_range_mi=50.0,
        )
    with pytest.raises(ValueError):
        OverlayGraph(
            charger_ids=("c1",),
            arcs=[OverlayArc(ORIGIN_ID, "c1", 80.0, 60.0)],
            wait_min={"c1": 0.0},
            start_range_mi=50.0,
            leg_range_mi=100.0,
        )
    with pytest.raises(ValueError):
        OverlayGraph(
            charger_ids=("c1",),
            arcs=[OverlayArc("c1", "ghost", 10.0, 10.0)],
            wait_min={"c1": 0.0},
            start_range_mi=50.0,
            leg_range_mi=50.0,
        )


def test_build_overlay_range_gating():
    # three stations 50 mi apart on a meridian; a drained pack reaches
    # none of them, a full one reaches the first two
    stations = [
        station("c1", 30.0 + 50.0 * DEG_PER_MI, -95.0),
        station("c2", 30.0 + 100.0 * DEG_PER_MI, -95.0),
        station("c3", 30.0 + 150.0 * DEG_PER_MI, -95.0),
    ]
    origin = GeoPoint(30.0, -95.0)
    dest = GeoPoint(30.0 + 200.0 * DEG_PER_MI, -95.0)

    drained = RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=LR.soc_min)
    ov = build_overlay(drained, stations)
    assert not any(arc.from_id == ORIGIN_ID for arc in ov.arcs)

    full = RouteQuery(origin=origin, destination=dest, ev=LR, soc_start=1.0)
    ov = build_overlay(full, stations)
    from_origin = {arc.to_id for arc in ov.arcs if arc.from_id == ORIGIN_ID}
    # start range (1 - 0.15) * 281 = 238.85 covers c1..c3 but not the
    # destination at 200 mi? it does: direct arc allowed
    assert from_origin == {"c1", "c2", "c3", DESTINATION_ID}
    # between chargers the CC window (182.65) rules: c1->c3 is 100 mi, fine;
    # c1 -> destination is 150 mi, also under the window
    pair_targets = {arc.to_id for arc in ov.arcs if arc.from_id == "c1"}
    assert pair_targets == {"c2", "c3", DESTINATION_ID}


def test_build_overlay_metro_shape(metro):
    q = RouteQuery(
        origin=GeoPoint(32.9, -97.6),
        destination=GeoPoint(32.9, -93.9838),
        ev=LR,
        soc_start=0.8,
        wait_profiles={},
    )
    ov = build_overlay(q, metro["stations"], metro["road"])
    assert ov.node_count() == 10
    assert len(ov.arcs) == 70
    from_origin = sorted(arc.to_id for arc in ov.arcs if arc.from_id == ORIGIN_ID)
    # u-east sits 195 road miles out: beyond the 182.65 mi start range
    assert "u-east" not in from_origin
    assert len(from_origin) == 7


def test_build_overlay_same_endpoints_is_trivial():
    p = GeoPoint(30.0, -95.0)
    q = RouteQuery(origin=p, destination=p, ev=LR, soc_start=0.8)
    ov = build_overlay(q, [])
    plan = solve(ov, alpha=1.0)
    assert plan.total_min == 0.0
    assert plan.stops == [] and plan.legs == []


# -------------------------------------------------------------------- solve


def test_solve_prices_waits_per_alpha():
    ov = overlay_2stop(w1=30.0, w2=0.0)
    free = solve(ov, alpha=0.0)
    assert free.objective_value == 100.0
    # both routes tie at alpha 0; the lexicographically smaller stop wins
    assert [s.station_id for s in free.stops] == ["c1"]
    priced = solve(ov, alpha=1.0)
    assert priced.objective_value == 100.0
    assert [s.station_id for s in priced.stops] == ["c2"]


def test_solve_detours_around_congested_charger():
    # direct stop c1 carries a 50-minute wait; the two-stop detour is 30
    # travel minutes longer but wait-free
    arcs = [
        OverlayArc(ORIGIN_ID, "c1", 50.0, 50.0),
        OverlayArc("c1", DESTINATION_ID, 50.0, 50.0),
        OverlayArc(ORIGIN_ID, "c2", 40.0, 40.0),
        OverlayArc("c2", "c3", 50.0, 50.0),
        OverlayArc("c3", DESTINATION_ID, 40.0, 40.0),
    ]
    ov = OverlayGraph(
        charger_ids=("c1", "c2", "c3"),
        arcs=arcs,
        wait_min={"c1": 50.0, "c2": 0.0, "c3": 0.0},
        start_range_mi=60.0,
        leg_range_mi=60.0,
    )
    priced = solve(ov, alpha=1.0)
    assert [s.station_id for s in priced.stops] == ["c2", "c3"]
    assert priced.objective_value == 130.0
    blind = solve(ov, alpha=0.0)
    assert [s.station_id for s in blind.stops] == ["c1"]
    assert blind.objective_value == 100.0
    assert blind.total_min == 150.0


def test_solve_totals_include_unpriced_wait():
    ov = overlay_2stop(w1=30.0, w2=45.0)
    plan = solve(ov, alpha=0.0)
    assert plan.wait_min == 30.0
    assert plan.total_min == 130.0
    assert plan.objective_value == 100.0


def test_solve_alpha_zero_ignores_waits():
    rng = random.Random(17)
    for _ in range(30):
        ov = make_random_overlay(rng)
        try:
            base = solve(ov, alpha=0.0)
        except Infeasible:
            continue
        zeroed = OverlayGraph(
            charger_ids=ov.charger_ids,
            arcs=list(ov.arcs),
            wait_min={k: 0.0 for k in ov.wait_min},
            start_range_mi=ov.start_range_mi,
            leg_range_mi=ov.leg_range_mi,
        )
        for alpha in (0.5, 2.0):
            assert solve(zeroed, alpha).objective_value == base.objective_value


def test_solve_objective_monotone_in_alpha():
    rng = random.Random(23)
    for _ in range(40):
        ov = make_random_overlay(rng)
        try:
            values = [solve(ov, a).objective_value for a in (0.0, 0.5, 1.0, 2.0)]
        except Infeasible:
            continue
        assert values == sorted(values)


def test_solve_unused_charger_removal_is_neutral():
    ov = overlay_2stop(w1=0.0, w2=50.0)
    plan = solve(ov, alpha=1.0)
    assert [s.station_id for s in plan.stops] == ["c1"]
    trimmed = OverlayGraph(
        charger_ids=("c1",),
        arcs=[a for a in ov.arcs if "c2" not in (a.from_id, a.to_id)],
        wait_min={"c1": 0.0},
        start_range_mi=ov.start_range_mi,
        leg_range_mi=ov.leg_range_mi,
    )
    again = solve(trimmed, alpha=1.0)
    assert again.objective_value == plan.objective_value
    assert again.node_sequence() == plan.node_sequence()


def test_solve_infeasible_when_disconnected():
    ov = OverlayGraph(
        charger_ids=("c1",),
        arcs=[OverlayArc(ORIGIN_ID, "c1", 10.0, 10.0)],
        wait_min={"c1": 0.0},
        start_range_mi=50.0,
        leg_range_mi=50.0,
    )
    with pytest.raises(Infeasible):
        solve(ov, alpha=1.0)


def test_solve_distance_objective():
    arcs = [
        OverlayArc(ORIGIN_ID, "c1", 10.0, 90.0),
        OverlayArc("c1", DESTINATION_ID, 10.0, 90.0),
        OverlayArc(ORIGIN_ID, DESTINATION_ID, 30.0, 30.0),
    ]
    ov = OverlayGraph(
        charger_ids=("c1",),
        arcs=arcs,
        wait_min={"c1": 0.0},
        start_range_mi=40.0,
        leg_range_mi=40.0,
    )
    by_time = solve(ov, alpha=1.0, objective="time")
    assert by_time.node_sequence() == [ORIGIN_ID, DESTINATION_ID]
    by_dist = solve(ov, alpha=1.0, objective="distance")
    assert by_dist.node_sequence() == [ORIGIN_ID, "c1", DESTINATION_ID]
    assert by_dist.objective_value == 20.0


def test_solve_matches_oracle_sample():
    rng = random.Random(99)
    checked = 0
    for _ in range(25):
        ov = make_random_overlay(rng)
        for alpha in (0.0, 1.0):
            try:
                got = solve(ov, alpha)
            except Infeasible:
                with pytest.raises(Infeasible):
                    brute_force_oracle(ov, alpha)
                continue
            cost, path = brute_force_oracle(ov, alpha)
            assert got.objective_value == cost
            assert tuple(got.node_sequence()) == path
            checked += 1
    assert checked >= 20


# ------------------------------------------------------------------- oracle


def test_oracle_rejects_large_overlays():
    ids = tuple(f"c{i:02d}" for i in range(13))
    ov = OverlayGraph(
        charger_ids=ids,
        arcs=[],
        wait_min={c: 0.0 for c in ids},
        start_range_mi=10.0,
        leg_range_mi=10.0,
    )
    with pytest.raises(TooLarge):
        brute_force_oracle(ov, 1.0)


def test_oracle_direct_arc():
    ov = OverlayGraph(
        charger_ids=(),
        arcs=[OverlayArc(ORIGIN_ID, DESTINATION_ID, 12.0, 14.0)],
        wait_min={},
        start_range_mi=20.0,
        leg_range_mi=20.0,
    )
    assert brute_force_oracle(ov, 1.0) == (14.0, (ORIGIN_ID, DESTINATION_ID))


# --------------------------------------------------------------- plan_route


def diamond_query(alpha, soc=0.8):
    return RouteQuery(
        origin=GeoPoint(32.9, -97.5),
        destination=GeoPoint(32.9, -93.9),
        ev=LR,
        soc_start=soc,
        alpha=alpha,
    )


def test_plan_route_diamond_congested_vs_detour(diamond):
    kwargs = dict(
        stations=diamond["stations"],
        road_net=diamond["road"],
        traffic=diamond["traffic"],
        demand_cfg=diamond["cfg"],
    )
    greedy = plan_route(diamond_query(0.0), **kwargs)
    assert [s.station_id for s in greedy.stops] == ["c1"]
    assert greedy.objective_value == 190.0
    assert greedy.travel_min == 190.0
    assert greedy.wait_min == pytest.approx(50.0, abs=1e-9)
    # 95 mi of the 281 mi range at 120 kW: (95/281) * 60 kWh / 120 kW * 60
    assert greedy.charge_min == pytest.approx(10.142348754448399, abs=1e-9)
    assert greedy.total_min == pytest.approx(250.14234875444843, abs=1e-9)

    patient = plan_route(diamond_query(1.0), **kwargs)
    assert [s.station_id for s in patient.stops] == ["c2"]
    assert patient.objective_value == 210.0
    assert patient.wait_min == 0.0
    assert patient.total_min == pytest.approx(221.2099644128114, abs=1e-9)


def test_plan_route_metro_reference(metro):
    q = RouteQuery(
        origin=GeoPoint(32.9, -97.6),
        destination=GeoPoint(32.9, -93.9838),
        ev=LR,
        soc_start=0.8,
        alpha=1.0,
    )
    plan = plan_route(
        q,
        metro["stations"],
        road_net=metro["road"],
        traffic=metro["traffic"],
        demand_cfg=metro["cfg"],
    )
    assert [s.station_id for s in plan.stops] == ["b-main"]
    assert plan.objective_value == 225.0
    assert plan.travel_min == 210.0
    assert plan.wait_min == 15.0
    assert plan.total_min == pytest.approx(237.81138790035587, abs=1e-9)
    stop = plan.stops[0]
    assert stop.arrive_soc == pytest.approx(0.8 - 120.0 / 281.0, abs=1e-12)
    assert stop.depart_soc == pytest.approx(0.8, abs=1e-12)
    # legs follow the road, not the crow: 13 polyline points to b-main
    assert plan.leg_points is not None
    assert len(plan.leg_points[0]) == 13
    assert len(plan.leg_points[1]) == 10


def test_plan_route_query_waits_override_traffic(diamond):
    # zero out c1's wait by hand: the congested route wins at alpha 1
    q = RouteQuery(
        origin=GeoPoint(32.9, -97.5),
        destination=GeoPoint(32.9, -93.9),
        ev=LR,
        soc_start=0.8,
        alpha=1.0,
        wait_profiles={"c1": 0.0, "c2": 0.0, "c3-spare": 0.0},
    )
    plan = plan_route(
        q,
        diamond["stations"],
        road_net=diamond["road"],
        traffic=diamond["traffic"],
        demand_cfg=diamond["cfg"],
    )
    assert [s.station_id for s in plan.stops] == ["c1"]
    assert plan.wait_min == 0.0


def test_plan_route_no_traffic_means_no_waits(diamond):
    plan = plan_route(
        diamond_query(1.0), diamond["stations"], road_net=diamond["road"]
    )
    assert plan.wait_min == 0.0
    assert [s.station_id for s in plan.stops] == ["c1"]


def test_plan_route_same_point_trip():
    p = GeoPoint(30.0, -95.0)
    q = RouteQuery(origin=p, destination=p, ev=LR, soc_start=0.8)
    plan = plan_route(q, [])
    assert plan.total_min == 0.0
    assert plan.node_sequence() == []


def test_plan_route_infeasible_names_the_gap(diamond):
    # a nearly drained pack cannot make the first hop
    with pytest.raises(Infeasible) as exc:
        plan_route(
            diamond_query(1.0, soc=0.2),
            diamond["stations"],
            road_net=diamond["road"],
        )
    message = str(exc.value)
    assert "no feasible route" in message
    assert "mi leg" in message


def cv_chain(power_kw=120.0):
    ev = EVModel(name="t100", battery_kwh=50.0, rated_range_mi=100.0)
    stations = [
        station("c1", 30.0 + 50.0 * DEG_PER_MI, -95.0, power_kw=power_kw),
        station("c2", 30.0 + 90.0 * DEG_PER_MI, -95.0, power_kw=power_kw),
    ]
    origin = GeoPoint(30.0, -95.0)
    dest = GeoPoint(30.0 + 130.0 * DEG_PER_MI, -95.0)
    return ev, stations, origin, dest


def test_plan_route_cv_overshoot_skips_a_stop():
    ev, stations, origin, dest = cv_chain()
    base = RouteQuery(origin=origin, destination=dest, ev=ev, soc_start=1.0)
    normal = plan_route(base, stations)
    # the 80 mi final leg exceeds the 65 mi CC window: two stops
    assert [s.station_id for s in normal.stops] == ["c1", "c2"]

    overshoot = RouteQuery(
        origin=origin, destination=dest, ev=ev, soc_start=1.0, cv_overshoot=True
    )
    plan = plan_route(overshoot, stations)
    assert [s.station_id for s in plan.stops] == ["c1"]
    stop = plan.stops[0]
    # charge to 0.15 + 80/100 instead of stopping at the CV knee
    assert stop.depart_soc == pytest.approx(0.95, abs=1e-9)
    assert stop.charge_min > 0.0


def test_plan_route_cv_overshoot_unreachable_target():
    # 20 kW taper tops out at 20 * 20 / 60 = 6.67 kWh past the knee,
    # but the overshoot target needs 7.5 kWh
    ev, stations, origin, dest = cv_chain(power_kw=20.0)
    q = RouteQuery(
        origin=origin, destination=dest, ev=ev, soc_start=1.0, cv_overshoot=True
    )
    with pytest.raises(UnreachableSoc):
        plan_route(q, stations)


# -------------------------------------------------------------- serializers


def test_plan_to_dict_round_trip(diamond):
    plan = plan_route(
        diamond_query(1.0),
        diamond["stations"],
        road_net=diamond["road"],
        traffic=diamond["traffic"],
        demand_cfg=diamond["cfg"],
    )
    d = plan_to_dict(plan)
    assert d["totals"]["total_min"] == plan.total_min
    assert d["totals"]["wait_min"] == plan.wait_min
    assert d["objective"] == "time"
    assert d["alpha"] == 1.0
    assert [s["station_id"] for s in d["stops"]] == ["c2"]
    assert len(d["legs"]) == 2
    assert d["legs"][0]["from"] == ORIGIN_ID


def test_plan_to_geojson_features(diamond):
    plan = plan_route(
        diamond_query(1.0),
        diamond["stations"],
        road_net=diamond["road"],
        traffic=diamond["traffic"],
        demand_cfg=diamond["cfg"],
    )
    gj = plan_to_geojson(plan)
    assert gj["type"] == "FeatureCollection"
    kinds = [f["geometry"]["type"] for f in gj["features"]]
    assert kinds.count("LineString") == 2
    assert kinds.count("Point") == 1
