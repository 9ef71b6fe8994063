"""Distance and local-projection checks."""

import math

import pytest

from chargenet.geo import (
    EARTH_RADIUS_MI,
    MILES_PER_DEGREE,
    GeoPoint,
    OutOfRegion,
    haversine_miles,
    project_local_miles,
    unproject_local_miles,
)

DALLAS = GeoPoint(32.7767, -96.7970)
FORT_WORTH = GeoPoint(32.7555, -97.3308)


def test_haversine_zero_distance():
    p = GeoPoint(41.0, -87.5)
    assert haversine_miles(p, p) == 0.0


def test_haversine_two_downtowns():
    # Great-circle distance between the two downtown reference points,
    # evaluated independently with the standard formula and frozen here.
    d = haversine_miles(DALLAS, FORT_WORTH)
    assert d == pytest.approx(31.048491468725363, abs=1e-9)


def test_haversine_symmetry():
    assert haversine_miles(DALLAS, FORT_WORTH) == haversine_miles(FORT_WORTH, DALLAS)


def test_haversine_half_circumference():
    # antipodal along the equator: pi * R
    d = haversine_miles(GeoPoint(0.0, 0.0), GeoPoint(0.0, 180.0))
    assert d == pytest.approx(math.pi * EARTH_RADIUS_MI, abs=1e-6)


def test_haversine_one_degree_latitude():
    # one degree of latitude on the sphere: R * pi / 180 = 69.0933...
    d = haversine_miles(GeoPoint(0.0, 0.0), GeoPoint(1.0, 0.0))
    assert d == pytest.approx(EARTH_RADIUS_MI * math.pi / 180.0, abs=1e-9)
    # the flat-projection constant is the survey value, ~0.1% larger
    assert abs(MILES_PER_DEGREE - d) / d < 0.002


def test_geopoint_validation():
    with pytest.raises(ValueError):
        GeoPoint(91.0, 0.0)
    with pytest.raises(ValueError):
        GeoPoint(-91.0, 0.0)
    with pytest.raises(ValueError):
        GeoPoint(0.0, 181.0)
    with pytest.raises(ValueError):
        GeoPoint(0.0, -181.0)


def test_project_one_degree_north():
    ref = GeoPoint(30.0, -95.0)
    x, y = project_local_miles(GeoPoint(31.0, -95.0), ref)
    assert x == 0.0
    assert y == pytest.approx(69.172, abs=1e-12)


def test_project_one_degree_east_at_60_north():
    # longitude shrinks with cos(lat): 69.172 * cos(60 deg) = 34.586
    ref = GeoPoint(60.0, 10.0)
    x, y = project_local_miles(GeoPoint(60.0, 11.0), ref)
    assert x == pytest.approx(34.586, abs=1e-9)
    assert y == 0.0


def test_project_rejects_wide_latitude_span():
    ref = GeoPoint(30.0, -95.0)
    with pytest.raises(OutOfRegion):
        project_local_miles(GeoPoint(40.0, -95.0), ref)
    # just inside the band is fine
    project_local_miles(GeoPoint(39.999, -95.0), ref)


def test_unproject_round_trip():
    ref = GeoPoint(33.0, -97.0)
    p = GeoPoint(33.4, -96.2)
    x, y = project_local_miles(p, ref)
    back = unproject_local_miles(x, y, ref)
    assert back.lat == pytest.approx(p.lat, abs=1e-9)
    assert back.lon == pytest.approx(p.lon, abs=1e-9)


def test_projection_tracks_haversine_nearby():
    # flat-earth distances stay within 1% of great-circle for short hops
    import random

    rng = random.Random(7)
    for _ in range(200):
        lat = rng.uniform(-55.0, 55.0)
        lon = rng.uniform(-179.0, 179.0)
        ref = GeoPoint(lat, lon)
        p = GeoPoint(lat + rng.uniform(-0.8, 0.8), lon + rng.uniform(-0.8, 0.8))
        x, y = project_local_miles(p, ref)
        flat = math.hypot(x, y)
        true = haversine_miles(ref, p)
        if true > 1.0:
            assert abs(flat - true) / true < 0.01
