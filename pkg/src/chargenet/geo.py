"""Geographic primitives: points, great-circle distance, local planar projection.

All distances are in statute miles. Projection is a simple equirectangular
approximation intended for metro-scale work, not continental spans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Mean Earth radius in statute miles.
EARTH_RADIUS_MI = 3958.8

# Miles per degree of latitude (and of longitude at the equator).
MILES_PER_DEGREE = 69.172

# Beyond this latitude separation the flat-earth error is no longer small.
MAX_PROJECTION_SPAN_DEG = 10.0


class OutOfRegion(ValueError):
    """Point is too far from the projection reference to project safely."""


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude must be in [-90, 90], got {self.lat!r}")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise ValueError(f"longitude must be in [-180, 180], got {self.lon!r}")


def haversine_miles(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points in miles."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_MI * math.asin(math.sqrt(h))


def project_local_miles(p: GeoPoint, ref: GeoPoint) -> tuple[float, float]:
    """Project ``p`` onto a local tangent plane centered at ``ref``.

    Returns ``(x, y)`` in miles: x east, y north. Uses an equirectangular
    approximation with the longitude scale taken at the reference latitude,
    which keeps regional distances within about a percent of great-circle
    values. Raises :class:`OutOfRegion` when the latitude separation is ten
    degrees or more, where that guarantee no longer holds.
    """
    if abs(p.lat - ref.lat) >= MAX_PROJECTION_SPAN_DEG:
        raise OutOfRegion(
            f"point at lat {p.lat} is too far from reference lat {ref.lat} to project"
        )
    y = (p.lat - ref.lat) * MILES_PER_DEGREE
    x = (p.lon - ref.lon) * MILES_PER_DEGREE * math.cos(math.radians(ref.lat))
    return (x, y)


def unproject_local_miles(x: float, y: float, ref: GeoPoint) -> GeoPoint:
    """Inverse of :func:`project_local_miles` about the same reference."""
    lat = ref.lat + y / MILES_PER_DEGREE
    lon = ref.lon + x / (MILES_PER_DEGREE * math.cos(math.radians(ref.lat)))
    return GeoPoint(lat=lat, lon=lon)
