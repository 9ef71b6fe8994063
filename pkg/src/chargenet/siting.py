"""Coverage gaps and k-means placement of new charging sites.

Coverage marks each demand point as served when any station lies within the
radius. The uncovered remainder is clustered (k-means in locally projected
miles, so east-west distances are not distorted) and clusters are ranked by
their total daily traffic, most demand first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geo import GeoPoint, haversine_miles, project_local_miles, unproject_local_miles
from .ingest import ChargerStation, TrafficPoint


class InvalidK(ValueError):
    """Cluster count outside [1, number of points]."""


class EmptyDemand(ValueError):
    """No uncovered demand points to cluster."""


@dataclass
class CoverageResult:
    """Partition of demand points into served and unserved."""

    covered: list[tuple[str, list[str]]]
    uncovered: list[str]


@dataclass
class SitingProposal:
    """Proposed station sites, highest-demand cluster first."""

    centroids: list[GeoPoint]
    assignment: dict[str, int]
    demand_per_cluster: list[float]
    k: int
    seed: int


def coverage(
    stations: Iterable[ChargerStation],
    points: Iterable[TrafficPoint],
    radius_mi: float,
) -> CoverageResult:
    """Classify each point by whether a station sits within radius_mi.

    The boundary is inclusive: distance exactly equal to the radius counts
    as covered. Covering station ids are listed sorted.
    """
    if not radius_mi > 0:
        raise ValueError(f"radius_mi must be positive, got {radius_mi!r}")
    stations = list(stations)
    covered: list[tuple[str, list[str]]] = []
    uncovered: list[str] = []
    for point in points:
        within = sorted(
            s.id for s in stations if haversine_miles(point.location, s.location) <= radius_mi
        )
        if within:
            covered.append((point.id, within))
        else:
            uncovered.append(point.id)
    return CoverageResult(covered=covered, uncovered=uncovered)


def _kmeans_pp_init(pts: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread initial centroids by squared distance."""
    n = len(pts)
    chosen = [int(rng.integers(n))]
    d2 = ((pts - pts[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = float(d2.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        d2 = np.minimum(d2, ((pts - pts[idx]) ** 2).sum(axis=1))
    return pts[chosen].copy()


def kmeans(
    points_xy: Sequence[Sequence[float]] | np.ndarray,
    k: int,
    seed: int,
    max_iter: int = 100,
    tol: float = 1e-6,
    inertia_history: list[float] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm with seeded k-means++ initialization.

    Returns (centroids (k,2), assignment (n,)). Converged when the largest
    centroid movement drops below tol. A cluster that loses all members is
    re-seeded to the point currently farthest from its assigned centroid.
    Pass a list as ``inertia_history`` to record the within-cluster sum of
    squares after each iteration.
    """
    pts = np.asarray(points_xy, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points_xy must be (n, 2), got shape {pts.shape}")
    n = len(pts)
    if not (isinstance(k, int) and 1 <= k <= n):
        raise InvalidK(f"k must be an integer in [1, {n}], got {k!r}")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(pts, k, rng)
    for _ in range(max_iter):
        d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        for j in range(k):
            if not (assign == j).any():
                own = d2[np.arange(n), assign]
                far = int(own.argmax())
                assign[far] = j
                d2[far, :] = np.inf
                d2[far, j] = 0.0
        new_centroids = np.vstack([pts[assign == j].mean(axis=0) for j in range(k)])
        if inertia_history is not None:
            inertia_history.append(float(((pts - new_centroids[assign]) ** 2).sum()))
        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        if shift < tol:
            break
    final_d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return centroids, final_d2.argmin(axis=1)


def propose_sites(
    uncovered_ids: Sequence[str],
    traffic: Iterable[TrafficPoint],
    k: int = 5,
    seed: int = 0,
) -> SitingProposal:
    """Cluster uncovered demand points and rank clusters by total aadt.

    Cluster 0 of the result is the highest-demand cluster. Raises
    :class:`EmptyDemand` when there is nothing uncovered and
    :class:`InvalidK` when k exceeds the number of uncovered points.
    """
    by_id = {t.id: t for t in traffic}
    missing = [pid for pid in uncovered_ids if pid not in by_id]
    if missing:
        raise ValueError(f"uncovered ids not in traffic set: {missing[:5]}")
    points = [by_id[pid] for pid in uncovered_ids]
    if not points:
        raise EmptyDemand("every demand point is already covered")
    if not (isinstance(k, int) and 1 <= k <= len(points)):
        raise InvalidK(f"k must be an integer in [1, {len(points)}], got {k!r}")

    ref = GeoPoint(
        lat=math.fsum(p.location.lat for p in points) / len(points),
        lon=math.fsum(p.location.lon for p in points) / len(points),
    )
    xy = np.array([project_local_miles(p.location, ref) for p in points])
    centroids_xy, assign = kmeans(xy, k, seed)

    demand = [0.0] * k
    for point, cluster in zip(points, assign):
        demand[int(cluster)] += point.aadt
    # Highest-demand cluster becomes index 0; ties keep k-means order.
    order = sorted(range(k), key=lambda j: (-demand[j], j))
    rank_of = {old: new for new, old in enumerate(order)}

    return SitingProposal(
        centroids=[
            unproject_local_miles(float(centroids_xy[j][0]), float(centroids_xy[j][1]), ref)
            for j in order
        ],
        assignment={p.id: rank_of[int(c)] for p, c in zip(points, assign)},
        demand_per_cluster=[demand[j] for j in order],
        k=k,
        seed=seed,
    )


def propose_from_coverage(
    stations: Iterable[ChargerStation],
    traffic: Sequence[TrafficPoint],
    radius_mi: float,
    k: int = 5,
    seed: int = 0,
) -> tuple[CoverageResult, SitingProposal]:
    """Coverage pass plus a proposal for the uncovered remainder."""
    result = coverage(stations, traffic, radius_mi)
    proposal = propose_sites(result.uncovered, traffic, k=k, seed=seed)
    return result, proposal
