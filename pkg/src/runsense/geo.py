"""Great-circle geometry helpers used across graph building, snapping and buffers."""

from __future__ import annotations

import math

EARTH_RADIUS_M = 6_371_000.0

LatLon = tuple[float, float]


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance between two WGS84 points in meters."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def polyline_length_m(points: list[LatLon]) -> float:
    return sum(
        haversine_m(points[i][0], points[i][1], points[i + 1][0], points[i + 1][1])
        for i in range(len(points) - 1)
    )


def initial_bearing_rad(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Forward azimuth from point 1 to point 2, radians clockwise from north."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dlam = math.radians(lon2 - lon1)
    y = math.sin(dlam) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlam)
    return math.atan2(y, x) % (2.0 * math.pi)


def destination_point(lat: float, lon: float, bearing_rad: float, distance_m: float) -> LatLon:
    """Point reached by travelling ``distance_m`` along a great circle."""
    delta = distance_m / EARTH_RADIUS_M
    phi1 = math.radians(lat)
    lam1 = math.radians(lon)
    sin_phi2 = math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(bearing_rad)
    phi2 = math.asin(max(-1.0, min(1.0, sin_phi2)))
    y = math.sin(bearing_rad) * math.sin(delta) * math.cos(phi1)
    x = math.cos(delta) - math.sin(phi1) * math.sin(phi2)
    lam2 = lam1 + math.atan2(y, x)
    lon2 = math.degrees(lam2)
    # normalize to [-180, 180]
    lon2 = (lon2 + 540.0) % 360.0 - 180.0
    return math.degrees(phi2), lon2


def point_to_arc(
    lat: float, lon: float, a: LatLon, b: LatLon
) -> tuple[float, float, LatLon]:
    """Distance from a point to the great-circle arc from ``a`` to ``b``.

    Returns ``(distance_m, along_m, snapped)`` where ``along_m`` is the
    distance from ``a`` to the closest point measured along the arc.
    """
    d12 = haversine_m(a[0], a[1], b[0], b[1])
    d_pa = haversine_m(lat, lon, a[0], a[1])
    if d12 <= 1e-9:  # degenerate arc
        return d_pa, 0.0, a
    if d_pa <= 1e-9:
        return 0.0, 0.0, a

    theta12 = initial_bearing_rad(a[0], a[1], b[0], b[1])
    theta13 = initial_bearing_rad(a[0], a[1], lat, lon)
    delta13 = d_pa / EARTH_RADIUS_M

    # Projection falls behind the start point.
    if math.cos(theta13 - theta12) < 0.0:
        return d_pa, 0.0, a

    sin_xt = math.sin(delta13) * math.sin(theta13 - theta12)
    sin_xt = max(-1.0, min(1.0, sin_xt))
    delta_xt = math.asin(sin_xt)
    cos_xt = math.cos(delta_xt)
    if abs(cos_xt) < 1e-12:
        along = 0.0
    else:
        ratio = max(-1.0, min(1.0, math.cos(delta13) / cos_xt))
        along = math.acos(ratio) * EARTH_RADIUS_M

    if along >= d12:
        d_pb = haversine_m(lat, lon, b[0], b[1])
        return d_pb, d12, b
    snapped = destination_point(a[0], a[1], theta12, along)
    return abs(delta_xt) * EARTH_RADIUS_M, along, snapped


def point_to_polyline(
    lat: float, lon: float, points: list[LatLon]
) -> tuple[float, float, LatLon]:
    """Closest approach of a point to a polyline.

    Returns ``(distance_m, offset_m, snapped)`` with ``offset_m`` measured
    from the first vertex along the line.
    """
    if not points:
        raise ValueError("empty polyline")
    if len(points) == 1:
        return haversine_m(lat, lon, points[0][0], points[0][1]), 0.0, points[0]
    best: tuple[float, float, LatLon] | None = None
    cursor = 0.0
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        dist, along, snapped = point_to_arc(lat, lon, a, b)
        if best is None or dist < best[0]:
            best = (dist, cursor + along, snapped)
        cursor += haversine_m(a[0], a[1], b[0], b[1])
    assert best is not None
    return best


def bbox_of(points: list[LatLon]) -> tuple[float, float, float, float]:
    """(min_lat, min_lon, max_lat, max_lon) of a point list."""
    lats = [p[0] for p in points]
    lons = [p[1] for p in points]
    return min(lats), min(lons), max(lats), max(lons)
