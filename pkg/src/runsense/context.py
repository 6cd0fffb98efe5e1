"""Street-context component values: ground, obstacles, traffic tier, crime safety."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import ContractViolationError
from .geo import point_to_polyline
from .graph import Segment, Surface, WayClass

#: Crime categories counted by default (lowercase, matched against the
#: normalized "Crime type" column). Extend via configuration.
DEFAULT_CRIME_CATEGORIES = frozenset({"violent crime", "violence and sexual offences", "robbery"})

CRIME_BUFFER_M = 200.0

GROUND_SURFACES = (Surface.GRASS, Surface.PAVEMENT, Surface.SAND, Surface.PARK_PATH)

_CELL_DEG = 0.005
_METERS_PER_DEG = 111_320.0


@dataclass(frozen=True)
class CrimeRecord:
    lat: float
    lon: float
    category: str
    month: str = ""


@dataclass(frozen=True)
class CrimeIndex:
    """Spatially bucketed person-crime points, filtered at ingestion."""

    points: tuple[tuple[float, float], ...]
    _grid: dict[tuple[int, int], tuple[int, ...]]
    warning_count: int

    def __len__(self) -> int:
        return len(self.points)

    def candidates(self, min_lat: float, min_lon: float, max_lat: float, max_lon: float) -> list[int]:
        lo = (int(math.floor(min_lat / _CELL_DEG)), int(math.floor(min_lon / _CELL_DEG)))
        hi = (int(math.floor(max_lat / _CELL_DEG)), int(math.floor(max_lon / _CELL_DEG)))
        out: list[int] = []
        for ci in range(lo[0], hi[0] + 1):
            for cj in range(lo[1], hi[1] + 1):
                out.extend(self._grid.get((ci, cj), ()))
        return out


def build_crime_index(points: Iterable[tuple[float, float]], warning_count: int = 0) -> CrimeIndex:
    """Spatially bucket already-filtered crime points."""
    pts = tuple(points)
    grid: dict[tuple[int, int], list[int]] = {}
    for i, (lat, lon) in enumerate(pts):
        cell = (int(math.floor(lat / _CELL_DEG)), int(math.floor(lon / _CELL_DEG)))
        grid.setdefault(cell, []).append(i)
    return CrimeIndex(
        points=pts,
        _grid={cell: tuple(ids) for cell, ids in grid.items()},
        warning_count=warning_count,
    )


def ingest_crimes(
    records: Iterable[CrimeRecord],
    filter_categories: Iterable[str] | None = None,
) -> CrimeIndex:
    """Index crime points whose category is in the filter set.

    Rows with invalid coordinates are skipped and counted as warnings.
    """
    categories = frozenset(
        c.strip().lower() for c in (filter_categories if filter_categories is not None else DEFAULT_CRIME_CATEGORIES)
    )
    points: list[tuple[float, float]] = []
    warnings = 0
    for rec in records:
        if not (-90 <= rec.lat <= 90 and -180 <= rec.lon <= 180):
            warnings += 1
            continue
        if rec.category.strip().lower() not in categories:
            continue
        points.append((rec.lat, rec.lon))
    return build_crime_index(points, warnings)


def read_crimes_csv(path: str | Path) -> list[CrimeRecord]:
    """Read the UK police street-crime export shape (Month, Longitude, Latitude, Crime type)."""
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                lat = float(row["Latitude"])
                lon = float(row["Longitude"])
            except (KeyError, TypeError, ValueError):
                # malformed row; surfaces as a warning count at ingestion
                records.append(CrimeRecord(lat=999.0, lon=999.0, category=row.get("Crime type", "")))
                continue
            records.append(
                CrimeRecord(lat=lat, lon=lon, category=row.get("Crime type", ""), month=row.get("Month", ""))
            )
    return records


def ground_indicator(segment: Segment, surface_type: Surface) -> int:
    """1 iff the segment's surface equals ``surface_type``; unknown surfaces score 0 everywhere."""
    if segment.surface == Surface.UNKNOWN:
        return 0
    return 1 if segment.surface == surface_type else 0


def obstacle_score(segment: Segment) -> float:
    """Inverse signal count, shifted so zero signals score a full 1.0."""
    return 1.0 / (1.0 + segment.signal_count)


def traffic_score(
    segment: Segment,
    low_traffic_value: float = 1.0,
    high_traffic_value: float = 0.5,
) -> float:
    """Traffic-tier score; extreme-traffic segments must be filtered out upstream."""
    if segment.way_class == WayClass.EXTREME_TRAFFIC:
        raise ContractViolationError(f"segment {segment.id} has extreme traffic; exclude before scoring")
    if segment.way_class == WayClass.LOW_TRAFFIC:
        return low_traffic_value
    return high_traffic_value


def crime_count(segment: Segment, crime_index: CrimeIndex, buffer_m: float = CRIME_BUFFER_M) -> int:
    """Crimes within ``buffer_m`` of the segment polyline (great-circle distance)."""
    polyline = list(segment.polyline)
    lats = [p[0] for p in polyline]
    lons = [p[1] for p in polyline]
    dlat = buffer_m / _METERS_PER_DEG
    dlon = buffer_m / (_METERS_PER_DEG * max(0.01, math.cos(math.radians(sum(lats) / len(lats)))))
    count = 0
    for idx in set(crime_index.candidates(min(lats) - dlat, min(lons) - dlon, max(lats) + dlat, max(lons) + dlon)):
        lat, lon = crime_index.points[idx]
        dist, _, _ = point_to_polyline(lat, lon, polyline)
        if dist <= buffer_m:
            count += 1
    return count


def safety_score(segment: Segment, crime_index: CrimeIndex, buffer_m: float = CRIME_BUFFER_M) -> float:
    """Inverse count of person crimes in the segment buffer, shifted to stay in (0, 1]."""
    return 1.0 / (1.0 + crime_count(segment, crime_index, buffer_m))
