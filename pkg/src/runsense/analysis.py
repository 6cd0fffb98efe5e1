"""Route-type characterization: buffered tag frequencies and importance ratios.

For a batch of query points, one scenic and one urban loop are generated per
point. Geotag records falling inside a narrow buffer around each route yield
per-route relative tag frequencies; the scenic-to-urban ratio of their class
means is the tag's importance.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import BatchError, ExcludedTagError, NoRouteError, NoSnapError
from .geo import LatLon, point_to_polyline
from .routing import Route, RouteRequest, round_trip
from .sensory import GeoTagRecord
from .weighting import CostMode, ScoredNetwork

ANALYSIS_BUFFER_M = 25.0

#: Minimum total occurrences (strictly exceeded) for a tag to enter the
#: report. Desk-scale default; city-scale corpora used 1500.
DEFAULT_MIN_COUNT = 20

#: One pseudo-occurrence added to each class's relative-frequency sum before
#: the ratio, so class-exclusive tags stay finite.
DEFAULT_SMOOTHING = 1.0


@dataclass(frozen=True)
class QueryPoint:
    lat: float
    lon: float
    label: str = ""


@dataclass(frozen=True)
class RoutePair:
    query_point: QueryPoint
    scenic_route: Route
    urban_route: Route


@dataclass(frozen=True)
class BatchResult:
    pairs: tuple[RoutePair, ...]
    skipped: tuple[tuple[QueryPoint, str], ...]

    @property
    def skip_count(self) -> int:
        return len(self.skipped)


class TagFrequencies(NamedTuple):
    frequencies: dict[str, float]
    empty: bool


@dataclass(frozen=True)
class TagImportance:
    tag: str
    total_count: int
    scenic_mean_freq: float
    urban_mean_freq: float
    importance: float


@dataclass(frozen=True)
class ImportanceReport:
    entries: tuple[TagImportance, ...]
    min_count: int
    smoothing: float

    @property
    def empty(self) -> bool:
        return not self.entries

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["tag", "count", "scenic_mean_freq", "urban_mean_freq", "importance"])
        for e in self.entries:
            writer.writerow(
                [e.tag, e.total_count, f"{e.scenic_mean_freq:.9g}", f"{e.urban_mean_freq:.9g}", f"{e.importance:.9g}"]
            )
        return buf.getvalue()

    def to_plot_json(self) -> str:
        return json.dumps(
            [{"tag": e.tag, "importance": e.importance, "count": e.total_count} for e in self.entries],
            indent=2,
        )


class RouteBuffer:
    """Membership predicate: points within ``width_m`` of the route polyline."""

    def __init__(self, route: Route, width_m: float = ANALYSIS_BUFFER_M):
        if route.is_empty:
            raise ValueError("cannot buffer an empty route")
        self.width_m = width_m
        self._polyline: list[LatLon] = list(route.geometry)

    def contains(self, lat: float, lon: float) -> bool:
        dist, _, _ = point_to_polyline(lat, lon, self._polyline)
        return dist <= self.width_m


def route_buffer(route: Route, width_m: float = ANALYSIS_BUFFER_M) -> RouteBuffer:
    return RouteBuffer(route, width_m)


def coverage_batch(
    query_points: Sequence[QueryPoint],
    scored: ScoredNetwork,
    target_length_m: float,
    mode: CostMode | None = None,
    profiles: tuple[str, str] = ("scenic", "urban"),
    k_headings: int = 8,
    length_tolerance: float = 0.20,
    seed: int = 0,
    snap_radius_m: float = 500.0,
    **route_kwargs,
) -> BatchResult:
    """One (scenic, urban) round-trip pair per query point; failures are skipped."""
    if not query_points:
        raise BatchError("no query points")
    mode = mode if mode is not None else CostMode.detour_bounded()
    pairs: list[RoutePair] = []
    skipped: list[tuple[QueryPoint, str]] = []
    for point in query_points:
        routes = []
        failure = None
        for profile in profiles:
            request = RouteRequest(
                start_lat=point.lat,
                start_lon=point.lon,
                target_length_m=target_length_m,
                profile=profile,
                k_headings=k_headings,
                length_tolerance=length_tolerance,
                seed=seed,
            )
            try:
                routes.append(round_trip(scored, mode, request, snap_radius_m=snap_radius_m, **route_kwargs))
            except (NoRouteError, NoSnapError) as exc:
                failure = f"{profile}: {exc}"
                break
        if failure is None:
            pairs.append(RoutePair(query_point=point, scenic_route=routes[0], urban_route=routes[1]))
        else:
            skipped.append((point, failure))
    if not pairs:
        raise BatchError(f"no query point produced a route pair ({len(skipped)} skipped)")
    return BatchResult(pairs=tuple(pairs), skipped=tuple(skipped))


def tag_frequencies(
    route: Route,
    records: Iterable[GeoTagRecord],
    width_m: float = ANALYSIS_BUFFER_M,
) -> TagFrequencies:
    """Relative frequency of each tag among records inside the route buffer."""
    buffer = route_buffer(route, width_m)
    counts: dict[str, int] = {}
    total = 0
    for rec in records:
        if not buffer.contains(rec.lat, rec.lon):
            continue
        for tag in rec.tags:
            counts[tag] = counts.get(tag, 0) + 1
            total += 1
    if total == 0:
        return TagFrequencies(frequencies={}, empty=True)
    return TagFrequencies(frequencies={t: c / total for t, c in counts.items()}, empty=False)


def _pair_frequency_table(
    pairs: Sequence[RoutePair],
    records: Sequence[GeoTagRecord],
    width_m: float,
) -> tuple[list[dict[str, float]], list[dict[str, float]], dict[str, int]]:
    scenic_freqs: list[dict[str, float]] = []
    urban_freqs: list[dict[str, float]] = []
    totals: dict[str, int] = {}
    for pair in pairs:
        for route, bucket in ((pair.scenic_route, scenic_freqs), (pair.urban_route, urban_freqs)):
            buffer = route_buffer(route, width_m)
            counts: dict[str, int] = {}
            n = 0
            for rec in records:
                if not buffer.contains(rec.lat, rec.lon):
                    continue
                for tag in rec.tags:
                    counts[tag] = counts.get(tag, 0) + 1
                    n += 1
            bucket.append({t: c / n for t, c in counts.items()} if n else {})
            for t, c in counts.items():
                totals[t] = totals.get(t, 0) + c
    return scenic_freqs, urban_freqs, totals


def _importance_ratio(
    scenic_freqs: Sequence[dict[str, float]],
    urban_freqs: Sequence[dict[str, float]],
    tag: str,
    smoothing: float,
) -> float:
    scenic_sum = sum(f.get(tag, 0.0) for f in scenic_freqs)
    urban_sum = sum(f.get(tag, 0.0) for f in urban_freqs)
    # Mean of per-route relative frequencies per class; the 1/N factors cancel
    # in the ratio, and the smoothing term keeps class-exclusive tags finite.
    return (scenic_sum + smoothing) / (urban_sum + smoothing)


def importance(
    pairs: Sequence[RoutePair],
    records: Sequence[GeoTagRecord],
    tag: str,
    min_count: int = DEFAULT_MIN_COUNT,
    smoothing: float = DEFAULT_SMOOTHING,
    width_m: float = ANALYSIS_BUFFER_M,
) -> float:
    """Scenic-to-urban ratio of mean relative frequency for one tag."""
    if not pairs:
        raise BatchError("importance needs at least one route pair")
    scenic_freqs, urban_freqs, totals = _pair_frequency_table(pairs, records, width_m)
    if totals.get(tag, 0) <= min_count:
        raise ExcludedTagError(
            f"tag {tag!r} occurred {totals.get(tag, 0)} times; needs more than {min_count}"
        )
    return _importance_ratio(scenic_freqs, urban_freqs, tag, smoothing)


def importance_report(
    pairs: Sequence[RoutePair],
    records: Sequence[GeoTagRecord],
    min_count: int = DEFAULT_MIN_COUNT,
    smoothing: float = DEFAULT_SMOOTHING,
    width_m: float = ANALYSIS_BUFFER_M,
) -> ImportanceReport:
    """Importance ratios for every qualifying tag, sorted most scenic first."""
    scenic_freqs, urban_freqs, totals = _pair_frequency_table(pairs, records, width_m)
    entries = []
    n_pairs = len(pairs)
    for tag, total in totals.items():
        if total <= min_count:
            continue
        entries.append(
            TagImportance(
                tag=tag,
                total_count=total,
                scenic_mean_freq=sum(f.get(tag, 0.0) for f in scenic_freqs) / n_pairs,
                urban_mean_freq=sum(f.get(tag, 0.0) for f in urban_freqs) / n_pairs,
                importance=_importance_ratio(scenic_freqs, urban_freqs, tag, smoothing),
            )
        )
    entries.sort(key=lambda e: (-e.importance, e.tag))
    return ImportanceReport(entries=tuple(entries), min_count=min_count, smoothing=smoothing)


def read_query_points_csv(path: str | Path) -> list[QueryPoint]:
    """Query points CSV with columns lat, lon and optional label."""
    points = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            points.append(
                QueryPoint(lat=float(row["lat"]), lon=float(row["lon"]), label=row.get("label", "") or "")
            )
    return points
