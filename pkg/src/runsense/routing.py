"""Best-path search and circular route generation over a scored network.

Point-to-point paths run A* over node adjacency with per-segment profile
costs and a distance-proportional admissible heuristic. Circular routes
sample k compass headings, place an intermediate target along each heading,
and join an outbound leg with a return leg whose reuse of outbound segments
is cost-penalized; the best in-tolerance candidate wins.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import NoPathError, NoRouteError, NoSnapError
from .geo import LatLon, destination_point, haversine_m
from .graph import SegmentLocation, StreetGraph, snap_point
from .weighting import CostMode, DIMENSIONS, ScoredNetwork

#: Fraction of half the target length used as the crow-fly distance to the
#: intermediate heading point (street paths detour over straight lines).
DEFAULT_CHI = 0.8

#: Cost multiplier applied to outbound-leg segments while searching the
#: return leg; keeps the loop from backtracking without hard edge removal.
DEFAULT_OVERLAP_PENALTY = 4.0

_GOLDEN = 0.6180339887498949


@dataclass(frozen=True)
class Route:
    """An ordered traversal of connected segments with score aggregates."""

    segment_ids: tuple[int, ...]
    node_ids: tuple[int, ...]
    geometry: tuple[LatLon, ...]
    length_m: float
    total_cost: float
    mean_desirability: float
    dimension_exposure: dict[str, float]

    @property
    def is_empty(self) -> bool:
        return not self.segment_ids

    def to_geojson(self, profile: str, extra: Mapping[str, object] | None = None) -> dict:
        props: dict[str, object] = {
            "length_m": round(self.length_m, 2),
            "profile": profile,
            "mean_desirability": round(self.mean_desirability, 6),
            "dimension_exposure": {d: round(v, 6) for d, v in self.dimension_exposure.items()},
        }
        if extra:
            props.update(extra)
        return {
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [[lon, lat] for lat, lon in self.geometry],
            },
            "properties": props,
        }


@dataclass(frozen=True)
class RouteRequest:
    start_lat: float
    start_lon: float
    target_length_m: float
    profile: str
    k_headings: int = 8
    length_tolerance: float = 0.20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.target_length_m <= 0:
            raise ValueError("target_length_m must be positive")
        if not (0.0 < self.length_tolerance < 1.0):
            raise ValueError("length_tolerance must be in (0, 1)")
        if self.k_headings < 1:
            raise ValueError("k_headings must be >= 1")


@dataclass(frozen=True)
class RouteCandidate:
    heading_index: int
    heading_rad: float
    route: Route


@dataclass
class _Search:
    """One A* run; query-local state."""

    scored: ScoredNetwork
    costs: Mapping[int, float]
    min_cost_per_meter: float
    goal: LatLon

    def heuristic(self, node_id: int) -> float:
        n = self.scored.graph.nodes[node_id]
        return haversine_m(n.lat, n.lon, self.goal[0], self.goal[1]) * self.min_cost_per_meter


def anchor_node(graph: StreetGraph, loc: SegmentLocation) -> int:
    """Graph node a snapped location is routed from: the nearer segment endpoint."""
    seg = graph.segments[loc.segment_id]
    if loc.offset_m < seg.length_m / 2.0:
        return seg.from_node
    if loc.offset_m > seg.length_m / 2.0:
        return seg.to_node
    return min(seg.from_node, seg.to_node)


def _astar(
    scored: ScoredNetwork,
    costs: Mapping[int, float],
    min_cost_per_meter: float,
    start: int,
    goal: int,
) -> tuple[list[int], list[int], float]:
    """Minimum-cost node path; returns (segment ids, node ids, total cost)."""
    graph = scored.graph
    if start == goal:
        return [], [start], 0.0
    goal_pt = (graph.nodes[goal].lat, graph.nodes[goal].lon)
    search = _Search(scored, costs, min_cost_per_meter, goal_pt)

    counter = 0
    open_heap: list[tuple[float, int, int]] = [(search.heuristic(start), counter, start)]
    g_score: dict[int, float] = {start: 0.0}
    came_from: dict[int, tuple[int, int]] = {}  # node -> (previous node, segment)
    closed: set[int] = set()

    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current == goal:
            seg_path: list[int] = []
            node_path: list[int] = [current]
            while current in came_from:
                prev, seg_id = came_from[current]
                seg_path.append(seg_id)
                node_path.append(prev)
                current = prev
            seg_path.reverse()
            node_path.reverse()
            return seg_path, node_path, g_score[goal]
        if current in closed:
            continue
        closed.add(current)
        for neighbor, seg_id in graph.neighbors(current):
            if neighbor in closed:
                continue
            tentative = g_score[current] + costs[seg_id]
            if tentative < g_score.get(neighbor, math.inf):
                g_score[neighbor] = tentative
                came_from[neighbor] = (current, seg_id)
                counter += 1
                heapq.heappush(open_heap, (tentative + search.heuristic(neighbor), counter, neighbor))
    raise NoPathError(f"node {goal} unreachable from node {start}")


def _assemble(
    scored: ScoredNetwork,
    profile_name: str,
    seg_ids: list[int],
    node_ids: list[int],
    total_cost: float,
) -> Route:
    graph = scored.graph
    if not seg_ids:
        start = graph.nodes[node_ids[0]]
        return Route(
            segment_ids=(),
            node_ids=tuple(node_ids),
            geometry=((start.lat, start.lon),),
            length_m=0.0,
            total_cost=0.0,
            mean_desirability=0.0,
            dimension_exposure={},
        )
    geometry: list[LatLon] = []
    for i, seg_id in enumerate(seg_ids):
        seg = graph.segments[seg_id]
        pts = list(seg.polyline) if seg.from_node == node_ids[i] else list(reversed(seg.polyline))
        geometry.extend(pts if i == 0 else pts[1:])
    length = sum(graph.segments[s].length_m for s in seg_ids)
    mean_d, exposure = _weighted_scores(scored, profile_name, seg_ids)
    return Route(
        segment_ids=tuple(seg_ids),
        node_ids=tuple(node_ids),
        geometry=tuple(geometry),
        length_m=length,
        total_cost=total_cost,
        mean_desirability=mean_d,
        dimension_exposure=exposure,
    )


def _weighted_scores(
    scored: ScoredNetwork, profile_name: str, seg_ids: list[int]
) -> tuple[float, dict[str, float]]:
    total_len = sum(scored.graph.segments[s].length_m for s in seg_ids)
    mean_d = sum(scored.graph.segments[s].length_m * scored.s_norm(profile_name, s) for s in seg_ids) / total_len
    exposure = {
        d: sum(
            scored.graph.segments[s].length_m * scored.dimension_scores[profile_name][d][s] for s in seg_ids
        )
        / total_len
        for d in DIMENSIONS
    }
    return mean_d, exposure


def shortest_path(
    scored: ScoredNetwork,
    profile_name: str,
    mode: CostMode,
    from_loc: SegmentLocation,
    to_loc: SegmentLocation,
) -> Route:
    """Minimum-cost route between two snapped locations under profile costs."""
    table = scored.cost_table(profile_name, mode)
    start = anchor_node(scored.graph, from_loc)
    goal = anchor_node(scored.graph, to_loc)
    seg_ids, node_ids, cost = _astar(scored, table.costs, table.min_cost_per_meter, start, goal)
    return _assemble(scored, profile_name, seg_ids, node_ids, cost)


def route_score(scored: ScoredNetwork, profile_name: str, route: Route) -> tuple[float, dict[str, float]]:
    """Length-weighted mean desirability and per-dimension exposure of a route."""
    if route.is_empty:
        raise ValueError("cannot score an empty route")
    return _weighted_scores(scored, profile_name, list(route.segment_ids))


def _heading_offset(seed: int, k: int) -> float:
    # Deterministic rotation in [0, 2*pi/k); seed 0 keeps headings unrotated.
    return (2.0 * math.pi / k) * ((seed * _GOLDEN) % 1.0)


def round_trip_candidates(
    scored: ScoredNetwork,
    mode: CostMode,
    request: RouteRequest,
    snap_radius_m: float = 500.0,
    chi: float = DEFAULT_CHI,
    overlap_penalty: float = DEFAULT_OVERLAP_PENALTY,
    intermediate_snap_fraction: float = 0.5,
) -> tuple[list[RouteCandidate], SegmentLocation]:
    """All heading candidates for a circular-route request (in-tolerance or not)."""
    profile_name = request.profile
    scored.profile(profile_name)  # validate early
    table = scored.cost_table(profile_name, mode)
    start_loc = snap_point(scored.graph, request.start_lat, request.start_lon, snap_radius_m)
    start_node = anchor_node(scored.graph, start_loc)

    crow_m = chi * request.target_length_m / 2.0
    inter_radius = max(50.0, intermediate_snap_fraction * crow_m)
    offset = _heading_offset(request.seed, request.k_headings)

    candidates: list[RouteCandidate] = []
    for m in range(request.k_headings):
        heading = (2.0 * math.pi * m / request.k_headings + offset) % (2.0 * math.pi)
        target = destination_point(start_loc.lat, start_loc.lon, heading, crow_m)
        try:
            inter_loc = snap_point(scored.graph, target[0], target[1], inter_radius)
        except NoSnapError:
            continue
        inter_node = anchor_node(scored.graph, inter_loc)
        if inter_node == start_node:
            continue
        try:
            out_segs, out_nodes, out_cost = _astar(
                scored, table.costs, table.min_cost_per_meter, start_node, inter_node
            )
        except NoPathError:
            continue
        penalized = dict(table.costs)
        for seg_id in out_segs:
            penalized[seg_id] = table.costs[seg_id] * overlap_penalty
        back_segs, back_nodes, back_cost = _astar(
            scored, penalized, table.min_cost_per_meter, inter_node, start_node
        )
        seg_ids = out_segs + back_segs
        node_ids = out_nodes + back_nodes[1:]
        if not seg_ids:
            continue
        route = _assemble(scored, profile_name, seg_ids, node_ids, out_cost + back_cost)
        candidates.append(RouteCandidate(heading_index=m, heading_rad=heading, route=route))
    return candidates, start_loc


def select_candidate(candidates: list[RouteCandidate], target_length_m: float) -> RouteCandidate:
    """Winner: highest mean desirability, then closest length, then lowest heading index."""
    if not candidates:
        raise ValueError("no candidates to select from")
    return min(
        candidates,
        key=lambda c: (
            -c.route.mean_desirability,
            abs(c.route.length_m - target_length_m),
            c.heading_index,
        ),
    )


def round_trip(
    scored: ScoredNetwork,
    mode: CostMode,
    request: RouteRequest,
    snap_radius_m: float = 500.0,
    chi: float = DEFAULT_CHI,
    overlap_penalty: float = DEFAULT_OVERLAP_PENALTY,
    intermediate_snap_fraction: float = 0.5,
) -> Route:
    """Best circular route for the request; raises NoRouteError when none fits."""
    candidates, _ = round_trip_candidates(
        scored,
        mode,
        request,
        snap_radius_m=snap_radius_m,
        chi=chi,
        overlap_penalty=overlap_penalty,
        intermediate_snap_fraction=intermediate_snap_fraction,
    )
    if not candidates:
        raise NoRouteError("no heading produced a snappable intermediate point")
    tol = request.length_tolerance * request.target_length_m
    survivors = [c for c in candidates if abs(c.route.length_m - request.target_length_m) <= tol]
    if not survivors:
        closest = min(candidates, key=lambda c: abs(c.route.length_m - request.target_length_m))
        raise NoRouteError(
            f"no candidate within {request.length_tolerance:.0%} of {request.target_length_m:.0f} m "
            f"(closest: {closest.route.length_m:.0f} m)",
            closest_length_m=closest.route.length_m,
        )
    return select_candidate(survivors, request.target_length_m).route
