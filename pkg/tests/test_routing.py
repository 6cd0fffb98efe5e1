from __future__ import annotations

import random

import pytest

import oracles
from synth import coord, loc_at_node, random_street_graph, scored_from_graph, straight_segment

from runsense.context import ingest_crimes
from runsense.errors import NoPathError, NoRouteError
from runsense.graph import Node, SegmentLocation, StreetGraph
from runsense.routing import (
    Route,
    RouteCandidate,
    RouteRequest,
    round_trip,
    round_trip_candidates,
    route_score,
    select_candidate,
    shortest_path,
)
from runsense.sensory import ingest_geotags
from runsense.weighting import CostMode, ScoredNetwork

MODE = CostMode.detour_bounded()


def chain_scored(n_segments=2, spacing=400.0, surfaces=None):
    from runsense.graph import Surface

    nodes = [Node(id=i, lat=coord(i * spacing, 0)[0], lon=coord(i * spacing, 0)[1]) for i in range(n_segments + 1)]
    surfaces = surfaces or [Surface.PAVEMENT] * n_segments
    segments = [
        straight_segment(i, nodes[i], nodes[i + 1], surface=surfaces[i]) for i in range(n_segments)
    ]
    graph = StreetGraph.build(nodes, segments)
    sensory = ingest_geotags([], graph, 60.0)
    return ScoredNetwork(graph, sensory, ingest_crimes([]))


class TestShortestPath:
    def test_single_segment(self):
        scored = chain_scored(n_segments=1)
        seg = scored.graph.segments[0]
        a = SegmentLocation(segment_id=0, offset_m=0.0, lat=seg.polyline[0][0], lon=seg.polyline[0][1])
        b = SegmentLocation(segment_id=0, offset_m=seg.length_m, lat=seg.polyline[1][0], lon=seg.polyline[1][1])
        route = shortest_path(scored, "scenic", MODE, a, b)
        assert route.segment_ids == (0,)
        assert route.node_ids == (0, 1)

    def test_start_equals_goal(self):
        scored = chain_scored(n_segments=1)
        seg = scored.graph.segments[0]
        a = SegmentLocation(segment_id=0, offset_m=0.0, lat=seg.polyline[0][0], lon=seg.polyline[0][1])
        route = shortest_path(scored, "scenic", MODE, a, a)
        assert route.is_empty
        assert route.total_cost == 0.0
        assert route.length_m == 0.0

    def test_unreachable_goal(self):
        # two disconnected chains
        nodes = [
            Node(id=0, lat=coord(0, 0)[0], lon=coord(0, 0)[1]),
            Node(id=1, lat=coord(300, 0)[0], lon=coord(300, 0)[1]),
            Node(id=2, lat=coord(0, 5000)[0], lon=coord(0, 5000)[1]),
            Node(id=3, lat=coord(300, 5000)[0], lon=coord(300, 5000)[1]),
        ]
        segments = [straight_segment(0, nodes[0], nodes[1]), straight_segment(1, nodes[2], nodes[3])]
        graph = StreetGraph.build(nodes, segments)
        scored = ScoredNetwork(graph, ingest_geotags([], graph, 60.0), ingest_crimes([]))
        a = loc_at_node(graph, 0)
        b = loc_at_node(graph, 3)
        with pytest.raises(NoPathError):
            shortest_path(scored, "scenic", MODE, a, b)

    @pytest.mark.parametrize("mode", [CostMode.detour_bounded(), CostMode.paper_reciprocal()])
    def test_matches_dijkstra_on_random_graphs(self, mode):
        rng = random.Random(1234)
        for graph_seed in range(10):
            graph = random_street_graph(graph_seed, max_nodes=80)
            scored = scored_from_graph(graph, seed=graph_seed)
            table = scored.cost_table("scenic", mode)
            node_ids = sorted(graph.nodes)
            for _ in range(20):
                a, b = rng.choice(node_ids), rng.choice(node_ids)
                route = shortest_path(scored, "scenic", mode, loc_at_node(graph, a), loc_at_node(graph, b))
                expected = oracles.dijkstra_cost(graph.adjacency, table.costs, a, b)
                assert route.total_cost == pytest.approx(expected, rel=1e-9)

    def test_deterministic(self, grid_scored_varied):
        graph = grid_scored_varied.graph
        a = loc_at_node(graph, min(graph.nodes))
        b = loc_at_node(graph, max(graph.nodes))
        r1 = shortest_path(grid_scored_varied, "scenic", MODE, a, b)
        r2 = shortest_path(grid_scored_varied, "scenic", MODE, a, b)
        assert r1.segment_ids == r2.segment_ids
        assert r1.geometry == r2.geometry

    def test_geometry_is_connected(self, grid_scored_varied):
        graph = grid_scored_varied.graph
        node_ids = sorted(graph.nodes)
        route = shortest_path(
            grid_scored_varied, "urban", MODE, loc_at_node(graph, node_ids[3]), loc_at_node(graph, node_ids[-5])
        )
        for i, seg_id in enumerate(route.segment_ids):
            seg = graph.segments[seg_id]
            assert {route.node_ids[i], route.node_ids[i + 1]} == {seg.from_node, seg.to_node}
        assert route.length_m == pytest.approx(sum(graph.segments[s].length_m for s in route.segment_ids))


class TestRouteScore:
    def test_single_segment_route(self, grid_scored_varied):
        graph = grid_scored_varied.graph
        seg = graph.segments[min(graph.segments)]
        a = loc_at_node(graph, seg.from_node)
        b = loc_at_node(graph, seg.to_node)
        route = shortest_path(grid_scored_varied, "scenic", MODE, a, b)
        if route.segment_ids == (seg.id,):
            mean_d, _ = route_score(grid_scored_varied, "scenic", route)
            assert mean_d == pytest.approx(grid_scored_varied.s_norm("scenic", seg.id))

    def test_two_equal_segments_average(self):
        from runsense.graph import Surface

        scored = chain_scored(n_segments=2, surfaces=[Surface.GRASS, Surface.PAVEMENT])
        s_values = sorted(scored.desirability_norm["scenic"].values())
        assert s_values == [0.0, 1.0]  # two-segment min-max
        a = loc_at_node(scored.graph, 0)
        b = loc_at_node(scored.graph, 2)
        route = shortest_path(scored, "scenic", MODE, a, b)
        mean_d, exposure = route_score(scored, "scenic", route)
        assert mean_d == pytest.approx(0.5)
        assert set(exposure) == {"smell", "sound", "scenery", "ground", "obstacles", "traffic", "safety"}

    def test_weighted_mean_matches_hand_arithmetic(self, grid_scored_varied):
        graph = grid_scored_varied.graph
        node_ids = sorted(graph.nodes)
        route = shortest_path(
            grid_scored_varied, "scenic", MODE, loc_at_node(graph, node_ids[0]), loc_at_node(graph, node_ids[-1])
        )
        assert len(route.segment_ids) >= 10
        total = sum(graph.segments[s].length_m for s in route.segment_ids)
        expected = (
            sum(graph.segments[s].length_m * grid_scored_varied.s_norm("scenic", s) for s in route.segment_ids)
            / total
        )
        mean_d, _ = route_score(grid_scored_varied, "scenic", route)
        assert mean_d == pytest.approx(expected, rel=1e-12)

    def test_empty_route_rejected(self):
        scored = chain_scored(n_segments=1)
        empty = Route(
            segment_ids=(),
            node_ids=(0,),
            geometry=((51.5, -0.12),),
            length_m=0.0,
            total_cost=0.0,
            mean_desirability=0.0,
            dimension_exposure={},
        )
        with pytest.raises(ValueError):
            route_score(scored, "scenic", empty)


def center_request(scored, profile="scenic", seed=0, **kwargs):
    min_lat, min_lon, max_lat, max_lon = scored.graph.bbox()
    return RouteRequest(
        start_lat=(min_lat + max_lat) / 2,
        start_lon=(min_lon + max_lon) / 2,
        target_length_m=kwargs.pop("target_length_m", 5000.0),
        profile=profile,
        seed=seed,
        **kwargs,
    )


class TestRoundTrip:
    def test_returns_closed_loop(self, grid_scored):
        route = round_trip(grid_scored, MODE, center_request(grid_scored))
        assert route.node_ids[0] == route.node_ids[-1]
        assert route.geometry[0] == route.geometry[-1]

    def test_length_tolerance_contract(self, grid_scored):
        for seed in range(10):
            route = round_trip(grid_scored, MODE, center_request(grid_scored, seed=seed))
            assert 4000.0 <= route.length_m <= 6000.0

    def test_deterministic(self, grid_scored_varied):
        r1 = round_trip(grid_scored_varied, MODE, center_request(grid_scored_varied, seed=4))
        r2 = round_trip(grid_scored_varied, MODE, center_request(grid_scored_varied, seed=4))
        assert r1.segment_ids == r2.segment_ids
        assert r1.geometry == r2.geometry

    def test_winner_matches_independent_selection(self, grid_scored_varied):
        request = center_request(grid_scored_varied, seed=9)
        candidates, _ = round_trip_candidates(grid_scored_varied, MODE, request)
        tol = request.length_tolerance * request.target_length_m
        survivors = [c for c in candidates if abs(c.route.length_m - request.target_length_m) <= tol]
        assert survivors
        expected = sorted(
            survivors,
            key=lambda c: (-c.route.mean_desirability, abs(c.route.length_m - request.target_length_m), c.heading_index),
        )[0]
        winner = round_trip(grid_scored_varied, MODE, request)
        assert winner.segment_ids == expected.route.segment_ids

    def test_tie_break_prefers_length_then_heading(self):
        def make(idx, length, desirability):
            return RouteCandidate(
                heading_index=idx,
                heading_rad=0.0,
                route=Route(
                    segment_ids=(1,),
                    node_ids=(0, 0),
                    geometry=((51.5, -0.12), (51.5, -0.12)),
                    length_m=length,
                    total_cost=length,
                    mean_desirability=desirability,
                    dimension_exposure={},
                ),
            )

        # desirability wins first
        assert select_candidate([make(0, 5000, 0.4), make(1, 5200, 0.9)], 5000).heading_index == 1
        # then length closeness
        assert select_candidate([make(0, 5400, 0.5), make(1, 5100, 0.5)], 5000).heading_index == 1
        # then lowest heading index
        assert select_candidate([make(2, 5100, 0.5), make(0, 5100, 0.5), make(1, 5100, 0.5)], 5000).heading_index == 0

    def test_overlap_bounded_on_grid(self, grid_scored):
        for seed in range(8):
            route = round_trip(grid_scored, MODE, center_request(grid_scored, seed=seed))
            seen: dict[int, int] = {}
            for seg_id in route.segment_ids:
                seen[seg_id] = seen.get(seg_id, 0) + 1
            shared = sum(
                grid_scored.graph.segments[s].length_m for s, n in seen.items() if n >= 2
            )
            assert shared <= 0.5 * route.length_m

    def test_no_route_reports_closest_length(self):
        scored = chain_scored(n_segments=3, spacing=300.0)  # 900 m of street for a 5 km ask
        request = RouteRequest(
            start_lat=scored.graph.nodes[0].lat,
            start_lon=scored.graph.nodes[0].lon,
            target_length_m=5000.0,
            profile="scenic",
        )
        with pytest.raises(NoRouteError) as err:
            round_trip(scored, MODE, request, intermediate_snap_fraction=1.0)
        assert err.value.closest_length_m is not None
        assert err.value.closest_length_m < 4000.0

    def test_profile_divergence_on_corridor(self, corridor):
        scored, city = corridor
        qp = city.query_points[5]
        routes = {}
        for profile in ("scenic", "urban"):
            request = RouteRequest(
                start_lat=qp.lat, start_lon=qp.lon, target_length_m=5000.0, profile=profile, seed=0
            )
            routes[profile] = round_trip(scored, MODE, request)

        def exposure(route, column):
            total = sum(scored.graph.segments[s].length_m for s in route.segment_ids)
            return sum(
                scored.graph.segments[s].length_m * scored.component_norm(s, column) for s in route.segment_ids
            ) / total

        assert exposure(routes["scenic"], "smell:nature") > exposure(routes["urban"], "smell:nature")
        assert exposure(routes["urban"], "smell:food") > exposure(routes["scenic"], "smell:food")
        assert exposure(routes["urban"], "sound:people") > exposure(routes["scenic"], "sound:people")

    def test_request_validation(self):
        with pytest.raises(ValueError):
            RouteRequest(start_lat=51.5, start_lon=-0.12, target_length_m=0.0, profile="scenic")
        with pytest.raises(ValueError):
            RouteRequest(start_lat=51.5, start_lon=-0.12, target_length_m=5000.0, profile="scenic", length_tolerance=1.5)
        with pytest.raises(ValueError):
            RouteRequest(start_lat=51.5, start_lon=-0.12, target_length_m=5000.0, profile="scenic", k_headings=0)
