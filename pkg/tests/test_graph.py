from __future__ import annotations

import json
import math
import random
import xml.etree.ElementTree as ET

import pytest

import oracles
from synth import coord

from runsense.errors import EmptyGraphError, FormatError, NoSnapError, OsmParseError
from runsense.fixtures import grid_city_xml
from runsense.graph import (
    Surface,
    WayClass,
    filter_excluded,
    load_osm,
    load_segments_geojson,
    snap_point,
)


def osm_doc(nodes, ways, node_tags=None):
    """nodes: {id: (lat, lon)}; ways: [(id, [refs], {tags})]."""
    parts = ['<osm version="0.6">']
    for nid, (lat, lon) in nodes.items():
        tags = (node_tags or {}).get(nid)
        if tags:
            parts.append(f'<node id="{nid}" lat="{lat}" lon="{lon}">')
            parts.extend(f'<tag k="{k}" v="{v}"/>' for k, v in tags.items())
            parts.append("</node>")
        else:
            parts.append(f'<node id="{nid}" lat="{lat}" lon="{lon}"/>')
    for wid, refs, tags in ways:
        parts.append(f'<way id="{wid}">')
        parts.extend(f'<nd ref="{r}"/>' for r in refs)
        parts.extend(f'<tag k="{k}" v="{v}"/>' for k, v in tags.items())
        parts.append("</way>")
    parts.append("</osm>")
    return "".join(parts)


def two_node_way(tags):
    nodes = {1: coord(0, 0), 2: coord(100, 0)}
    return osm_doc(nodes, [(10, [1, 2], tags)])


class TestLoadOsm:
    def test_single_grass_way(self):
        graph = load_osm(two_node_way({"highway": "footway", "surface": "grass"}))
        assert len(graph.segments) == 1
        (seg,) = graph.segments.values()
        assert seg.surface == Surface.GRASS
        assert seg.from_node == 1 and seg.to_node == 2

    def test_motorway_is_extreme_traffic(self):
        graph = load_osm(two_node_way({"highway": "motorway"}))
        (seg,) = graph.segments.values()
        assert seg.way_class == WayClass.EXTREME_TRAFFIC

    @pytest.mark.parametrize(
        "highway,expected",
        [
            ("footway", WayClass.LOW_TRAFFIC),
            ("residential", WayClass.LOW_TRAFFIC),
            ("track", WayClass.LOW_TRAFFIC),
            ("primary", WayClass.HIGH_TRAFFIC),
            ("unclassified", WayClass.HIGH_TRAFFIC),
            ("trunk", WayClass.EXTREME_TRAFFIC),
        ],
    )
    def test_highway_class_table(self, highway, expected):
        graph = load_osm(two_node_way({"highway": highway}))
        assert next(iter(graph.segments.values())).way_class == expected

    def test_unmapped_highway_not_routable(self):
        with pytest.raises(EmptyGraphError):
            load_osm(two_node_way({"highway": "construction"}))

    def test_unmapped_surface_is_unknown(self):
        graph = load_osm(two_node_way({"highway": "footway", "surface": "cobblestone"}))
        assert next(iter(graph.segments.values())).surface == Surface.UNKNOWN

    def test_park_way_overrides_surface(self):
        graph = load_osm(two_node_way({"highway": "path", "surface": "paved", "leisure": "park"}))
        assert next(iter(graph.segments.values())).surface == Surface.PARK_PATH

    def test_park_node_marks_way(self):
        nodes = {1: coord(0, 0), 2: coord(100, 0)}
        doc = osm_doc(nodes, [(10, [1, 2], {"highway": "path"})], node_tags={2: {"leisure": "park"}})
        graph = load_osm(doc)
        assert next(iter(graph.segments.values())).surface == Surface.PARK_PATH

    def test_signal_nodes_counted_per_incident_way(self):
        nodes = {1: coord(0, 0), 2: coord(100, 0), 3: coord(200, 0)}
        doc = osm_doc(
            nodes,
            [(10, [1, 2], {"highway": "footway"}), (11, [2, 3], {"highway": "footway"})],
            node_tags={2: {"highway": "traffic_signals"}},
        )
        graph = load_osm(doc)
        assert graph.segments[10].signal_count == 1
        assert graph.segments[11].signal_count == 1

    @pytest.mark.parametrize("value,count", [("both", 2), ("left", 1), ("right", 1), ("no", 0), (None, 0)])
    def test_sidewalk_mapping(self, value, count):
        tags = {"highway": "primary"}
        if value is not None:
            tags["sidewalk"] = value
        graph = load_osm(two_node_way(tags))
        assert next(iter(graph.segments.values())).sidewalk_count == count

    def test_malformed_xml_reports_line(self):
        with pytest.raises(OsmParseError) as err:
            load_osm("<osm>\n<node id=1/>\n</osm>")
        assert err.value.line == 2

    def test_twelve_way_fixture_lengths_match_oracle(self):
        nodes = {}
        ways = []
        rng = random.Random(42)
        hub = [coord(i * 300, rng.uniform(-50, 50)) for i in range(13)]
        nid = 1
        hub_ids = []
        for lat, lon in hub:
            nodes[nid] = (lat, lon)
            hub_ids.append(nid)
            nid += 1
        interior_counts = [2, 1, 2, 1, 1, 2, 1, 1, 2, 1, 2, 1]  # 17 interiors + 13 hubs = 30 nodes
        for w in range(12):
            refs = [hub_ids[w]]
            for i in range(interior_counts[w]):
                x = w * 300 + (i + 1) * 300 / (interior_counts[w] + 1)
                nodes[nid] = coord(x, rng.uniform(-80, 80))
                refs.append(nid)
                nid += 1
            refs.append(hub_ids[w + 1])
            ways.append((100 + w, refs, {"highway": "footway"}))
        doc = osm_doc(nodes, ways)
        graph = load_osm(doc)
        assert len(graph.nodes) == 13  # endpoint hubs only become routing nodes
        assert len(graph.segments) == 12

        # independent recount straight from the XML
        root = ET.fromstring(doc)
        xml_coords = {
            int(e.attrib["id"]): (float(e.attrib["lat"]), float(e.attrib["lon"]))
            for e in root.iter("node")
        }
        for way in root.iter("way"):
            refs = [int(nd.attrib["ref"]) for nd in way.findall("nd")]
            expected = oracles.polyline_length([xml_coords[r] for r in refs])
            seg = graph.segments[int(way.attrib["id"])]
            assert seg.length_m == pytest.approx(expected, rel=1e-9)
            assert abs(seg.length_m - expected) / seg.length_m < 0.001

    def test_deterministic_build(self):
        doc = grid_city_xml(rows=4, cols=4)
        g1, g2 = load_osm(doc), load_osm(doc)
        assert g1.nodes == g2.nodes
        assert g1.segments == g2.segments
        assert g1.adjacency == g2.adjacency


class TestGeojson:
    def make_collection(self, features):
        return json.dumps({"type": "FeatureCollection", "features": features})

    def line_feature(self, pts, props):
        return {
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [[lon, lat] for lat, lon in pts]},
            "properties": props,
        }

    def test_single_feature(self):
        props = {"surface": "grass", "way_class": "low_traffic", "sidewalk_count": 0, "signal_count": 0}
        graph = load_segments_geojson(self.make_collection([self.line_feature([coord(0, 0), coord(120, 0)], props)]))
        assert len(graph.segments) == 1
        assert next(iter(graph.segments.values())).surface == Surface.GRASS

    def test_missing_way_class_names_feature_index(self):
        good = {"surface": "grass", "way_class": "low_traffic", "sidewalk_count": 0, "signal_count": 0}
        bad = {k: v for k, v in good.items() if k != "way_class"}
        collection = self.make_collection(
            [
                self.line_feature([coord(0, 0), coord(100, 0)], good),
                self.line_feature([coord(100, 0), coord(200, 0)], bad),
            ]
        )
        with pytest.raises(FormatError, match="feature 1"):
            load_segments_geojson(collection)

    def test_non_linestring_rejected(self):
        feature = {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [0.0, 51.5]},
            "properties": {},
        }
        with pytest.raises(FormatError, match="LineString"):
            load_segments_geojson(self.make_collection([feature]))

    def test_cross_format_equivalence(self):
        doc = grid_city_xml(rows=3, cols=4, spacing_m=180.0)
        from_osm = load_osm(doc)
        features = []
        for seg in from_osm.segments.values():
            features.append(
                self.line_feature(
                    list(seg.polyline),
                    {
                        "id": seg.id,
                        "surface": seg.surface.value,
                        "way_class": seg.way_class.value,
                        "sidewalk_count": seg.sidewalk_count,
                        "signal_count": seg.signal_count,
                    },
                )
            )
        from_geojson = load_segments_geojson(self.make_collection(features))

        def attribute_set(graph):
            return {
                (s.id, s.surface, s.way_class, s.sidewalk_count, s.signal_count, round(s.length_m, 6))
                for s in graph.segments.values()
            }

        assert attribute_set(from_osm) == attribute_set(from_geojson)


class TestSnap:
    def test_midpoint_snaps_to_half_length(self):
        graph = load_osm(two_node_way({"highway": "footway"}))
        seg = next(iter(graph.segments.values()))
        mid_lat = (seg.polyline[0][0] + seg.polyline[1][0]) / 2
        mid_lon = (seg.polyline[0][1] + seg.polyline[1][1]) / 2
        loc = snap_point(graph, mid_lat, mid_lon, 50.0)
        assert loc.segment_id == seg.id
        assert loc.offset_m == pytest.approx(seg.length_m / 2, abs=0.01)

    def test_far_point_raises(self):
        graph = load_osm(grid_city_xml(rows=5, cols=5))
        far = coord(-10_000, -10_000)
        with pytest.raises(NoSnapError):
            snap_point(graph, far[0], far[1], 500.0)

    def test_tie_broken_by_lowest_id(self):
        nodes = {1: coord(0, 0), 2: coord(100, 0), 3: coord(200, 0)}
        doc = osm_doc(nodes, [(21, [1, 2], {"highway": "footway"}), (20, [2, 3], {"highway": "footway"})])
        graph = load_osm(doc)
        shared = coord(100, 0)
        loc = snap_point(graph, shared[0], shared[1], 50.0)
        assert loc.segment_id == 20

    def test_random_points_match_exhaustive_scan(self):
        graph = load_osm(grid_city_xml(rows=6, cols=6, spacing_m=200.0))
        rng = random.Random(11)
        min_lat, min_lon, max_lat, max_lon = graph.bbox()
        for _ in range(60):
            lat = rng.uniform(min_lat - 0.001, max_lat + 0.001)
            lon = rng.uniform(min_lon - 0.001, max_lon + 0.001)
            loc = snap_point(graph, lat, lon, 1_000.0)
            oracle_dist, _ = oracles.nearest_segment_scan(graph, lat, lon)
            chosen = oracles.point_to_polyline_distance(lat, lon, list(graph.segments[loc.segment_id].polyline))
            assert chosen <= oracle_dist + 0.01  # chosen segment is (near-)optimal
            for seg in graph.segments.values():
                other = oracles.point_to_polyline_distance(lat, lon, list(seg.polyline))
                assert chosen <= other + 0.01


class TestFilterExcluded:
    def build(self, specs):
        """specs: list of (way_class tag dict) for parallel 2-node ways."""
        nodes = {}
        ways = []
        for i, tags in enumerate(specs):
            a, b = 2 * i + 1, 2 * i + 2
            nodes[a] = coord(0, i * 50)
            nodes[b] = coord(100, i * 50)
            ways.append((50 + i, [a, b], tags))
        return load_osm(osm_doc(nodes, ways))

    def test_extreme_removed(self):
        graph = self.build([{"highway": "motorway"}, {"highway": "footway"}])
        filtered = filter_excluded(graph)
        assert {s.way_class for s in filtered.segments.values()} == {WayClass.LOW_TRAFFIC}

    def test_high_with_sidewalk_retained(self):
        graph = self.build([{"highway": "primary", "sidewalk": "left"}])
        filtered = filter_excluded(graph)
        assert len(filtered.segments) == 1

    def test_high_without_sidewalk_removed(self):
        graph = self.build([{"highway": "primary"}, {"highway": "footway"}])
        filtered = filter_excluded(graph)
        assert len(filtered.segments) == 1

    def test_fixture_counts_and_adjacency(self):
        specs = (
            [{"highway": "motorway"}] * 2
            + [{"highway": "primary"}]
            + [{"highway": "primary", "sidewalk": "both"}] * 2
            + [{"highway": "footway"}] * 5
        )
        graph = self.build(specs)
        filtered = filter_excluded(graph)
        assert len(graph.segments) == 10
        assert len(filtered.segments) == 7
        for seg in filtered.segments.values():
            assert seg.from_node in filtered.nodes and seg.to_node in filtered.nodes
        for nid, pairs in filtered.adjacency.items():
            for neighbor, seg_id in pairs:
                assert seg_id in filtered.segments
                assert neighbor in filtered.nodes
        # orphan nodes pruned
        used = {s.from_node for s in filtered.segments.values()} | {s.to_node for s in filtered.segments.values()}
        assert set(filtered.nodes) == used

    def test_retained_set_is_exactly_non_excluded(self):
        rng = random.Random(5)
        choices = [
            {"highway": "motorway"},
            {"highway": "trunk"},
            {"highway": "primary"},
            {"highway": "primary", "sidewalk": "both"},
            {"highway": "secondary", "sidewalk": "right"},
            {"highway": "footway"},
            {"highway": "residential"},
        ]
        specs = [rng.choice(choices) for _ in range(25)] + [{"highway": "footway"}]
        graph = self.build(specs)
        filtered = filter_excluded(graph)
        expected = {
            s.id
            for s in graph.segments.values()
            if s.way_class != WayClass.EXTREME_TRAFFIC
            and not (s.way_class == WayClass.HIGH_TRAFFIC and s.sidewalk_count == 0)
        }
        assert set(filtered.segments) == expected
        assert all(
            s.way_class != WayClass.LOW_TRAFFIC or s.id in filtered.segments
            for s in graph.segments.values()
        )

    def test_all_excluded_raises(self):
        graph = self.build([{"highway": "motorway"}])
        with pytest.raises(EmptyGraphError):
            filter_excluded(graph)


def test_length_invariant_on_fixture():
    graph = load_osm(grid_city_xml(rows=4, cols=5, spacing_m=140.0))
    for seg in graph.segments.values():
        assert abs(seg.length_m - oracles.polyline_length(list(seg.polyline))) / seg.length_m < 0.001
