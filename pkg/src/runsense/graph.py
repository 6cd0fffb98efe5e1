"""Street network ingestion and spatial lookup.

Builds an immutable routable graph from OSM XML or a GeoJSON fixture.
Each input way/feature becomes exactly one segment; pedestrians traverse
segments in both directions, so adjacency carries an implicit reverse twin
for every stored segment.
"""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable

from .errors import EmptyGraphError, FormatError, NoSnapError, OsmParseError
from .geo import LatLon, bbox_of, haversine_m, point_to_polyline, polyline_length_m


class Surface(str, Enum):
    GRASS = "grass"
    PAVEMENT = "pavement"
    SAND = "sand"
    PARK_PATH = "park_path"
    UNKNOWN = "unknown"


class WayClass(str, Enum):
    LOW_TRAFFIC = "low_traffic"
    HIGH_TRAFFIC = "high_traffic"
    EXTREME_TRAFFIC = "extreme_traffic"


#: Default highway tag -> traffic tier. Overridable via a JSON config file;
#: ways with highway values outside the table are not routable for runners.
DEFAULT_HIGHWAY_CLASSES: dict[str, WayClass] = {
    "footway": WayClass.LOW_TRAFFIC,
    "path": WayClass.LOW_TRAFFIC,
    "pedestrian": WayClass.LOW_TRAFFIC,
    "residential": WayClass.LOW_TRAFFIC,
    "track": WayClass.LOW_TRAFFIC,
    "primary": WayClass.HIGH_TRAFFIC,
    "secondary": WayClass.HIGH_TRAFFIC,
    "tertiary": WayClass.HIGH_TRAFFIC,
    "unclassified": WayClass.HIGH_TRAFFIC,
    "motorway": WayClass.EXTREME_TRAFFIC,
    "trunk": WayClass.EXTREME_TRAFFIC,
}

#: OSM surface tag -> surface enum. A way inside a park (leisure=park on the
#: way or on any of its nodes) maps to PARK_PATH regardless of surface tag.
SURFACE_TAGS: dict[str, Surface] = {
    "grass": Surface.GRASS,
    "paved": Surface.PAVEMENT,
    "asphalt": Surface.PAVEMENT,
    "sand": Surface.SAND,
}

SIGNAL_NODE_TAGS = {"traffic_signals", "stop", "give_way"}

GRID_CELL_DEG = 0.005  # ~550 m of latitude per cell
_METERS_PER_DEG = 111_320.0


@dataclass(frozen=True)
class Node:
    id: int
    lat: float
    lon: float


@dataclass(frozen=True)
class Segment:
    id: int
    from_node: int
    to_node: int
    polyline: tuple[LatLon, ...]
    length_m: float
    surface: Surface
    way_class: WayClass
    sidewalk_count: int
    signal_count: int


@dataclass(frozen=True)
class SegmentLocation:
    segment_id: int
    offset_m: float
    lat: float
    lon: float


@dataclass(frozen=True)
class StreetGraph:
    """Immutable street network with per-segment attributes and a grid index."""

    nodes: dict[int, Node]
    segments: dict[int, Segment]
    adjacency: dict[int, tuple[tuple[int, int], ...]]  # node -> ((neighbor, segment_id), ...)
    _grid: dict[tuple[int, int], tuple[int, ...]] = field(repr=False, default_factory=dict)

    @classmethod
    def build(cls, nodes: Iterable[Node], segments: Iterable[Segment]) -> "StreetGraph":
        node_map = {n.id: n for n in sorted(nodes, key=lambda n: n.id)}
        seg_map = {s.id: s for s in sorted(segments, key=lambda s: s.id)}
        adjacency: dict[int, list[tuple[int, int]]] = {nid: [] for nid in node_map}
        for seg in seg_map.values():
            for endpoint in (seg.from_node, seg.to_node):
                if endpoint not in node_map:
                    raise FormatError(f"segment {seg.id} references unknown node {endpoint}")
            _check_segment(seg, node_map)
            adjacency[seg.from_node].append((seg.to_node, seg.id))
            adjacency[seg.to_node].append((seg.from_node, seg.id))
        frozen_adj = {nid: tuple(sorted(pairs)) for nid, pairs in adjacency.items()}
        grid: dict[tuple[int, int], list[int]] = {}
        for seg in seg_map.values():
            for cell in _bbox_cells(seg.polyline):
                grid.setdefault(cell, []).append(seg.id)
        frozen_grid = {cell: tuple(ids) for cell, ids in grid.items()}
        return cls(nodes=node_map, segments=seg_map, adjacency=frozen_adj, _grid=frozen_grid)

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def segment(self, segment_id: int) -> Segment:
        return self.segments[segment_id]

    def neighbors(self, node_id: int) -> tuple[tuple[int, int], ...]:
        return self.adjacency.get(node_id, ())

    def candidate_segments(self, lat: float, lon: float, radius_m: float) -> list[int]:
        """Segment ids whose grid cells intersect the query disk (superset of hits)."""
        dlat = radius_m / _METERS_PER_DEG
        dlon = radius_m / (_METERS_PER_DEG * max(0.01, math.cos(math.radians(lat))))
        lo = _cell(lat - dlat, lon - dlon)
        hi = _cell(lat + dlat, lon + dlon)
        found: set[int] = set()
        for ci in range(lo[0], hi[0] + 1):
            for cj in range(lo[1], hi[1] + 1):
                found.update(self._grid.get((ci, cj), ()))
        return sorted(found)

    def bbox(self) -> tuple[float, float, float, float]:
        """(min_lat, min_lon, max_lat, max_lon) over all nodes."""
        return bbox_of([(n.lat, n.lon) for n in self.nodes.values()])


def _check_segment(seg: Segment, node_map: dict[int, Node]) -> None:
    if seg.length_m <= 0:
        raise FormatError(f"segment {seg.id} has non-positive length")
    start, end = seg.polyline[0], seg.polyline[-1]
    a, b = node_map[seg.from_node], node_map[seg.to_node]
    if haversine_m(start[0], start[1], a.lat, a.lon) > 1.0 or haversine_m(end[0], end[1], b.lat, b.lon) > 1.0:
        raise FormatError(f"segment {seg.id} polyline endpoints do not match its nodes")
    actual = polyline_length_m(list(seg.polyline))
    if actual > 0 and abs(seg.length_m - actual) / actual > 0.001:
        raise FormatError(f"segment {seg.id} length {seg.length_m} deviates from geometry")


def _cell(lat: float, lon: float) -> tuple[int, int]:
    return int(math.floor(lat / GRID_CELL_DEG)), int(math.floor(lon / GRID_CELL_DEG))


def _bbox_cells(polyline: tuple[LatLon, ...]) -> list[tuple[int, int]]:
    min_lat, min_lon, max_lat, max_lon = bbox_of(list(polyline))
    lo = _cell(min_lat, min_lon)
    hi = _cell(max_lat, max_lon)
    return [(i, j) for i in range(lo[0], hi[0] + 1) for j in range(lo[1], hi[1] + 1)]


def _parse_sidewalk(value: str | None) -> int:
    if value is None:
        return 0
    value = value.strip().lower()
    if value == "both":
        return 2
    if value in ("left", "right", "yes"):
        return 1
    return 0


def load_osm(
    source: bytes | str | Path | IO[bytes],
    highway_classes: dict[str, WayClass] | None = None,
) -> StreetGraph:
    """Parse an OSM XML extract into a street graph.

    Ways carrying a highway tag present in ``highway_classes`` become one
    segment each; surface, sidewalk and signal annotations are mapped per
    the documented tag tables.
    """
    classes = highway_classes if highway_classes is not None else DEFAULT_HIGHWAY_CLASSES
    try:
        if isinstance(source, bytes):
            root = ET.fromstring(source)
        elif isinstance(source, str) and source.lstrip().startswith("<"):
            root = ET.fromstring(source)
        elif isinstance(source, (str, Path)):
            root = ET.parse(source).getroot()
        else:
            root = ET.parse(source).getroot()
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise OsmParseError(f"malformed OSM XML: {exc.msg.split(':')[0]}", line, column) from exc

    coords: dict[int, LatLon] = {}
    node_tags: dict[int, dict[str, str]] = {}
    for el in root.iter("node"):
        nid = int(el.attrib["id"])
        coords[nid] = (float(el.attrib["lat"]), float(el.attrib["lon"]))
        tags = {t.attrib["k"]: t.attrib.get("v", "") for t in el.findall("tag")}
        if tags:
            node_tags[nid] = tags

    nodes: dict[int, Node] = {}
    segments: list[Segment] = []
    for el in root.iter("way"):
        way_id = int(el.attrib["id"])
        tags = {t.attrib["k"]: t.attrib.get("v", "") for t in el.findall("tag")}
        highway = tags.get("highway")
        if highway is None or highway not in classes:
            continue
        refs = [int(nd.attrib["ref"]) for nd in el.findall("nd")]
        if len(refs) < 2 or any(r not in coords for r in refs):
            continue
        polyline = tuple(coords[r] for r in refs)
        length = polyline_length_m(list(polyline))
        if length <= 0:
            continue
        in_park = tags.get("leisure") == "park" or any(
            node_tags.get(r, {}).get("leisure") == "park" for r in refs
        )
        if in_park:
            surface = Surface.PARK_PATH
        else:
            surface = SURFACE_TAGS.get(tags.get("surface", ""), Surface.UNKNOWN)
        signal_count = sum(
            1 for r in refs if node_tags.get(r, {}).get("highway") in SIGNAL_NODE_TAGS
        )
        segments.append(
            Segment(
                id=way_id,
                from_node=refs[0],
                to_node=refs[-1],
                polyline=polyline,
                length_m=length,
                surface=surface,
                way_class=classes[highway],
                sidewalk_count=_parse_sidewalk(tags.get("sidewalk")),
                signal_count=signal_count,
            )
        )
        for r in (refs[0], refs[-1]):
            nodes.setdefault(r, Node(id=r, lat=coords[r][0], lon=coords[r][1]))

    if not segments:
        raise EmptyGraphError("no routable ways in OSM input")
    return StreetGraph.build(nodes.values(), segments)


def load_segments_geojson(source: bytes | str | Path | IO[bytes]) -> StreetGraph:
    """Build a graph from a GeoJSON FeatureCollection of LineString segments.

    Each feature must carry properties surface, way_class, sidewalk_count and
    signal_count. Endpoint nodes are deduplicated by coordinate.
    """
    if isinstance(source, (str, Path)) and not (isinstance(source, str) and source.lstrip().startswith("{")):
        data = json.loads(Path(source).read_text())
    elif isinstance(source, bytes):
        data = json.loads(source.decode("utf-8"))
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = json.load(source)

    features = data.get("features")
    if data.get("type") != "FeatureCollection" or features is None:
        raise FormatError("input is not a GeoJSON FeatureCollection")

    node_ids: dict[LatLon, int] = {}
    nodes: dict[int, Node] = {}

    def node_for(pt: LatLon) -> int:
        key = (round(pt[0], 7), round(pt[1], 7))
        if key not in node_ids:
            nid = len(node_ids)
            node_ids[key] = nid
            nodes[nid] = Node(id=nid, lat=pt[0], lon=pt[1])
        return node_ids[key]

    segments: list[Segment] = []
    for idx, feature in enumerate(features):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "LineString":
            raise FormatError(f"feature {idx}: geometry must be LineString, got {geom.get('type')}")
        props = feature.get("properties") or {}
        for key in ("surface", "way_class", "sidewalk_count", "signal_count"):
            if key not in props:
                raise FormatError(f"feature {idx}: missing property {key!r}")
        polyline = tuple((float(lat), float(lon)) for lon, lat in geom["coordinates"])
        if len(polyline) < 2:
            raise FormatError(f"feature {idx}: LineString needs at least 2 coordinates")
        try:
            surface = Surface(props["surface"])
            way_class = WayClass(props["way_class"])
        except ValueError as exc:
            raise FormatError(f"feature {idx}: {exc}") from exc
        seg_id = int(props.get("id", feature.get("id", idx)))
        segments.append(
            Segment(
                id=seg_id,
                from_node=node_for(polyline[0]),
                to_node=node_for(polyline[-1]),
                polyline=polyline,
                length_m=polyline_length_m(list(polyline)),
                surface=surface,
                way_class=way_class,
                sidewalk_count=int(props["sidewalk_count"]),
                signal_count=int(props["signal_count"]),
            )
        )
    if not segments:
        raise EmptyGraphError("no segments in GeoJSON input")
    return StreetGraph.build(nodes.values(), segments)


def snap_point(graph: StreetGraph, lat: float, lon: float, max_radius_m: float) -> SegmentLocation:
    """Nearest segment location within ``max_radius_m``; ties go to the lowest id."""
    best: tuple[float, int, float, LatLon] | None = None
    for seg_id in graph.candidate_segments(lat, lon, max_radius_m):
        seg = graph.segments[seg_id]
        dist, offset, snapped = point_to_polyline(lat, lon, list(seg.polyline))
        key = (dist, seg_id)
        if best is None or key < (best[0], best[1]):
            best = (dist, seg_id, offset, snapped)
    if best is None or best[0] > max_radius_m:
        raise NoSnapError(f"no segment within {max_radius_m:.0f} m of ({lat:.6f}, {lon:.6f})")
    return SegmentLocation(segment_id=best[1], offset_m=best[2], lat=best[3][0], lon=best[3][1])


def filter_excluded(graph: StreetGraph) -> StreetGraph:
    """Drop segments runners never use: extreme traffic, and high traffic without sidewalk."""
    kept = [
        seg
        for seg in graph.segments.values()
        if seg.way_class != WayClass.EXTREME_TRAFFIC
        and not (seg.way_class == WayClass.HIGH_TRAFFIC and seg.sidewalk_count == 0)
    ]
    if not kept:
        raise EmptyGraphError("exclusion filter removed every segment")
    used_nodes = {seg.from_node for seg in kept} | {seg.to_node for seg in kept}
    nodes = [graph.nodes[nid] for nid in sorted(used_nodes)]
    return StreetGraph.build(nodes, kept)
