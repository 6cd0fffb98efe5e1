"""Synthetic desk-scale city datasets for demos and verification.

Two layouts: a plain grid, and a "corridor" city whose eastern half is a
green, nature-tagged area while the western half is a lively food-and-people
area. The corridor layout separates the two path-type preferences clearly
enough to compare generated routes.
"""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .analysis import QueryPoint
from .context import CrimeRecord
from .geo import EARTH_RADIUS_M
from .sensory import GeoTagRecord

_METERS_PER_DEG = math.pi * EARTH_RADIUS_M / 180.0

EAST_TAGS = ("tree", "flower", "birds")
WEST_TAGS = ("coffee", "crowd", "food")


def _node_coord(origin: tuple[float, float], x_m: float, y_m: float) -> tuple[float, float]:
    lat = origin[0] + y_m / _METERS_PER_DEG
    lon = origin[1] + x_m / (_METERS_PER_DEG * math.cos(math.radians(origin[0])))
    return lat, lon


def _osm_xml(
    nodes: dict[int, tuple[float, float]],
    ways: list[tuple[int, list[int], dict[str, str]]],
    node_tags: dict[int, dict[str, str]] | None = None,
) -> str:
    root = ET.Element("osm", version="0.6", generator="runsense-fixtures")
    for nid in sorted(nodes):
        lat, lon = nodes[nid]
        el = ET.SubElement(root, "node", id=str(nid), lat=f"{lat:.8f}", lon=f"{lon:.8f}")
        for k, v in (node_tags or {}).get(nid, {}).items():
            ET.SubElement(el, "tag", k=k, v=v)
    for way_id, refs, tags in ways:
        el = ET.SubElement(root, "way", id=str(way_id))
        for ref in refs:
            ET.SubElement(el, "nd", ref=str(ref))
        for k, v in tags.items():
            ET.SubElement(el, "tag", k=k, v=v)
    return ET.tostring(root, encoding="unicode")


def grid_city_xml(
    rows: int = 15,
    cols: int = 15,
    spacing_m: float = 250.0,
    origin: tuple[float, float] = (51.50, -0.12),
    highway: str = "residential",
    surface: str = "paved",
) -> str:
    """A rows x cols lattice; every adjacent node pair is one way."""
    nodes: dict[int, tuple[float, float]] = {}
    for r in range(rows):
        for c in range(cols):
            nodes[r * cols + c + 1] = _node_coord(origin, c * spacing_m, r * spacing_m)
    ways: list[tuple[int, list[int], dict[str, str]]] = []
    way_id = 10_000
    tags = {"highway": highway, "surface": surface}
    for r in range(rows):
        for c in range(cols):
            nid = r * cols + c + 1
            if c + 1 < cols:
                ways.append((way_id, [nid, nid + 1], dict(tags)))
                way_id += 1
            if r + 1 < rows:
                ways.append((way_id, [nid, nid + cols], dict(tags)))
                way_id += 1
    return _osm_xml(nodes, ways)


@dataclass(frozen=True)
class CorridorCity:
    osm_xml: str
    geotags: tuple[GeoTagRecord, ...]
    crimes: tuple[CrimeRecord, ...]
    query_points: tuple[QueryPoint, ...]
    origin: tuple[float, float]


def corridor_city(
    rows: int = 12,
    cols: int = 21,
    spacing_m: float = 200.0,
    origin: tuple[float, float] = (51.50, -0.12),
    records_per_segment: int = 2,
) -> CorridorCity:
    """Grid city split into a grassy nature half (east) and a food/people half (west)."""
    center = cols // 2
    nodes: dict[int, tuple[float, float]] = {}
    node_xy: dict[int, tuple[float, float]] = {}
    for r in range(rows):
        for c in range(cols):
            nid = r * cols + c + 1
            nodes[nid] = _node_coord(origin, c * spacing_m, r * spacing_m)
            node_xy[nid] = (c, r)

    ways: list[tuple[int, list[int], dict[str, str]]] = []
    geotags: list[GeoTagRecord] = []
    way_id = 10_000

    def half_of(col_a: float, col_b: float) -> str:
        mid = (col_a + col_b) / 2.0
        if mid > center:
            return "east"
        if mid < center:
            return "west"
        return "center"

    for r in range(rows):
        for c in range(cols):
            nid = r * cols + c + 1
            for other in ((nid + 1) if c + 1 < cols else None, (nid + cols) if r + 1 < rows else None):
                if other is None:
                    continue
                half = half_of(node_xy[nid][0], node_xy[other][0])
                tags = {"highway": "residential", "surface": "grass" if half == "east" else "paved"}
                ways.append((way_id, [nid, other], tags))
                way_id += 1
                if half in ("east", "west"):
                    a, b = nodes[nid], nodes[other]
                    mid_pt = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
                    tag_set = EAST_TAGS if half == "east" else WEST_TAGS
                    for _ in range(records_per_segment):
                        geotags.append(GeoTagRecord(lat=mid_pt[0], lon=mid_pt[1], tags=tag_set))

    start_rows = [r for r in range(1, rows - 1)][:10]
    query_points = tuple(
        QueryPoint(lat=nodes[r * cols + center + 1][0], lon=nodes[r * cols + center + 1][1], label=f"start-{r}")
        for r in start_rows
    )
    return CorridorCity(
        osm_xml=_osm_xml(nodes, ways),
        geotags=tuple(geotags),
        crimes=(),
        query_points=query_points,
        origin=origin,
    )


def write_corridor_fixture(out_dir: str | Path, **kwargs) -> dict[str, Path]:
    """Write the corridor city as the on-disk dataset formats the CLI ingests."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    city = corridor_city(**kwargs)
    paths = {
        "osm": out / "city.osm.xml",
        "geotags": out / "geotags.jsonl",
        "crimes": out / "crimes.csv",
        "points": out / "points.csv",
    }
    paths["osm"].write_text(city.osm_xml)
    paths["geotags"].write_text(
        "\n".join(
            json.dumps({"lat": g.lat, "lon": g.lon, "tags": list(g.tags)}) for g in city.geotags
        )
        + "\n"
    )
    crime_lines = ["Month,Longitude,Latitude,Crime type"]
    crime_lines += [f"{c.month},{c.lon},{c.lat},{c.category}" for c in city.crimes]
    paths["crimes"].write_text("\n".join(crime_lines) + "\n")
    point_lines = ["lat,lon,label"]
    point_lines += [f"{p.lat},{p.lon},{p.label}" for p in city.query_points]
    paths["points"].write_text("\n".join(point_lines) + "\n")
    return paths
