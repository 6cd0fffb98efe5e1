"""Persistence: the ingested score store and the service document store.

The score store is a gzip-compressed canonical-JSON snapshot of everything
needed to rebuild a scored network without re-reading the raw datasets.
Identical inputs serialize to identical bytes (sorted keys, fixed float
repr, zeroed gzip timestamp).

The document store is a single-file JSON database for stored routes and
questionnaire responses; writes are serialized through a lock and flushed
atomically so the file survives restarts.
"""

from __future__ import annotations

import gzip
import io
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .config import EngineParams
from .context import CrimeIndex, build_crime_index
from .geo import polyline_length_m
from .graph import Node, Segment, StreetGraph, Surface, WayClass
from .sensory import GeoTagRecord, SensoryIndex, _SegmentStats
from .weighting import ScoredNetwork, WeightProfile, builtin_profiles

STORE_FORMAT = "runsense-score-store"
STORE_VERSION = 1


def _canonical_json(data: dict) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")


@dataclass(frozen=True)
class ScoreStore:
    """Serializable ingestion snapshot: graph, tag evidence, crime points, params.

    Raw geotag records are retained so buffer-based analysis can run from the
    store alone.
    """

    graph: StreetGraph
    sensory: SensoryIndex
    crimes: CrimeIndex
    params: EngineParams
    records: tuple[GeoTagRecord, ...] = ()

    def to_bytes(self) -> bytes:
        payload = {
            "format": STORE_FORMAT,
            "version": STORE_VERSION,
            "params": self.params.to_dict(),
            "graph": {
                "nodes": [[n.id, n.lat, n.lon] for n in sorted(self.graph.nodes.values(), key=lambda n: n.id)],
                "segments": [
                    {
                        "id": s.id,
                        "from": s.from_node,
                        "to": s.to_node,
                        "polyline": [[lat, lon] for lat, lon in s.polyline],
                        "surface": s.surface.value,
                        "way_class": s.way_class.value,
                        "sidewalk_count": s.sidewalk_count,
                        "signal_count": s.signal_count,
                    }
                    for s in sorted(self.graph.segments.values(), key=lambda s: s.id)
                ],
            },
            "sensory": {
                "warning_count": self.sensory.warning_count,
                "segments": {
                    str(seg_id): {
                        "photo": st.photo_count,
                        "smell": dict(sorted(st.smell.items())),
                        "sound": dict(sorted(st.sound.items())),
                        "pos": st.positive,
                        "neg": st.negative,
                        "total": st.total_tags,
                    }
                    for seg_id, st in sorted(self.sensory.stats.items())
                },
            },
            "crimes": {
                "warning_count": self.crimes.warning_count,
                "points": [[lat, lon] for lat, lon in self.crimes.points],
            },
            "records": [
                {"lat": r.lat, "lon": r.lon, "tags": list(r.tags)} for r in self.records
            ],
        }
        raw = _canonical_json(payload)
        # mtime=0 keeps the gzip frame deterministic across runs
        buf = io.BytesIO()
        with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0) as gz:
            gz.write(raw)
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, blob: bytes) -> "ScoreStore":
        data = json.loads(gzip.decompress(blob).decode("utf-8"))
        if data.get("format") != STORE_FORMAT:
            raise ValueError("not a runsense score store")
        params = EngineParams.from_dict(data["params"])
        nodes = [Node(id=int(i), lat=lat, lon=lon) for i, lat, lon in data["graph"]["nodes"]]
        segments = [
            Segment(
                id=int(s["id"]),
                from_node=int(s["from"]),
                to_node=int(s["to"]),
                polyline=tuple((lat, lon) for lat, lon in s["polyline"]),
                length_m=polyline_length_m([(lat, lon) for lat, lon in s["polyline"]]),
                surface=Surface(s["surface"]),
                way_class=WayClass(s["way_class"]),
                sidewalk_count=int(s["sidewalk_count"]),
                signal_count=int(s["signal_count"]),
            )
            for s in data["graph"]["segments"]
        ]
        graph = StreetGraph.build(nodes, segments)
        stats = {}
        for seg_id, st in data["sensory"]["segments"].items():
            stats[int(seg_id)] = _SegmentStats(
                photo_count=int(st["photo"]),
                smell={k: int(v) for k, v in st["smell"].items()},
                sound={k: int(v) for k, v in st["sound"].items()},
                positive=int(st["pos"]),
                negative=int(st["neg"]),
                total_tags=int(st["total"]),
            )
        sensory = SensoryIndex(
            segment_ids=frozenset(graph.segments),
            stats=stats,
            warning_count=int(data["sensory"]["warning_count"]),
        )
        crimes: CrimeIndex = build_crime_index(
            ((lat, lon) for lat, lon in data["crimes"]["points"]),
            warning_count=int(data["crimes"]["warning_count"]),
        )
        records = tuple(
            GeoTagRecord(lat=r["lat"], lon=r["lon"], tags=tuple(r["tags"]))
            for r in data.get("records", [])
        )
        return cls(graph=graph, sensory=sensory, crimes=crimes, params=params, records=records)

    @classmethod
    def load(cls, path: str | Path) -> "ScoreStore":
        return cls.from_bytes(Path(path).read_bytes())

    def scored_network(self, profiles: Iterable[WeightProfile] | None = None) -> ScoredNetwork:
        return ScoredNetwork(
            graph=self.graph,
            sensory=self.sensory,
            crimes=self.crimes,
            profiles=profiles if profiles is not None else builtin_profiles(),
            crime_buffer_m=self.params.crime_buffer_m,
            high_traffic_value=self.params.high_traffic_value,
        )


class DocumentStore:
    """Single-file JSON store for routes and ERS responses."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        if self.path.exists():
            self._data = json.loads(self.path.read_text())
        else:
            self._data = {"routes": {}, "ers": []}

    def _flush(self) -> None:
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(self._data, sort_keys=True, indent=1))
        tmp.replace(self.path)

    def put_route(self, route_id: str, document: dict) -> None:
        with self._lock:
            self._data["routes"][route_id] = document
            self._flush()

    def get_route(self, route_id: str) -> dict | None:
        with self._lock:
            return self._data["routes"].get(route_id)

    def add_ers(self, document: dict) -> str:
        with self._lock:
            ers_id = f"ers-{len(self._data['ers']) + 1}"
            self._data["ers"].append({"ers_id": ers_id, **document})
            self._flush()
            return ers_id

    def get_ers(self, ers_id: str) -> dict | None:
        with self._lock:
            for doc in self._data["ers"]:
                if doc["ers_id"] == ers_id:
                    return doc
        return None

    def list_ers(self, route_id: str | None = None) -> list[dict]:
        with self._lock:
            docs = list(self._data["ers"])
        if route_id is not None:
            docs = [d for d in docs if d.get("route_id") == route_id]
        return docs
