"""Geotag assignment and per-segment smell/sound/beauty evidence.

Geotagged photo-tag records are assigned to their nearest street segment;
tags are matched against a word lexicon to build per-category counts from
which smell fractions, sound fractions, sentiment fractions and the beauty
score are derived.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import NoSnapError
from .graph import SegmentLocation, StreetGraph, snap_point

SMELL_CATEGORIES = ("nature", "food", "emissions", "chemical", "synthetic", "animals")
SOUND_CATEGORIES = ("natural", "people", "transport", "music", "quiet")

BEAUTY_PHOTO_COEF = 0.03
BEAUTY_POSITIVE_COEF = 0.20
BEAUTY_NEGATIVE_COEF = 0.21

_DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class GeoTagRecord:
    lat: float
    lon: float
    tags: tuple[str, ...]
    kind: str = "photo_tag_set"
    timestamp: str | None = None


@dataclass(frozen=True)
class Lexicon:
    """Category word sets for smells, sounds and emotion words."""

    smell: dict[str, frozenset[str]]
    sound: dict[str, frozenset[str]]
    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self) -> None:
        for sense, table, expected in (
            ("smell", self.smell, SMELL_CATEGORIES),
            ("sound", self.sound, SOUND_CATEGORIES),
        ):
            missing = set(expected) - set(table)
            if missing:
                raise ValueError(f"{sense} lexicon missing categories: {sorted(missing)}")
            seen: set[str] = set()
            for cat, words in table.items():
                if any(w != w.lower() for w in words):
                    raise ValueError(f"{sense}:{cat} has non-lowercase words")
                overlap = seen & set(words)
                if overlap:
                    raise ValueError(f"{sense} categories overlap on {sorted(overlap)}")
                seen |= set(words)
        if self.positive & self.negative:
            raise ValueError("positive and negative word sets overlap")

    @classmethod
    def from_dict(cls, data: dict) -> "Lexicon":
        return cls(
            smell={c: frozenset(w.lower() for w in words) for c, words in data["smell"].items()},
            sound={c: frozenset(w.lower() for w in words) for c, words in data["sound"].items()},
            positive=frozenset(w.lower() for w in data["positive"]),
            negative=frozenset(w.lower() for w in data["negative"]),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "Lexicon":
        return cls.from_dict(json.loads(Path(path).read_text()))

    @classmethod
    def default(cls) -> "Lexicon":
        return cls.from_json(_DATA_DIR / "lexicon.json")


@dataclass
class _SegmentStats:
    photo_count: int = 0
    smell: dict[str, int] = field(default_factory=dict)
    sound: dict[str, int] = field(default_factory=dict)
    positive: int = 0
    negative: int = 0
    total_tags: int = 0


class FractionResult(NamedTuple):
    value: float
    no_data: bool


@dataclass(frozen=True)
class SensoryIndex:
    """Per-segment tag evidence; immutable after ingestion."""

    segment_ids: frozenset[int]
    stats: dict[int, _SegmentStats]
    warning_count: int

    def _get(self, segment_id: int) -> _SegmentStats:
        if segment_id not in self.segment_ids:
            raise KeyError(f"unknown segment id {segment_id}")
        return self.stats.get(segment_id, _SegmentStats())

    def photo_count(self, segment_id: int) -> int:
        return self._get(segment_id).photo_count

    def smell_counts(self, segment_id: int) -> dict[str, int]:
        st = self._get(segment_id)
        return {c: st.smell.get(c, 0) for c in SMELL_CATEGORIES}

    def sound_counts(self, segment_id: int) -> dict[str, int]:
        st = self._get(segment_id)
        return {c: st.sound.get(c, 0) for c in SOUND_CATEGORIES}

    def total_tags(self, segment_id: int) -> int:
        return self._get(segment_id).total_tags


def ingest_geotags(
    records: Iterable[GeoTagRecord],
    graph: StreetGraph,
    assign_radius_m: float,
    lexicon: Lexicon | None = None,
) -> SensoryIndex:
    """Assign each record to its nearest segment and accumulate tag counts.

    Records with invalid coordinates, empty tag lists, or no segment within
    ``assign_radius_m`` are skipped and counted as warnings. Ties between
    equidistant segments go to the lowest segment id, so ingestion is
    independent of record order.
    """
    if assign_radius_m <= 0:
        raise ValueError("assign_radius_m must be positive")
    lex = lexicon if lexicon is not None else Lexicon.default()
    stats: dict[int, _SegmentStats] = {}
    warnings = 0
    for rec in records:
        if not rec.tags or not (-90 <= rec.lat <= 90 and -180 <= rec.lon <= 180):
            warnings += 1
            continue
        try:
            loc: SegmentLocation = snap_point(graph, rec.lat, rec.lon, assign_radius_m)
        except NoSnapError:
            warnings += 1
            continue
        st = stats.setdefault(loc.segment_id, _SegmentStats())
        st.photo_count += 1
        st.total_tags += len(rec.tags)
        for tag in rec.tags:
            word = tag.lower()
            for cat, words in lex.smell.items():
                if word in words:
                    st.smell[cat] = st.smell.get(cat, 0) + 1
            for cat, words in lex.sound.items():
                if word in words:
                    st.sound[cat] = st.sound.get(cat, 0) + 1
            if word in lex.positive:
                st.positive += 1
            if word in lex.negative:
                st.negative += 1
    return SensoryIndex(
        segment_ids=frozenset(graph.segments),
        stats=stats,
        warning_count=warnings,
    )


def smell_fraction(index: SensoryIndex, segment_id: int, category: str) -> FractionResult:
    """Share of the segment's smell-category tags that belong to ``category``."""
    if category not in SMELL_CATEGORIES:
        raise ValueError(f"unknown smell category {category!r}")
    counts = index.smell_counts(segment_id)
    total = sum(counts.values())
    if total == 0:
        return FractionResult(0.0, no_data=True)
    return FractionResult(counts[category] / total, no_data=False)


def sound_fraction(index: SensoryIndex, segment_id: int, category: str) -> FractionResult:
    """Share of the segment's sound-category tags that belong to ``category``."""
    if category not in SOUND_CATEGORIES:
        raise ValueError(f"unknown sound category {category!r}")
    counts = index.sound_counts(segment_id)
    total = sum(counts.values())
    if total == 0:
        return FractionResult(0.0, no_data=True)
    return FractionResult(counts[category] / total, no_data=False)


def odorless_fraction(index: SensoryIndex, segment_id: int) -> FractionResult:
    """Absence of smell evidence: 1 minus the smell-tag share of all tags.

    Segments with no tags at all report 0 with the no-data flag, matching the
    convention of the other fraction accessors.
    """
    total = index.total_tags(segment_id)
    if total == 0:
        return FractionResult(0.0, no_data=True)
    smell_total = sum(index.smell_counts(segment_id).values())
    value = 1.0 - smell_total / total
    return FractionResult(min(1.0, max(0.0, value)), no_data=False)


def sentiment_fractions(index: SensoryIndex, segment_id: int) -> tuple[float, float]:
    """(positive, negative) tag fractions over all tags on the segment."""
    st = index._get(segment_id)
    if st.total_tags == 0:
        return 0.0, 0.0
    return st.positive / st.total_tags, st.negative / st.total_tags


def beauty_score(index: SensoryIndex, segment_id: int) -> float:
    """Aesthetic appeal from photo density and emotion-word fractions.

    Uses log1p so zero-photo segments score 0 on the density term while the
    coefficient weighting stays monotone in the photo count.
    """
    f_p, f_n = sentiment_fractions(index, segment_id)
    pics = index.photo_count(segment_id)
    return BEAUTY_PHOTO_COEF * math.log1p(pics) + BEAUTY_POSITIVE_COEF * f_p - BEAUTY_NEGATIVE_COEF * f_n


def read_geotags_jsonl(path: str | Path) -> list[GeoTagRecord]:
    """Read JSON-Lines records of shape {lat, lon, tags: [...], timestamp?}."""
    records = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        records.append(
            GeoTagRecord(
                lat=float(obj["lat"]),
                lon=float(obj["lon"]),
                tags=tuple(str(t).lower() for t in obj["tags"]),
                timestamp=obj.get("timestamp"),
            )
        )
    return records


def read_geotags_csv(path: str | Path) -> list[GeoTagRecord]:
    """CSV equivalent of the JSONL format; tags are semicolon-separated."""
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            tags = tuple(t.strip().lower() for t in row["tags"].split(";") if t.strip())
            records.append(
                GeoTagRecord(
                    lat=float(row["lat"]),
                    lon=float(row["lon"]),
                    tags=tags,
                    timestamp=row.get("timestamp") or None,
                )
            )
    return records
