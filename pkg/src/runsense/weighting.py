"""Coefficient profiles, network-wide normalization and routable edge costs.

Per-segment component values are min-max normalized over the whole network,
combined into seven dimension scores with the per-component coefficients,
then linearly weighted by the per-dimension coefficients into a desirability
value. Desirability drives the edge cost used by the router.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .context import (
    CrimeIndex,
    GROUND_SURFACES,
    crime_count,
    ground_indicator,
    obstacle_score,
    safety_score,
    traffic_score,
)
from .graph import StreetGraph, Surface
from .sensory import (
    SMELL_CATEGORIES,
    SOUND_CATEGORIES,
    SensoryIndex,
    beauty_score,
    odorless_fraction,
    smell_fraction,
    sound_fraction,
)

DIMENSIONS = ("smell", "sound", "scenery", "ground", "obstacles", "traffic", "safety")

#: Components carrying a per-component coefficient for each multi-component
#: dimension. The scenery coefficients are documented survey constants; the
#: scenery dimension itself is proxied by the single beauty component.
BETA_COMPONENTS: dict[str, tuple[str, ...]] = {
    "smell": SMELL_CATEGORIES + ("odorless",),
    "sound": SOUND_CATEGORIES,
    "scenery": ("natural", "river", "urban", "beach", "industrial"),
    "ground": ("grass", "pavement", "sand", "park"),
}

#: Raw columns with heavy-tailed count distributions get a log1p before min-max.
SKEWED_COLUMNS = frozenset({"photo_count", "crime_count"})

_GROUND_COLUMNS = {
    Surface.GRASS: "ground:grass",
    Surface.PAVEMENT: "ground:pavement",
    Surface.SAND: "ground:sand",
    Surface.PARK_PATH: "ground:park",
}

_DATA_DIR = Path(__file__).parent / "data"

# Desirability normalization is rounded so that rescaling every alpha by a
# positive constant yields bit-identical scores (min-max cancels the scale
# exactly in real arithmetic; rounding absorbs float noise).
_NORM_DECIMALS = 9


@dataclass(frozen=True)
class WeightProfile:
    """One path type's coefficient set: per-dimension alpha, per-component beta."""

    name: str
    alpha: dict[str, float]
    beta: dict[str, dict[str, float]]

    def __post_init__(self) -> None:
        if set(self.alpha) != set(DIMENSIONS):
            raise ValueError(f"profile {self.name}: alpha must cover {DIMENSIONS}")
        if set(self.beta) != set(BETA_COMPONENTS):
            raise ValueError(f"profile {self.name}: beta dimensions must be {tuple(BETA_COMPONENTS)}")
        for dim, components in BETA_COMPONENTS.items():
            if set(self.beta[dim]) != set(components):
                raise ValueError(f"profile {self.name}: beta[{dim}] must cover {components}")

    def scaled(self, factor: float, name: str | None = None) -> "WeightProfile":
        """Copy with every alpha multiplied by ``factor`` (betas unchanged)."""
        return WeightProfile(
            name=name or self.name,
            alpha={d: a * factor for d, a in self.alpha.items()},
            beta={d: dict(b) for d, b in self.beta.items()},
        )


def profiles_from_dict(data: Mapping[str, dict]) -> dict[str, WeightProfile]:
    return {
        name: WeightProfile(name=name, alpha=dict(spec["alpha"]), beta={d: dict(b) for d, b in spec["beta"].items()})
        for name, spec in data.items()
    }


def profiles_from_json(path: str | Path) -> dict[str, WeightProfile]:
    return profiles_from_dict(json.loads(Path(path).read_text()))


def builtin_profiles() -> tuple[WeightProfile, WeightProfile]:
    """The shipped (scenic, urban) coefficient tables."""
    table = profiles_from_json(_DATA_DIR / "profiles.json")
    return table["scenic"], table["urban"]


@dataclass(frozen=True)
class CostMode:
    """Edge-cost construction: detour-bounded (default) or reciprocal desirability."""

    kind: str
    gamma: float = 2.0
    epsilon: float = 0.01

    def __post_init__(self) -> None:
        if self.kind not in ("detour_bounded", "paper_reciprocal"):
            raise ValueError(f"unknown cost mode {self.kind!r}")
        if self.kind == "detour_bounded" and self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.kind == "paper_reciprocal" and self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")

    @classmethod
    def detour_bounded(cls, gamma: float = 2.0) -> "CostMode":
        return cls(kind="detour_bounded", gamma=gamma)

    @classmethod
    def paper_reciprocal(cls, epsilon: float = 0.01) -> "CostMode":
        return cls(kind="paper_reciprocal", epsilon=epsilon)


def minmax(values: Mapping[int, float]) -> dict[int, float]:
    """Min-max a column to [0, 1]; constant columns map to a neutral 0.5."""
    lo = min(values.values())
    hi = max(values.values())
    if hi - lo <= 0.0:
        return {k: 0.5 for k in values}
    span = hi - lo
    return {k: min(1.0, max(0.0, (v - lo) / span)) for k, v in values.items()}


def normalize_components(
    columns: Mapping[str, Mapping[int, float]],
    skewed: Iterable[str] = SKEWED_COLUMNS,
) -> dict[str, dict[int, float]]:
    """Per-column normalization: log1p for skewed columns, then min-max to [0, 1]."""
    skewed_set = set(skewed)
    out: dict[str, dict[int, float]] = {}
    for name, column in columns.items():
        if not column:
            raise ValueError(f"column {name!r} is empty")
        values = dict(column)
        if name in skewed_set:
            values = {k: math.log1p(v) for k, v in values.items()}
        out[name] = minmax(values)
    return out


def dimension_score(norm: Mapping[str, float], dimension: str, profile: WeightProfile) -> float:
    """Score of one dimension for one segment from its normalized components.

    Multi-component dimensions average beta-weighted components over the
    dimension's component count; single-component dimensions pass their
    normalized component through unchanged. Scenery is proxied by beauty.
    """
    if dimension == "smell":
        comps = BETA_COMPONENTS["smell"]
        return sum(profile.beta["smell"][c] * norm[f"smell:{c}"] for c in comps) / len(comps)
    if dimension == "sound":
        comps = BETA_COMPONENTS["sound"]
        return sum(profile.beta["sound"][c] * norm[f"sound:{c}"] for c in comps) / len(comps)
    if dimension == "ground":
        comps = BETA_COMPONENTS["ground"]
        return sum(profile.beta["ground"][c] * norm[f"ground:{c}"] for c in comps) / len(comps)
    if dimension == "scenery":
        return norm["beauty"]
    if dimension in ("obstacles", "traffic", "safety"):
        return norm[dimension]
    raise ValueError(f"unknown dimension {dimension!r}")


def desirability_raw(dimension_scores: Mapping[str, float], profile: WeightProfile) -> float:
    """Linear combination of the seven dimension scores with the profile's alphas."""
    return sum(profile.alpha[d] * dimension_scores[d] for d in DIMENSIONS)


def edge_cost(length_m: float, mode: CostMode, d_raw: float, s_norm: float) -> float:
    """Routable cost of traversing a segment; strictly positive in both modes."""
    if mode.kind == "detour_bounded":
        return length_m * (1.0 + mode.gamma * (1.0 - s_norm))
    return length_m / max(mode.epsilon, d_raw)


@dataclass(frozen=True)
class CostTable:
    """Per-segment traversal costs for one (profile, mode) pair."""

    profile_name: str
    mode: CostMode
    costs: dict[int, float]
    min_cost_per_meter: float

    def cost(self, segment_id: int) -> float:
        return self.costs[segment_id]


class ScoredNetwork:
    """Immutable per-segment score tables over a filtered street graph."""

    def __init__(
        self,
        graph: StreetGraph,
        sensory: SensoryIndex,
        crimes: CrimeIndex,
        profiles: Iterable[WeightProfile] | None = None,
        crime_buffer_m: float = 200.0,
        high_traffic_value: float = 0.5,
    ):
        self.graph = graph
        self.sensory = sensory
        self.crimes = crimes
        if profiles is None:
            profiles = builtin_profiles()
        self.profiles: dict[str, WeightProfile] = {p.name: p for p in profiles}

        self.components_raw = self._raw_columns(crime_buffer_m, high_traffic_value)
        self.components_norm = normalize_components(self.components_raw)
        self.dimension_scores: dict[str, dict[str, dict[int, float]]] = {}
        self.desirability_raw: dict[str, dict[int, float]] = {}
        self.desirability_norm: dict[str, dict[int, float]] = {}
        for profile in self.profiles.values():
            self._score_profile(profile)
        self._cost_tables: dict[tuple[str, CostMode], CostTable] = {}

    def _raw_columns(self, crime_buffer_m: float, high_traffic_value: float) -> dict[str, dict[int, float]]:
        cols: dict[str, dict[int, float]] = {}

        def put(name: str, seg_id: int, value: float) -> None:
            cols.setdefault(name, {})[seg_id] = value

        for seg_id, seg in self.graph.segments.items():
            for cat in SMELL_CATEGORIES:
                put(f"smell:{cat}", seg_id, smell_fraction(self.sensory, seg_id, cat).value)
            put("smell:odorless", seg_id, odorless_fraction(self.sensory, seg_id).value)
            for cat in SOUND_CATEGORIES:
                put(f"sound:{cat}", seg_id, sound_fraction(self.sensory, seg_id, cat).value)
            put("beauty", seg_id, beauty_score(self.sensory, seg_id))
            for surface in GROUND_SURFACES:
                put(_GROUND_COLUMNS[surface], seg_id, float(ground_indicator(seg, surface)))
            put("obstacles", seg_id, obstacle_score(seg))
            put("traffic", seg_id, traffic_score(seg, high_traffic_value=high_traffic_value))
            put("safety", seg_id, safety_score(seg, self.crimes, crime_buffer_m))
            # diagnostic count columns, normalized but not part of any dimension
            put("photo_count", seg_id, float(self.sensory.photo_count(seg_id)))
            put("crime_count", seg_id, float(crime_count(seg, self.crimes, crime_buffer_m)))
        return cols

    def _score_profile(self, profile: WeightProfile) -> None:
        dims: dict[str, dict[int, float]] = {d: {} for d in DIMENSIONS}
        d_raw: dict[int, float] = {}
        for seg_id in self.graph.segments:
            norm_row = {name: col[seg_id] for name, col in self.components_norm.items()}
            seg_dims = {d: dimension_score(norm_row, d, profile) for d in DIMENSIONS}
            for d, value in seg_dims.items():
                dims[d][seg_id] = value
            d_raw[seg_id] = desirability_raw(seg_dims, profile)
        self.dimension_scores[profile.name] = dims
        self.desirability_raw[profile.name] = d_raw
        self.desirability_norm[profile.name] = {
            seg_id: round(s, _NORM_DECIMALS) for seg_id, s in minmax(d_raw).items()
        }

    def profile(self, name: str) -> WeightProfile:
        if name not in self.profiles:
            raise ValueError(f"unknown profile {name!r}; have {sorted(self.profiles)}")
        return self.profiles[name]

    def component_norm(self, segment_id: int, column: str) -> float:
        return self.components_norm[column][segment_id]

    def dimensions_of(self, profile_name: str, segment_id: int) -> dict[str, float]:
        return {d: self.dimension_scores[profile_name][d][segment_id] for d in DIMENSIONS}

    def s_norm(self, profile_name: str, segment_id: int) -> float:
        return self.desirability_norm[profile_name][segment_id]

    def d_raw(self, profile_name: str, segment_id: int) -> float:
        return self.desirability_raw[profile_name][segment_id]

    def cost_table(self, profile_name: str, mode: CostMode) -> CostTable:
        key = (profile_name, mode)
        if key not in self._cost_tables:
            if profile_name not in self.profiles:
                raise ValueError(f"unknown profile {profile_name!r}")
            costs = {}
            min_rate = math.inf
            for seg_id, seg in self.graph.segments.items():
                cost = edge_cost(
                    seg.length_m,
                    mode,
                    d_raw=self.desirability_raw[profile_name][seg_id],
                    s_norm=self.desirability_norm[profile_name][seg_id],
                )
                costs[seg_id] = cost
                min_rate = min(min_rate, cost / seg.length_m)
            self._cost_tables[key] = CostTable(
                profile_name=profile_name, mode=mode, costs=costs, min_cost_per_meter=min_rate
            )
        return self._cost_tables[key]

    def to_geojson(self, bbox: tuple[float, float, float, float] | None = None) -> dict:
        """Score layer export: one LineString feature per segment with score properties.

        ``bbox`` is (min_lon, min_lat, max_lon, max_lat); segments intersecting
        the box (by their own bounds) are included.
        """
        features = []
        for seg_id in sorted(self.graph.segments):
            seg = self.graph.segments[seg_id]
            if bbox is not None:
                lats = [p[0] for p in seg.polyline]
                lons = [p[1] for p in seg.polyline]
                min_lon, min_lat, max_lon, max_lat = bbox
                if max(lons) < min_lon or min(lons) > max_lon or max(lats) < min_lat or min(lats) > max_lat:
                    continue
            props: dict[str, object] = {
                "id": seg_id,
                "length_m": round(seg.length_m, 2),
                "surface": seg.surface.value,
                "way_class": seg.way_class.value,
                "signal_count": seg.signal_count,
            }
            for name in sorted(self.components_norm):
                props[f"norm:{name}"] = round(self.components_norm[name][seg_id], 6)
            for pname in sorted(self.profiles):
                props[f"{pname}:desirability"] = self.desirability_norm[pname][seg_id]
                for d in DIMENSIONS:
                    props[f"{pname}:{d}"] = round(self.dimension_scores[pname][d][seg_id], 6)
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [[lon, lat] for lat, lon in seg.polyline],
                    },
                    "properties": props,
                }
            )
        return {"type": "FeatureCollection", "features": features}
