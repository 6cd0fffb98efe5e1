"""Engine parameters and their JSON config representation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .context import DEFAULT_CRIME_CATEGORIES
from .weighting import CostMode


@dataclass(frozen=True)
class EngineParams:
    """Tunable knobs for ingestion, scoring, routing and analysis."""

    cost_mode: str = "detour_bounded"
    gamma: float = 2.0
    epsilon: float = 0.01
    chi: float = 0.8
    overlap_penalty: float = 4.0
    k_headings: int = 8
    length_tolerance: float = 0.20
    seed: int = 0
    snap_radius_m: float = 500.0
    intermediate_snap_fraction: float = 0.5
    assign_radius_m: float = 60.0
    crime_buffer_m: float = 200.0
    crime_categories: tuple[str, ...] = tuple(sorted(DEFAULT_CRIME_CATEGORIES))
    high_traffic_value: float = 0.5
    analysis_buffer_m: float = 25.0
    importance_min_count: int = 20
    importance_smoothing: float = 1.0

    def mode(self) -> CostMode:
        if self.cost_mode == "detour_bounded":
            return CostMode.detour_bounded(self.gamma)
        return CostMode.paper_reciprocal(self.epsilon)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["crime_categories"] = list(self.crime_categories)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "EngineParams":
        known = {f for f in cls.__dataclass_fields__}  # type: ignore[attr-defined]
        kwargs = {k: v for k, v in data.items() if k in known}
        if "crime_categories" in kwargs:
            kwargs["crime_categories"] = tuple(kwargs["crime_categories"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: str | Path) -> "EngineParams":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def override(self, **kwargs) -> "EngineParams":
        return replace(self, **kwargs)
