"""Sensory-aware street scoring and circular running-route generation."""

from .config import EngineParams
from .graph import StreetGraph, filter_excluded, load_osm, load_segments_geojson, snap_point
from .routing import Route, RouteRequest, round_trip, shortest_path
from .weighting import CostMode, ScoredNetwork, WeightProfile, builtin_profiles

__all__ = [
    "CostMode",
    "EngineParams",
    "Route",
    "RouteRequest",
    "ScoredNetwork",
    "StreetGraph",
    "WeightProfile",
    "builtin_profiles",
    "filter_excluded",
    "load_osm",
    "load_segments_geojson",
    "round_trip",
    "shortest_path",
    "snap_point",
]

__version__ = "0.1.0"
