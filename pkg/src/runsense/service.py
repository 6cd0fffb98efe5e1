"""HTTP service: route generation, score layers, analysis and ERS capture.

All requests share one immutable scored network; the only mutable state is
the document store, whose writes are serialized internally. Responses to
identical route requests are byte-identical: route ids derive from a hash
of the request, and generation is seeded.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .analysis import ImportanceReport, coverage_batch, importance_report, read_query_points_csv
from .config import EngineParams
from .errors import NoRouteError, NoSnapError
from .routing import RouteRequest, round_trip
from .sensory import GeoTagRecord
from .store import DocumentStore, ScoreStore
from .weighting import DIMENSIONS, ScoredNetwork

_DATA_DIR = Path(__file__).parent / "data"


def load_questionnaire() -> dict:
    return json.loads((_DATA_DIR / "ers_questionnaire.json").read_text())


class RouteBody(BaseModel):
    lat: float
    lon: float
    length_m: float
    profile: str
    k: int = 8
    seed: int = 0


class ErsBody(BaseModel):
    phase: str
    item_s1: int
    item_s2: int
    item_s3: int
    route_id: str | None = None


@dataclass
class ServiceState:
    scored: ScoredNetwork
    params: EngineParams
    store: DocumentStore
    records: list[GeoTagRecord]
    importance: ImportanceReport | None = None
    query_points_path: str | None = None


def _route_id(body: RouteBody) -> str:
    canonical = json.dumps(body.model_dump(), sort_keys=True, separators=(",", ":"))
    return "rt-" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def create_app(
    scored: ScoredNetwork,
    params: EngineParams,
    store: DocumentStore,
    records: list[GeoTagRecord] | None = None,
    importance: ImportanceReport | None = None,
    query_points_path: str | None = None,
) -> FastAPI:
    state = ServiceState(
        scored=scored,
        params=params,
        store=store,
        records=records or [],
        importance=importance,
        query_points_path=query_points_path,
    )
    app = FastAPI(title="runsense", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    questionnaire = load_questionnaire()

    @app.get("/status")
    def status() -> dict:
        min_lat, min_lon, max_lat, max_lon = state.scored.graph.bbox()
        return {
            "segments": len(state.scored.graph.segments),
            "nodes": len(state.scored.graph.nodes),
            "bbox": [min_lon, min_lat, max_lon, max_lat],
            "profiles": sorted(state.scored.profiles),
            "params": state.params.to_dict(),
        }

    @app.post("/routes")
    def post_route(body: RouteBody) -> dict:
        if body.length_m <= 0:
            raise HTTPException(status_code=400, detail="length_m must be positive")
        if body.profile not in state.scored.profiles:
            raise HTTPException(status_code=400, detail=f"unknown profile {body.profile!r}")
        if body.k < 1:
            raise HTTPException(status_code=400, detail="k must be >= 1")
        request = RouteRequest(
            start_lat=body.lat,
            start_lon=body.lon,
            target_length_m=body.length_m,
            profile=body.profile,
            k_headings=body.k,
            length_tolerance=state.params.length_tolerance,
            seed=body.seed,
        )
        try:
            route = round_trip(
                state.scored,
                state.params.mode(),
                request,
                snap_radius_m=state.params.snap_radius_m,
                chi=state.params.chi,
                overlap_penalty=state.params.overlap_penalty,
                intermediate_snap_fraction=state.params.intermediate_snap_fraction,
            )
        except NoSnapError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except NoRouteError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        route_id = _route_id(body)
        geojson = route.to_geojson(body.profile, extra={"route_id": route_id, "seed": body.seed})
        metrics = {
            "length_m": round(route.length_m, 2),
            "mean_desirability": round(route.mean_desirability, 6),
            "dimension_exposure": {d: round(route.dimension_exposure[d], 6) for d in DIMENSIONS},
        }
        state.store.put_route(
            route_id,
            {
                "route_id": route_id,
                "request": body.model_dump(),
                "geojson": geojson,
                "metrics": metrics,
                "created_at": datetime.now(timezone.utc).isoformat(),
            },
        )
        return {"route_id": route_id, "geojson": geojson, "metrics": metrics}

    @app.get("/routes/{route_id}")
    def get_route(route_id: str) -> dict:
        doc = state.store.get_route(route_id)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"no stored route {route_id!r}")
        return doc

    @app.get("/ers/questionnaire")
    def ers_questionnaire(phase: str = Query(...)) -> dict:
        if phase not in ("pre", "post"):
            raise HTTPException(status_code=400, detail="phase must be 'pre' or 'post'")
        return {
            "phase": phase,
            "scale": questionnaire["scale"],
            "items": [
                {"id": item["id"], "aspect": item["aspect"], "text": item[phase]}
                for item in questionnaire["items"]
            ],
        }

    @app.post("/ers")
    def post_ers(body: ErsBody) -> dict:
        if body.phase not in ("pre", "post"):
            raise HTTPException(status_code=400, detail="phase must be 'pre' or 'post'")
        for name in ("item_s1", "item_s2", "item_s3"):
            rating = getattr(body, name)
            if not 1 <= rating <= 5:
                raise HTTPException(status_code=400, detail=f"{name} must be between 1 and 5")
        ers_id = state.store.add_ers(
            {
                "route_id": body.route_id,
                "phase": body.phase,
                "item_s1": body.item_s1,
                "item_s2": body.item_s2,
                "item_s3": body.item_s3,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            }
        )
        return {"ers_id": ers_id}

    @app.get("/ers")
    def list_ers(route_id: str | None = None, ers_id: str | None = None) -> list[dict]:
        if ers_id is not None:
            doc = state.store.get_ers(ers_id)
            if doc is None:
                raise HTTPException(status_code=404, detail=f"no ERS response {ers_id!r}")
            return [doc]
        return state.store.list_ers(route_id=route_id)

    @app.get("/analysis/importance")
    def analysis_importance() -> dict:
        if state.importance is None:
            state.importance = _compute_importance(state)
        report = state.importance
        return {
            "min_count": report.min_count,
            "smoothing": report.smoothing,
            "entries": [
                {
                    "tag": e.tag,
                    "count": e.total_count,
                    "scenic_mean_freq": e.scenic_mean_freq,
                    "urban_mean_freq": e.urban_mean_freq,
                    "importance": e.importance,
                }
                for e in report.entries
            ],
        }

    @app.get("/segments/scores")
    def segment_scores(bbox: str | None = None) -> dict:
        box = None
        if bbox:
            try:
                parts = [float(x) for x in bbox.split(",")]
                if len(parts) != 4:
                    raise ValueError
                box = (parts[0], parts[1], parts[2], parts[3])
            except ValueError:
                raise HTTPException(status_code=400, detail="bbox must be minlon,minlat,maxlon,maxlat")
        return state.scored.to_geojson(bbox=box)

    return app


def _compute_importance(state: ServiceState) -> ImportanceReport:
    if not state.query_points_path or not state.records:
        raise HTTPException(
            status_code=404,
            detail="no importance report configured; run the batch command or configure query points",
        )
    points = read_query_points_csv(state.query_points_path)
    batch = coverage_batch(
        points,
        state.scored,
        target_length_m=5000.0,
        mode=state.params.mode(),
        k_headings=state.params.k_headings,
        length_tolerance=state.params.length_tolerance,
        seed=state.params.seed,
        snap_radius_m=state.params.snap_radius_m,
    )
    return importance_report(
        batch.pairs,
        state.records,
        min_count=state.params.importance_min_count,
        smoothing=state.params.importance_smoothing,
        width_m=state.params.analysis_buffer_m,
    )


def serve(
    store_path: str | Path,
    db_path: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    records: list[GeoTagRecord] | None = None,
    importance: ImportanceReport | None = None,
) -> None:
    """Build the app from a score store and run it under uvicorn."""
    import uvicorn

    snapshot = ScoreStore.load(store_path)
    app = create_app(
        scored=snapshot.scored_network(),
        params=snapshot.params,
        store=DocumentStore(db_path),
        records=records,
        importance=importance,
    )
    uvicorn.run(app, host=host, port=port)
