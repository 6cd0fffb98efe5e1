"""Command-line entry points: ingest, score, route, batch, serve, make-fixture."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analysis import coverage_batch, importance_report, read_query_points_csv
from .config import EngineParams
from .context import ingest_crimes, read_crimes_csv
from .errors import RunsenseError
from .fixtures import write_corridor_fixture
from .graph import filter_excluded, load_osm, load_segments_geojson, WayClass
from .routing import RouteRequest, round_trip
from .sensory import Lexicon, ingest_geotags, read_geotags_csv, read_geotags_jsonl
from .store import DocumentStore, ScoreStore


def _load_params(config: str | None) -> EngineParams:
    return EngineParams.from_json(config) if config else EngineParams()


def _read_records(path: str):
    return read_geotags_csv(path) if path.endswith(".csv") else read_geotags_jsonl(path)


@click.group()
def main() -> None:
    """Sensory-aware street scoring and circular running-route generation."""


@main.command()
@click.option("--osm", type=click.Path(exists=True), help="OSM XML street network")
@click.option("--geojson", type=click.Path(exists=True), help="GeoJSON segment fixture")
@click.option("--geotags", type=click.Path(exists=True), help="Geotag records (.jsonl or .csv)")
@click.option("--crimes", type=click.Path(exists=True), help="Crime CSV (UK police export shape)")
@click.option("--lexicon", type=click.Path(exists=True), help="Lexicon JSON override")
@click.option("--highway-table", type=click.Path(exists=True), help="highway->way_class JSON override")
@click.option("--config", type=click.Path(exists=True), help="EngineParams JSON")
@click.option("--out", required=True, type=click.Path(), help="Score store output path")
def ingest(osm, geojson, geotags, crimes, lexicon, highway_table, config, out) -> None:
    """Build the score store from raw datasets."""
    if bool(osm) == bool(geojson):
        raise click.UsageError("provide exactly one of --osm / --geojson")
    params = _load_params(config)
    try:
        if osm:
            table = None
            if highway_table:
                table = {k: WayClass(v) for k, v in json.loads(Path(highway_table).read_text()).items()}
            graph = load_osm(Path(osm), highway_classes=table)
        else:
            graph = load_segments_geojson(Path(geojson))
        graph = filter_excluded(graph)
        lex = Lexicon.from_json(lexicon) if lexicon else Lexicon.default()
        records = _read_records(geotags) if geotags else []
        sensory = ingest_geotags(records, graph, params.assign_radius_m, lex)
        crime_index = ingest_crimes(read_crimes_csv(crimes) if crimes else [], params.crime_categories)
        snapshot = ScoreStore(
            graph=graph, sensory=sensory, crimes=crime_index, params=params, records=tuple(records)
        )
        snapshot.save(out)
    except RunsenseError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(
        f"wrote {out}: {len(graph.segments)} segments, "
        f"{len(records) if geotags else 0} geotag records ({sensory.warning_count} skipped), "
        f"{len(crime_index)} crimes"
    )


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--bbox", help="minlon,minlat,maxlon,maxlat filter")
def score(store_path, out, bbox) -> None:
    """Export per-segment score layers as GeoJSON."""
    scored = ScoreStore.load(store_path).scored_network()
    box = tuple(float(x) for x in bbox.split(",")) if bbox else None
    if box is not None and len(box) != 4:
        raise click.UsageError("bbox must have four comma-separated values")
    Path(out).write_text(json.dumps(scored.to_geojson(bbox=box), indent=1))
    click.echo(f"wrote {out}")


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--lat", required=True, type=float)
@click.option("--lon", required=True, type=float)
@click.option("--length", "length_m", required=True, type=float)
@click.option("--profile", required=True, type=click.Choice(["scenic", "urban"]))
@click.option("--k", default=None, type=int, help="Heading count (default from store params)")
@click.option("--seed", default=None, type=int)
@click.option("--out", required=True, type=click.Path())
def route(store_path, lat, lon, length_m, profile, k, seed, out) -> None:
    """Generate one circular route and write it as GeoJSON."""
    snapshot = ScoreStore.load(store_path)
    params = snapshot.params
    request = RouteRequest(
        start_lat=lat,
        start_lon=lon,
        target_length_m=length_m,
        profile=profile,
        k_headings=k if k is not None else params.k_headings,
        length_tolerance=params.length_tolerance,
        seed=seed if seed is not None else params.seed,
    )
    try:
        result = round_trip(
            snapshot.scored_network(),
            params.mode(),
            request,
            snap_radius_m=params.snap_radius_m,
            chi=params.chi,
            overlap_penalty=params.overlap_penalty,
            intermediate_snap_fraction=params.intermediate_snap_fraction,
        )
    except RunsenseError as exc:
        raise click.ClickException(str(exc)) from exc
    Path(out).write_text(json.dumps(result.to_geojson(profile), indent=1))
    click.echo(f"wrote {out}: {result.length_m:.0f} m, desirability {result.mean_desirability:.3f}")


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--points", required=True, type=click.Path(exists=True), help="Query points CSV")
@click.option("--length", "length_m", default=5000.0, type=float)
@click.option("--out-dir", required=True, type=click.Path())
def batch(store_path, points, length_m, out_dir) -> None:
    """Coverage batch: route pairs GeoJSON plus the tag-importance report."""
    snapshot = ScoreStore.load(store_path)
    params = snapshot.params
    scored = snapshot.scored_network()
    try:
        result = coverage_batch(
            read_query_points_csv(points),
            scored,
            target_length_m=length_m,
            mode=params.mode(),
            k_headings=params.k_headings,
            length_tolerance=params.length_tolerance,
            seed=params.seed,
            snap_radius_m=params.snap_radius_m,
            chi=params.chi,
            overlap_penalty=params.overlap_penalty,
            intermediate_snap_fraction=params.intermediate_snap_fraction,
        )
        report = importance_report(
            result.pairs,
            list(snapshot.records),
            min_count=params.importance_min_count,
            smoothing=params.importance_smoothing,
            width_m=params.analysis_buffer_m,
        )
    except RunsenseError as exc:
        raise click.ClickException(str(exc)) from exc

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    features = []
    for pair in result.pairs:
        features.append(pair.scenic_route.to_geojson("scenic", extra={"query": pair.query_point.label}))
        features.append(pair.urban_route.to_geojson("urban", extra={"query": pair.query_point.label}))
    (out / "pairs.geojson").write_text(json.dumps({"type": "FeatureCollection", "features": features}, indent=1))
    (out / "importance.csv").write_text(report.to_csv())
    (out / "importance.json").write_text(report.to_plot_json())
    click.echo(
        f"{len(result.pairs)} pairs, {result.skip_count} skipped, "
        f"{len(report.entries)} tags -> {out}"
    )


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--db", required=True, type=click.Path(), help="Document store path")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.option("--query-points", type=click.Path(exists=True), help="CSV for on-demand importance")
def serve(store_path, db, host, port, query_points) -> None:
    """Run the HTTP service over an ingested score store."""
    import uvicorn

    from .service import create_app

    snapshot = ScoreStore.load(store_path)
    app = create_app(
        scored=snapshot.scored_network(),
        params=snapshot.params,
        store=DocumentStore(db),
        records=list(snapshot.records),
        query_points_path=query_points,
    )
    uvicorn.run(app, host=host, port=port)


@main.command("make-fixture")
@click.option("--out", "out_dir", required=True, type=click.Path())
def make_fixture(out_dir) -> None:
    """Write the synthetic corridor-city datasets for demos and UI work."""
    paths = write_corridor_fixture(out_dir)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


if __name__ == "__main__":
    sys.exit(main())
