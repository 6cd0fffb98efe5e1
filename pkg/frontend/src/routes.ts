import { ApiClient, ApiError } from './api.js';
import type { LonLat, Profile, RouteResponse } from './types.js';

export interface PlannerView {
  routes: Partial<Record<Profile, RouteResponse>>;
  pending: Profile | null;
  error: string | null;
}

/**
 * Route request/compare state.
 *
 * Holds at most one route per profile (scenic vs urban side by side); a new
 * request supersedes any in-flight one; a failed request leaves the
 * previously rendered routes untouched and surfaces an inline message.
 */
export class RoutePlanner {
  readonly view: PlannerView = { routes: {}, pending: null, error: null };
  private controller: AbortController | null = null;
  private sequence = 0;

  constructor(
    private api: ApiClient,
    private onChange: (view: PlannerView) => void = () => {},
  ) {}

  async request(
    profile: Profile,
    start: LonLat,
    lengthM: number,
    seed: number,
    k = 8,
  ): Promise<RouteResponse | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const ticket = ++this.sequence;
    this.view.pending = profile;
    this.view.error = null;
    this.onChange(this.view);
    try {
      const route = await this.api.postRoute(
        { lat: start[1], lon: start[0], length_m: lengthM, profile, k, seed },
        controller.signal,
      );
      if (ticket !== this.sequence) return null; // superseded while awaiting
      this.view.routes[profile] = route;
      this.view.pending = null;
      this.onChange(this.view);
      return route;
    } catch (err) {
      if (controller.signal.aborted || ticket !== this.sequence) return null;
      this.view.pending = null;
      this.view.error = err instanceof ApiError ? err.message : 'service unreachable';
      this.onChange(this.view);
      return null;
    }
  }

  clear(): void {
    this.controller?.abort();
    this.view.routes = {};
    this.view.pending = null;
    this.view.error = null;
    this.onChange(this.view);
  }
}

export interface MetricsRow {
  label: string;
  value: string;
}

/** Metrics panel rows; every value is copied from the service response. */
export function metricsRows(route: RouteResponse): MetricsRow[] {
  const rows: MetricsRow[] = [
    { label: 'length', value: `${(route.metrics.length_m / 1000).toFixed(2)} km` },
    { label: 'desirability', value: route.metrics.mean_desirability.toFixed(3) },
  ];
  for (const [dimension, exposure] of Object.entries(route.metrics.dimension_exposure)) {
    rows.push({ label: dimension, value: exposure.toFixed(3) });
  }
  return rows;
}
