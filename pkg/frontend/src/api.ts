import type {
  ErsPayload,
  ErsStored,
  Phase,
  Questionnaire,
  RouteRequestBody,
  RouteResponse,
  ScoresLayer,
  ServiceStatus,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = 'ApiError';
  }
}

type FetchLike = typeof fetch;

/** Thin typed client over the routing service HTTP API. */
export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: FetchLike = globalThis.fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  status(): Promise<ServiceStatus> {
    return this.request<ServiceStatus>('/status');
  }

  scores(bbox?: [number, number, number, number]): Promise<ScoresLayer> {
    const query = bbox ? `?bbox=${bbox.join(',')}` : '';
    return this.request<ScoresLayer>(`/segments/scores${query}`);
  }

  postRoute(body: RouteRequestBody, signal?: AbortSignal): Promise<RouteResponse> {
    return this.request<RouteResponse>('/routes', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
  }

  getRoute(routeId: string): Promise<{ route_id: string; geojson: RouteResponse['geojson'] }> {
    return this.request(`/routes/${routeId}`);
  }

  questionnaire(phase: Phase): Promise<Questionnaire> {
    return this.request<Questionnaire>(`/ers/questionnaire?phase=${phase}`);
  }

  postErs(payload: ErsPayload): Promise<{ ers_id: string }> {
    return this.request<{ ers_id: string }>('/ers', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  listErs(routeId: string): Promise<ErsStored[]> {
    return this.request<ErsStored[]>(`/ers?route_id=${encodeURIComponent(routeId)}`);
  }
}
