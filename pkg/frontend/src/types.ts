// Payload shapes of the routing service API. The client renders these
// verbatim and computes no scores of its own.

export type Profile = 'scenic' | 'urban';

export type LonLat = [number, number];

export interface RouteGeometry {
  type: 'LineString';
  coordinates: LonLat[];
}

export interface RouteFeature {
  type: 'Feature';
  geometry: RouteGeometry;
  properties: {
    length_m: number;
    profile: Profile;
    mean_desirability: number;
    dimension_exposure: Record<string, number>;
    route_id?: string;
    seed?: number;
  };
}

export interface RouteMetrics {
  length_m: number;
  mean_desirability: number;
  dimension_exposure: Record<string, number>;
}

export interface RouteResponse {
  route_id: string;
  geojson: RouteFeature;
  metrics: RouteMetrics;
}

export interface RouteRequestBody {
  lat: number;
  lon: number;
  length_m: number;
  profile: Profile;
  k: number;
  seed: number;
}

export type Phase = 'pre' | 'post';

export interface QuestionnaireItem {
  id: string;
  aspect: string;
  text: string;
}

export interface Questionnaire {
  phase: Phase;
  scale: { min: number; max: number };
  items: QuestionnaireItem[];
}

export interface ErsPayload {
  phase: Phase;
  item_s1: number;
  item_s2: number;
  item_s3: number;
  route_id?: string;
}

export interface ErsStored extends ErsPayload {
  ers_id: string;
  timestamp?: string;
}

export interface ScoreFeature {
  type: 'Feature';
  geometry: RouteGeometry;
  properties: Record<string, number | string>;
}

export interface ScoresLayer {
  type: 'FeatureCollection';
  features: ScoreFeature[];
}

export interface ServiceStatus {
  segments: number;
  nodes: number;
  bbox: [number, number, number, number];
  profiles: string[];
  params: Record<string, unknown>;
}
