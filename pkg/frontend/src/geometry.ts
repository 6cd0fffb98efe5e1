import type { LonLat } from './types.js';

// Equirectangular projection onto the SVG viewport. Coordinates pass
// through untouched apart from the linear map; no simplification, so the
// rendered polyline carries exactly the service geometry.

export interface Projector {
  toScreen(p: LonLat): [number, number];
  toLonLat(x: number, y: number): LonLat;
}

export function makeProjector(
  bbox: [number, number, number, number], // minLon, minLat, maxLon, maxLat
  width: number,
  height: number,
  padding = 16,
): Projector {
  const [minLon, minLat, maxLon, maxLat] = bbox;
  const midLat = (minLat + maxLat) / 2;
  const lonScaleFactor = Math.cos((midLat * Math.PI) / 180);
  const spanX = Math.max(1e-9, (maxLon - minLon) * lonScaleFactor);
  const spanY = Math.max(1e-9, maxLat - minLat);
  const scale = Math.min((width - 2 * padding) / spanX, (height - 2 * padding) / spanY);
  const offsetX = (width - spanX * scale) / 2;
  const offsetY = (height - spanY * scale) / 2;
  return {
    toScreen([lon, lat]) {
      const x = offsetX + (lon - minLon) * lonScaleFactor * scale;
      const y = height - offsetY - (lat - minLat) * scale;
      return [x, y];
    },
    toLonLat(x, y) {
      const lon = minLon + (x - offsetX) / (lonScaleFactor * scale);
      const lat = minLat + (height - offsetY - y) / scale;
      return [lon, lat];
    },
  };
}

/** SVG path data for a LineString; one M plus one L per remaining vertex. */
export function svgPath(coordinates: LonLat[], projector: Projector): string {
  if (coordinates.length === 0) return '';
  const parts = coordinates.map((c, i) => {
    const [x, y] = projector.toScreen(c);
    return `${i === 0 ? 'M' : 'L'}${x.toFixed(2)},${y.toFixed(2)}`;
  });
  return parts.join(' ');
}
