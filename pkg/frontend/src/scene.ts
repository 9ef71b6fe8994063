import { Plan, Station } from "./api.js";
import { waitColor } from "./ramp.js";

// The map is built as plain data first (markers, polylines, labels) and only
// then painted onto a canvas. Tests assert on this scene; the canvas layer
// stays a dumb executor.

export interface Viewport {
  width: number;
  height: number;
  toXY(lat: number, lon: number): [number, number];
}

export interface Marker {
  id: string;
  x: number;
  y: number;
  color: string;
  radius: number;
  popup: string[];
}

export interface Polyline {
  points: [number, number][];
  color: string;
  width: number;
}

export interface Scene {
  markers: Marker[];
  routes: Polyline[];
}

/**
 * Fit a lat/lon bounding box into a pixel rectangle, preserving aspect via
 * a local equirectangular scale (longitude shrunk by cos of the mid
 * latitude). Everything rendered shares one viewport so layers line up.
 */
export function fitViewport(
  points: { lat: number; lon: number }[],
  width: number,
  height: number,
  pad = 24,
): Viewport {
  let minLat = Infinity;
  let maxLat = -Infinity;
  let minLon = Infinity;
  let maxLon = -Infinity;
  for (const p of points) {
    minLat = Math.min(minLat, p.lat);
    maxLat = Math.max(maxLat, p.lat);
    minLon = Math.min(minLon, p.lon);
    maxLon = Math.max(maxLon, p.lon);
  }
  if (!Number.isFinite(minLat)) {
    minLat = maxLat = 0;
    minLon = maxLon = 0;
  }
  const midLat = (minLat + maxLat) / 2;
  const kx = Math.cos((midLat * Math.PI) / 180);
  const spanX = Math.max((maxLon - minLon) * kx, 1e-9);
  const spanY = Math.max(maxLat - minLat, 1e-9);
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const cx = width / 2;
  const cy = height / 2;
  const midLon = (minLon + maxLon) / 2;
  return {
    width,
    height,
    toXY(lat: number, lon: number): [number, number] {
      const x = cx + (lon - midLon) * kx * scale;
      const y = cy - (lat - midLat) * scale;
      return [x, y];
    },
  };
}

export function stationMarkers(stations: Station[], vp: Viewport): Marker[] {
  return stations.map((s) => {
    const [x, y] = vp.toXY(s.lat, s.lon);
    return {
      id: s.id,
      x,
      y,
      color: waitColor(s.wait_min),
      radius: 6,
      popup: [
        s.id,
        `wait ${s.wait_min.toFixed(1)} min`,
        `${s.ports} ports @ ${s.power_kw} kW`,
      ],
    };
  });
}

const ROUTE_COLOR = "#1a7f37";
const STOP_COLOR = "#14532d";

/** Route legs and stop markers, taken verbatim from the plan's geometry. */
export function planScene(plan: Plan, vp: Viewport): Scene {
  const routes: Polyline[] = [];
  const markers: Marker[] = [];
  for (const feature of plan.geojson.features) {
    if (feature.geometry.type === "LineString") {
      routes.push({
        points: feature.geometry.coordinates.map(([lon, lat]) =>
          vp.toXY(lat, lon),
        ),
        color: ROUTE_COLOR,
        width: 3,
      });
    }
  }
  for (const stop of plan.stops) {
    const feature = plan.geojson.features.find(
      (f) =>
        f.geometry.type === "Point" &&
        f.properties["station_id"] === stop.station_id,
    );
    if (!feature || feature.geometry.type !== "Point") continue;
    const [lon, lat] = feature.geometry.coordinates;
    const [x, y] = vp.toXY(lat, lon);
    markers.push({
      id: stop.station_id,
      x,
      y,
      color: STOP_COLOR,
      radius: 8,
      popup: [
        stop.station_id,
        `wait ${stop.wait_min.toFixed(1)} min`,
        `charge ${stop.charge_min.toFixed(1)} min`,
        `soc ${(stop.arrive_soc * 100).toFixed(0)}% -> ${(stop.depart_soc * 100).toFixed(0)}%`,
      ],
    });
  }
  return { markers, routes };
}

/** Topmost marker under the cursor, if any. */
export function hitTest(markers: Marker[], x: number, y: number): Marker | null {
  for (let i = markers.length - 1; i >= 0; i--) {
    const m = markers[i];
    const dx = x - m.x;
    const dy = y - m.y;
    if (dx * dx + dy * dy <= (m.radius + 2) * (m.radius + 2)) {
      return m;
    }
  }
  return null;
}
