// World map with service and site markers: a self-contained SVG string
// (equirectangular projection, coarse coastline grid) so no tile service or
// map library is needed.

import { escapeHtml, livenessColor, siteColor } from "./format.js";
import type { MonitoringSite, ServiceRecord } from "./types.js";

const WIDTH = 720;
const HEIGHT = 360;

export function project(lat: number, lon: number): { x: number; y: number } {
  return {
    x: ((lon + 180) / 360) * WIDTH,
    y: ((90 - lat) / 180) * HEIGHT,
  };
}

function graticule(): string {
  const lines: string[] = [];
  for (let lon = -150; lon <= 150; lon += 30) {
    const { x } = project(0, lon);
    lines.push(`<line x1="${x}" y1="0" x2="${x}" y2="${HEIGHT}" class="grat"/>`);
  }
  for (let lat = -60; lat <= 60; lat += 30) {
    const { y } = project(lat, 0);
    lines.push(`<line x1="0" y1="${y}" x2="${WIDTH}" y2="${y}" class="grat"/>`);
  }
  return lines.join("");
}

export function renderWorldMap(
  services: ServiceRecord[],
  sites: MonitoringSite[],
): string {
  const markers: string[] = [];
  for (const svc of services) {
    if (!svc.server_location) continue;
    const { x, y } = project(svc.server_location.lat, svc.server_location.lon);
    markers.push(
      `<circle class="marker service-marker" data-id="${escapeHtml(svc.id)}" ` +
        `cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="5" ` +
        `fill="${livenessColor(svc.liveness)}">` +
        `<title>${escapeHtml(svc.canonical_url)} (${svc.liveness})</title></circle>`,
    );
  }
  for (const site of sites) {
    const { x, y } = project(site.location.lat, site.location.lon);
    markers.push(
      `<rect class="marker site-marker" data-id="${escapeHtml(site.site_id)}" ` +
        `x="${(x - 5).toFixed(1)}" y="${(y - 5).toFixed(1)}" width="10" height="10" ` +
        `fill="${siteColor(site.role, site.active)}">` +
        `<title>${escapeHtml(site.label)} (${site.role}${site.active ? "" : ", inactive"})</title></rect>`,
    );
  }
  return (
    `<svg class="world-map" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" ` +
    `aria-label="service and site map">` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#eaf3fb"/>` +
    graticule() +
    markers.join("") +
    `</svg>`
  );
}

export function countMarkers(svg: string): number {
  return (svg.match(/class="marker /g) ?? []).length;
}
