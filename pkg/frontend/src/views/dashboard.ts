// Dashboard: world map with liveness/role-colored markers plus zero-state
// aware summary cards.  Everything rendered comes straight from the API.

import { escapeHtml, formatPercent, hostOf } from "../format.js";
import { renderWorldMap } from "../map.js";
import type { MonitoringSite, ServiceRecord } from "../types.js";

export interface DashboardData {
  services: ServiceRecord[];
  totalServices: number;
  sites: MonitoringSite[];
  activeCampaigns: number;
  lastHourSuccessability: number | null;
  apiDown?: boolean;
  apiError?: string;
}

export function renderBanner(message: string): string {
  return (
    `<div class="banner banner-error" role="alert">` +
    `API unreachable: ${escapeHtml(message)} ` +
    `<button class="retry-btn" data-action="retry">Retry</button></div>`
  );
}

function card(label: string, value: string, hint = ""): string {
  return (
    `<div class="card"><div class="card-value">${value}</div>` +
    `<div class="card-label">${escapeHtml(label)}</div>` +
    (hint ? `<div class="card-hint">${escapeHtml(hint)}</div>` : "") +
    `</div>`
  );
}

export function renderDashboard(data: DashboardData): string {
  if (data.apiDown) {
    return renderBanner(data.apiError ?? "no response");
  }
  const valid = data.services.filter((s) => s.liveness === "valid").length;
  const cards =
    card("valid services", String(valid), `${data.totalServices} discovered`) +
    card("monitoring sites", String(data.sites.length)) +
    card("active campaigns", String(data.activeCampaigns)) +
    card("last-hour successability", formatPercent(data.lastHourSuccessability));

  const rows = data.services
    .slice()
    .sort((a, b) => a.id.localeCompare(b.id))
    .map(
      (s) =>
        `<tr><td><a href="#/services/${escapeHtml(s.id)}">${escapeHtml(s.id)}</a></td>` +
        `<td>${escapeHtml(hostOf(s.canonical_url))}</td>` +
        `<td><span class="badge badge-${s.liveness}">${s.liveness}</span></td>` +
        `<td>${escapeHtml(s.publisher_software)}</td></tr>`,
    )
    .join("");

  return (
    `<section class="dashboard">` +
    `<div class="cards">${cards}</div>` +
    renderWorldMap(data.services, data.sites) +
    `<table class="service-table"><thead><tr>` +
    `<th>service</th><th>host</th><th>liveness</th><th>software</th>` +
    `</tr></thead><tbody>${rows || `<tr><td colspan="4" class="empty">no services discovered yet</td></tr>`}</tbody></table>` +
    `</section>`
  );
}
