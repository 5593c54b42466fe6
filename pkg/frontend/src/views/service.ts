// Service detail: per-site response-time series (site selectable), the
// successability gauge, accessibility badge, error-class donut, and the
// folded virtual-day toggle backed by the API's folded endpoint.

import { renderDonut, renderGauge, renderTimeSeries, SeriesPoint } from "../charts.js";
import { accessibilityBadgeColor, escapeHtml, formatMs } from "../format.js";
import type { FoldedSeries, ProbeRecord, QoSSummary, ServiceRecord } from "../types.js";

export interface ServiceDetailData {
  service: ServiceRecord;
  summary: QoSSummary;
  probes: ProbeRecord[];
  sites: string[];
  selectedSite: string | null;
  folded: FoldedSeries | null; // non-null when the virtual-day view is on
}

export function probeSeries(probes: ProbeRecord[], site: string | null): SeriesPoint[] {
  return probes
    .filter((p) => p.success && p.timing && (site === null || p.site_id === site))
    .map((p) => ({ t: Date.parse(p.started_at), value: p.timing!.total_ms }));
}

export function errorShares(probes: ProbeRecord[]): Record<string, number> {
  const counts: Record<string, number> = {};
  let failed = 0;
  for (const p of probes) {
    if (p.error_class) {
      counts[p.error_class] = (counts[p.error_class] ?? 0) + 1;
      failed += 1;
    }
  }
  const shares: Record<string, number> = {};
  for (const [name, count] of Object.entries(counts)) shares[name] = count / failed;
  return shares;
}

export function renderNotFound(id: string): string {
  return (
    `<section class="not-found"><h1>404</h1>` +
    `<p>No service with id <code>${escapeHtml(id)}</code>.</p>` +
    `<p><a href="#/">back to the dashboard</a></p></section>`
  );
}

export function renderServiceDetail(data: ServiceDetailData): string {
  const svc = data.service;
  const cls = data.summary.accessibility_class;
  const badge =
    `<span class="badge access-badge" style="background:${accessibilityBadgeColor(cls)}">` +
    `${escapeHtml(cls ?? "no data")}</span>`;

  const siteButtons = data.sites
    .map(
      (site) =>
        `<button class="site-btn${site === data.selectedSite ? " selected" : ""}" ` +
        `data-action="select-site" data-site="${escapeHtml(site)}">${escapeHtml(site)}</button>`,
    )
    .join("");

  const chart = data.folded
    ? renderTimeSeries(
        data.folded.offsets_s.map((s) => ({ t: s, value: 1 })),
        "virtual day (folded offsets)",
      )
    : renderTimeSeries(probeSeries(data.probes, data.selectedSite), "response time, ms");

  return (
    `<section class="service-detail">` +
    `<h1>${escapeHtml(svc.id)}</h1>` +
    `<p class="url"><code>${escapeHtml(svc.canonical_url)}</code></p>` +
    `<div class="summary-row">` +
    badge +
    renderGauge(data.summary.successability) +
    `<span class="rt">min ${formatMs(data.summary.rt_min_ms)} · ` +
    `avg ${formatMs(data.summary.rt_avg_ms ?? null)} · ` +
    `max ${formatMs(data.summary.rt_max_ms)}</span>` +
    `</div>` +
    `<div class="controls">sites: ${siteButtons || "<em>none</em>"} ` +
    `<button class="fold-btn" data-action="toggle-folded">` +
    `${data.folded ? "raw series" : "virtual day"}</button></div>` +
    chart +
    `<div class="error-breakdown"><h2>error classes</h2>` +
    renderDonut(errorShares(data.probes)) +
    `</div></section>`
  );
}
