// SVG chart builders: response-time series, successability gauge, error
// donut.  Pure string functions so tests can assert on the markup.

export interface SeriesPoint {
  t: number; // epoch ms or folded seconds
  value: number;
}

const W = 640;
const H = 200;
const PAD = 30;

export function renderTimeSeries(points: SeriesPoint[], label = ""): string {
  if (points.length === 0) {
    return `<svg class="chart empty-chart" viewBox="0 0 ${W} ${H}">` +
      `<text x="${W / 2}" y="${H / 2}" text-anchor="middle" class="empty">no data</text></svg>`;
  }
  const ts = points.map((p) => p.t);
  const vs = points.map((p) => p.value);
  const tMin = Math.min(...ts);
  const tMax = Math.max(...ts);
  const vMax = Math.max(...vs, 1);
  const sx = (t: number) =>
    tMax === tMin ? W / 2 : PAD + ((t - tMin) / (tMax - tMin)) * (W - 2 * PAD);
  const sy = (v: number) => H - PAD - (v / vMax) * (H - 2 * PAD);

  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${sx(p.t).toFixed(1)},${sy(p.value).toFixed(1)}`)
    .join(" ");
  const dots = points
    .map(
      (p) =>
        `<circle class="pt" cx="${sx(p.t).toFixed(1)}" cy="${sy(p.value).toFixed(1)}" r="1.5"/>`,
    )
    .join("");
  return (
    `<svg class="chart series-chart" viewBox="0 0 ${W} ${H}">` +
    `<text x="${PAD}" y="14" class="chart-label">${label}</text>` +
    `<line x1="${PAD}" y1="${H - PAD}" x2="${W - PAD}" y2="${H - PAD}" class="axis"/>` +
    `<line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${H - PAD}" class="axis"/>` +
    `<text x="6" y="${PAD}" class="tick">${Math.round(vMax)}</text>` +
    `<path d="${path}" fill="none" class="series-line"/>` +
    dots +
    `</svg>`
  );
}

export function renderGauge(ratio: number | null | undefined): string {
  const value = ratio ?? 0;
  const pct = Math.max(0, Math.min(1, value));
  const color = pct >= 0.95 ? "#2f9e44" : pct >= 0.5 ? "#f08c00" : "#e03131";
  return (
    `<div class="gauge"><div class="gauge-track">` +
    `<div class="gauge-fill" style="width:${(pct * 100).toFixed(1)}%;background:${color}"></div>` +
    `</div><span class="gauge-value">${(pct * 100).toFixed(1)}%</span></div>`
  );
}

export function renderDonut(shares: Record<string, number>): string {
  const entries = Object.entries(shares).filter(([, v]) => v > 0);
  if (entries.length === 0) {
    return `<svg class="chart donut" viewBox="0 0 120 120"><text x="60" y="64" text-anchor="middle" class="empty">no failures</text></svg>`;
  }
  const colors: Record<string, string> = {
    "server-access-error": "#e03131",
    "request-processing-error": "#f08c00",
  };
  const cx = 60;
  const cy = 60;
  const r = 45;
  let angle = -Math.PI / 2;
  const arcs: string[] = [];
  for (const [name, share] of entries) {
    const sweep = share * 2 * Math.PI;
    const x1 = cx + r * Math.cos(angle);
    const y1 = cy + r * Math.sin(angle);
    const x2 = cx + r * Math.cos(angle + sweep);
    const y2 = cy + r * Math.sin(angle + sweep);
    const large = sweep > Math.PI ? 1 : 0;
    // a full-circle share degenerates; draw a circle instead of an arc
    if (share >= 0.9999) {
      arcs.push(
        `<circle class="slice" data-name="${name}" cx="${cx}" cy="${cy}" r="${r}" ` +
          `fill="none" stroke="${colors[name] ?? "#868e96"}" stroke-width="18"/>`,
      );
    } else {
      arcs.push(
        `<path class="slice" data-name="${name}" d="M${x1.toFixed(1)},${y1.toFixed(1)} ` +
          `A${r},${r} 0 ${large} 1 ${x2.toFixed(1)},${y2.toFixed(1)}" ` +
          `fill="none" stroke="${colors[name] ?? "#868e96"}" stroke-width="18"/>`,
      );
    }
    angle += sweep;
  }
  return `<svg class="chart donut" viewBox="0 0 120 120">${arcs.join("")}</svg>`;
}
