// Campaign console: list with server-acknowledged states, pause/resume
// controls, and the create form.  The form enforces "some services picked"
// client-side and surfaces the per-host cap of five as a hint; everything
// else is validated by the API and echoed inline.

import { escapeHtml, hostOf } from "../format.js";
import type { Campaign, CampaignDraft, ServiceRecord } from "../types.js";

export interface CampaignsData {
  campaigns: Campaign[];
  services: ServiceRecord[];
  sites: string[];
  formError: string | null;
}

export function validateDraft(draft: CampaignDraft): string | null {
  if (!draft.campaign_id.trim()) return "campaign id is required";
  if (draft.services.length === 0) return "pick at least one service";
  if (draft.sites.length === 0) return "pick at least one site";
  return null;
}

export function capHint(serviceIds: string[], services: ServiceRecord[]): string | null {
  const byHost: Record<string, number> = {};
  const byId = new Map(services.map((s) => [s.id, s]));
  for (const id of serviceIds) {
    const svc = byId.get(id);
    if (!svc) continue;
    const host = hostOf(svc.canonical_url);
    byHost[host] = (byHost[host] ?? 0) + 1;
  }
  const over = Object.entries(byHost).filter(([, n]) => n > 5);
  if (over.length === 0) return null;
  return (
    "cap hint: more than five services selected from " +
    over.map(([host, n]) => `${host} (${n})`).join(", ") +
    "; the scheduler caps load at five per provider/host"
  );
}

function stateControls(c: Campaign): string {
  if (c.state === "running" || c.state === "created") {
    return `<button data-action="pause-campaign" data-id="${escapeHtml(c.campaign_id)}">pause</button>`;
  }
  if (c.state === "paused") {
    return `<button data-action="resume-campaign" data-id="${escapeHtml(c.campaign_id)}">resume</button>`;
  }
  return "";
}

export function renderCampaigns(data: CampaignsData): string {
  const rows = data.campaigns
    .map((c) => {
      const report = c.report
        ? `${c.report.fired}/${c.report.due} fired, ${c.report.missed} missed`
        : "–";
      return (
        `<tr data-campaign="${escapeHtml(c.campaign_id)}">` +
        `<td>${escapeHtml(c.campaign_id)}</td>` +
        `<td><span class="state state-${c.state}">${c.state}</span></td>` +
        `<td>${report}</td>` +
        `<td>${stateControls(c)}</td></tr>`
      );
    })
    .join("");

  const serviceOptions = data.services
    .map(
      (s) =>
        `<label class="pick"><input type="checkbox" name="service" ` +
        `value="${escapeHtml(s.id)}"> ${escapeHtml(s.id)} ` +
        `<small>${escapeHtml(hostOf(s.canonical_url))}</small></label>`,
    )
    .join("");
  const siteOptions = data.sites
    .map(
      (s) =>
        `<label class="pick"><input type="checkbox" name="site" ` +
        `value="${escapeHtml(s)}"> ${escapeHtml(s)}</label>`,
    )
    .join("");

  return (
    `<section class="campaigns">` +
    `<table class="campaign-table"><thead><tr>` +
    `<th>campaign</th><th>state</th><th>report</th><th></th>` +
    `</tr></thead><tbody>${rows || `<tr><td colspan="4" class="empty">no campaigns</td></tr>`}</tbody></table>` +
    `<form class="campaign-form" data-action="create-campaign">` +
    `<h2>new campaign</h2>` +
    (data.formError ? `<div class="form-error" role="alert">${escapeHtml(data.formError)}</div>` : "") +
    `<label>id <input name="campaign_id" required></label>` +
    `<label>mode <select name="mode">` +
    `<option value="intensive">intensive</option>` +
    `<option value="routine">routine (weekly)</option></select></label>` +
    `<label>records/day <input name="records_per_day_target" type="number" value="48"></label>` +
    `<label>cycle days <input name="cycle_days" type="number" value="6"></label>` +
    `<fieldset><legend>services</legend>${serviceOptions}</fieldset>` +
    `<fieldset><legend>sites</legend>${siteOptions}</fieldset>` +
    `<div class="cap-hint" data-role="cap-hint"></div>` +
    `<button type="submit">create</button>` +
    `</form></section>`
  );
}
