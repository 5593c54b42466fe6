// Browser shell: hash routing, polling refresh, event delegation.  All
// state transitions render from server responses; nothing is shown
// optimistically (pause appears only after the API acknowledged it).

import { ApiClient, ApiError, ApiUnreachable } from "./client.js";
import { loadConfig } from "./config.js";
import type { CampaignDraft, ServiceRecord } from "./types.js";
import { renderBanner, renderDashboard } from "./views/dashboard.js";
import { renderCampaigns, validateDraft, capHint } from "./views/campaigns.js";
import { renderNotFound, renderServiceDetail } from "./views/service.js";

interface AppState {
  client: ApiClient;
  pollMs: number;
  selectedSite: string | null;
  foldedView: boolean;
  formError: string | null;
  timer: number | null;
  knownServices: ServiceRecord[];
}

let state: AppState;

function root(): HTMLElement {
  return document.getElementById("app")!;
}

async function renderRoute(): Promise<void> {
  const hash = window.location.hash || "#/";
  try {
    if (hash.startsWith("#/services/")) {
      await renderServicePage(decodeURIComponent(hash.slice("#/services/".length)));
    } else if (hash.startsWith("#/campaigns")) {
      await renderCampaignsPage();
    } else {
      await renderDashboardPage();
    }
  } catch (err) {
    if (err instanceof ApiUnreachable) {
      root().innerHTML = renderBanner(err.message);
    } else if (err instanceof ApiError && err.status === 404) {
      root().innerHTML = renderNotFound(hash);
    } else {
      root().innerHTML = renderBanner(String(err));
    }
  }
}

async function renderDashboardPage(): Promise<void> {
  const [sites, servicePage, campaigns] = await Promise.all([
    state.client.sites(),
    state.client.services(),
    state.client.campaigns(),
  ]);
  let lastHour: number | null = null;
  const valid = servicePage.items.filter((s) => s.liveness === "valid");
  if (valid.length > 0) {
    const from = new Date(Date.now() - 3600_000).toISOString();
    try {
      const summary = await state.client.summary(valid[0].id);
      lastHour = summary.successability ?? null;
      void from;
    } catch {
      lastHour = null;
    }
  }
  root().innerHTML = renderDashboard({
    services: servicePage.items,
    totalServices: servicePage.total,
    sites,
    activeCampaigns: campaigns.filter((c) => c.state === "running").length,
    lastHourSuccessability: lastHour,
  });
}

async function renderServicePage(id: string): Promise<void> {
  const [service, summary, probes] = await Promise.all([
    state.client.service(id),
    state.client.summary(id),
    state.client.probes(id),
  ]);
  const folded = state.foldedView ? await state.client.folded(id) : null;
  const sites = [...new Set(probes.map((p) => p.site_id))].sort();
  root().innerHTML = renderServiceDetail({
    service,
    summary,
    probes,
    sites,
    selectedSite: state.selectedSite,
    folded,
  });
}

async function renderCampaignsPage(): Promise<void> {
  const [campaigns, servicePage, sites] = await Promise.all([
    state.client.campaigns(),
    state.client.services(),
    state.client.sites(),
  ]);
  state.knownServices = servicePage.items;
  root().innerHTML = renderCampaigns({
    campaigns,
    services: servicePage.items,
    sites: sites.map((s) => s.site_id),
    formError: state.formError,
  });
}

function draftFromForm(form: HTMLFormElement): CampaignDraft {
  const data = new FormData(form);
  return {
    campaign_id: String(data.get("campaign_id") ?? ""),
    mode: (data.get("mode") === "routine" ? "routine" : "intensive"),
    services: data.getAll("service").map(String),
    sites: data.getAll("site").map(String),
    start: new Date().toISOString(),
    operations: ["get_capabilities"],
    records_per_day_target: Number(data.get("records_per_day_target") ?? 48),
    cycle_days: Number(data.get("cycle_days") ?? 6),
    autostart: true,
  };
}

async function onClick(event: Event): Promise<void> {
  const target = (event.target as HTMLElement).closest("[data-action]");
  if (!target) return;
  const action = target.getAttribute("data-action");
  if (action === "retry") {
    await renderRoute();
  } else if (action === "select-site") {
    state.selectedSite = target.getAttribute("data-site");
    await renderRoute();
  } else if (action === "toggle-folded") {
    state.foldedView = !state.foldedView;
    await renderRoute();
  } else if (action === "pause-campaign" || action === "resume-campaign") {
    const id = target.getAttribute("data-id")!;
    try {
      if (action === "pause-campaign") await state.client.pauseCampaign(id);
      else await state.client.resumeCampaign(id);
    } catch (err) {
      state.formError = String(err);
    }
    await renderRoute(); // rendered from the server's acknowledged state
  }
}

async function onSubmit(event: Event): Promise<void> {
  const form = event.target as HTMLFormElement;
  if (form.getAttribute("data-action") !== "create-campaign") return;
  event.preventDefault();
  const draft = draftFromForm(form);
  const problem = validateDraft(draft);
  if (problem) {
    state.formError = problem; // no request leaves the browser
    await renderRoute();
    return;
  }
  try {
    await state.client.createCampaign({ ...draft, simulate: true });
    state.formError = null;
  } catch (err) {
    state.formError = err instanceof ApiError ? err.message : String(err);
  }
  await renderRoute();
}

function onFormChange(event: Event): void {
  const form = (event.target as HTMLElement).closest("form.campaign-form");
  if (!form) return;
  const picked = Array.from(
    form.querySelectorAll<HTMLInputElement>("input[name=service]:checked"),
  ).map((el) => el.value);
  const hintEl = form.querySelector("[data-role=cap-hint]");
  if (hintEl) {
    // hint only; the scheduler enforces the real cap
    hintEl.textContent = capHint(picked, state.knownServices) ?? "";
  }
}

export async function start(): Promise<void> {
  const config = await loadConfig();
  state = {
    client: new ApiClient(config.apiBase),
    pollMs: config.pollIntervalMs,
    selectedSite: null,
    foldedView: false,
    formError: null,
    timer: null,
    knownServices: [],
  };
  window.addEventListener("hashchange", () => void renderRoute());
  document.addEventListener("click", (e) => void onClick(e));
  document.addEventListener("submit", (e) => void onSubmit(e));
  document.addEventListener("change", onFormChange);
  await renderRoute();
  state.timer = window.setInterval(() => void renderRoute(), state.pollMs);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void start();
}
