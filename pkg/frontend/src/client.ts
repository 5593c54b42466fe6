// Thin typed wrapper over the documented REST endpoints.  Every call either
// resolves with a decoded payload or throws ApiError (HTTP-level) /
// ApiUnreachable (network-level); the views translate the latter into the
// retry banner.

import type {
  Campaign,
  CampaignDraft,
  CampaignReport,
  FoldedSeries,
  MonitoringSite,
  ProbeRecord,
  QoSSummary,
  ServicePage,
  ServiceRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiUnreachable extends Error {}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch,
    private timeoutMs = 10_000,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const controller = new AbortController();
    const timer = setTimeout(() => controller.abort(), this.timeoutMs);
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
        signal: controller.signal,
      });
    } catch (err) {
      throw new ApiUnreachable(`API unreachable: ${String(err)}`);
    } finally {
      clearTimeout(timer);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      /* non-JSON error body */
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  sites(): Promise<MonitoringSite[]> {
    return this.request("GET", "/api/v1/sites");
  }

  services(page = 1, pageSize = 100): Promise<ServicePage> {
    return this.request("GET", `/api/v1/services?page=${page}&page_size=${pageSize}`);
  }

  service(id: string): Promise<ServiceRecord> {
    return this.request("GET", `/api/v1/services/${encodeURIComponent(id)}`);
  }

  probes(id: string, opts: { op?: string; from?: string; to?: string; site?: string } = {}): Promise<ProbeRecord[]> {
    const params = new URLSearchParams();
    if (opts.op) params.set("op", opts.op);
    if (opts.from) params.set("from", opts.from);
    if (opts.to) params.set("to", opts.to);
    if (opts.site) params.set("site", opts.site);
    const qs = params.toString();
    return this.request("GET", `/api/v1/services/${encodeURIComponent(id)}/probes${qs ? "?" + qs : ""}`);
  }

  summary(id: string, op = "get_capabilities"): Promise<QoSSummary> {
    return this.request("GET", `/api/v1/services/${encodeURIComponent(id)}/summary?op=${op}`);
  }

  folded(id: string, op = "get_capabilities", cycleDays = 6): Promise<FoldedSeries> {
    return this.request(
      "GET",
      `/api/v1/services/${encodeURIComponent(id)}/folded?op=${op}&cycle_days=${cycleDays}`,
    );
  }

  campaigns(): Promise<Campaign[]> {
    return this.request("GET", "/api/v1/campaigns");
  }

  campaign(id: string): Promise<Campaign> {
    return this.request("GET", `/api/v1/campaigns/${encodeURIComponent(id)}`);
  }

  campaignReport(id: string): Promise<CampaignReport> {
    return this.request("GET", `/api/v1/campaigns/${encodeURIComponent(id)}/report`);
  }

  createCampaign(draft: CampaignDraft): Promise<Campaign> {
    return this.request("POST", "/api/v1/campaigns", draft);
  }

  pauseCampaign(id: string): Promise<Campaign> {
    return this.request("POST", `/api/v1/campaigns/${encodeURIComponent(id)}/pause`);
  }

  resumeCampaign(id: string): Promise<Campaign> {
    return this.request("POST", `/api/v1/campaigns/${encodeURIComponent(id)}/resume`);
  }
}
