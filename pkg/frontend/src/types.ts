// Payload shapes of the REST data-access service.  The portal renders only
// what the API returns; no client-side metric computation beyond display
// transforms.

export interface ServerLocation {
  lat: number;
  lon: number;
  country: string | null;
  continent: string | null;
}

export interface ServiceRecord {
  id: string;
  canonical_url: string;
  discovered_from: string;
  first_seen: string;
  last_seen: string;
  server_location: ServerLocation | null;
  provider_name: string | null;
  provider_type: string;
  publisher_software: string;
  liveness: "valid" | "invalid" | "unknown";
}

export interface ServicePage {
  items: ServiceRecord[];
  page: number;
  page_size: number;
  total: number;
}

export interface SiteLocation {
  lat: number;
  lon: number;
  city: string;
  country: string;
  continent: string;
}

export interface MonitoringSite {
  site_id: string;
  label: string;
  location: SiteLocation;
  role: "routine" | "intensive" | "alternate";
  active: boolean;
}

export interface TimingBreakdown {
  dns_ms: number;
  connect_ms: number;
  request_processing_ms: number;
  transfer_ms: number;
  total_ms: number;
}

export interface ProbeRecord {
  service_id: string;
  site_id: string;
  operation: string;
  started_at: string;
  timing: TimingBreakdown | null;
  response_bytes: number;
  download_speed_bytes_per_s: number | null;
  accessible: boolean;
  success: boolean;
  error_class: string | null;
  error_detail: string;
}

export interface QoSSummary {
  service_id: string;
  operation: string;
  n_probes: number;
  n_accessible?: number;
  n_success?: number;
  successability?: number;
  accessibility_class?: string;
  rt_min_ms?: number | null;
  rt_avg_ms?: number | null;
  rt_max_ms?: number | null;
}

export interface FoldedSeries {
  offsets_s: number[];
  gaps_s: number[];
  out_of_window: number[];
  max_gap_s: number;
}

export interface Campaign {
  campaign_id: string;
  config: Record<string, unknown>;
  state: "created" | "running" | "paused" | "done" | "cancelled";
  report: CampaignReport | null;
}

export interface CampaignReport {
  state?: string;
  due: number;
  fired: number;
  missed: number;
  late: number;
  missed_by_reason: Record<string, number>;
  lateness_histogram: Record<string, number>;
  failovers: Record<string, string>;
}

export interface CampaignDraft {
  campaign_id: string;
  mode: "routine" | "intensive";
  services: string[];
  sites: string[];
  start: string;
  operations: string[];
  records_per_day_target?: number;
  cycle_days?: number;
  duration_s?: number;
  slot_budget_s?: number;
  expected_probe_cost_s?: number;
  simulate?: boolean;
  latency_ms?: number;
  autostart?: boolean;
}
