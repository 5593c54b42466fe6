// Runtime configuration: a single config.json next to the static bundle.

export interface PortalConfig {
  apiBase: string;
  pollIntervalMs: number;
}

const DEFAULTS: PortalConfig = {
  apiBase: "http://127.0.0.1:8375",
  pollIntervalMs: 10_000,
};

export async function loadConfig(fetchImpl: typeof fetch = fetch): Promise<PortalConfig> {
  try {
    const resp = await fetchImpl("config.json");
    if (!resp.ok) return DEFAULTS;
    const body = (await resp.json()) as Partial<PortalConfig>;
    return { ...DEFAULTS, ...body };
  } catch {
    return DEFAULTS;
  }
}
