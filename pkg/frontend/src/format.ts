// Display transforms only: sorting, unit formatting, color coding.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatMs(ms: number | null | undefined): string {
  if (ms === null || ms === undefined) return "–";
  if (ms >= 10_000) return `${(ms / 1000).toFixed(1)} s`;
  return `${Math.round(ms)} ms`;
}

export function formatPercent(ratio: number | null | undefined, digits = 1): string {
  if (ratio === null || ratio === undefined) return "–";
  return `${(ratio * 100).toFixed(digits)}%`;
}

export function formatBytes(n: number): string {
  if (n >= 1_048_576) return `${(n / 1_048_576).toFixed(1)} MiB`;
  if (n >= 1024) return `${(n / 1024).toFixed(1)} KiB`;
  return `${n} B`;
}

export function livenessColor(liveness: string): string {
  switch (liveness) {
    case "valid":
      return "#2f9e44";
    case "invalid":
      return "#e03131";
    default:
      return "#868e96";
  }
}

export function siteColor(role: string, active: boolean): string {
  if (!active) return "#adb5bd";
  return role === "routine" ? "#1971c2" : role === "alternate" ? "#f08c00" : "#9c36b5";
}

export function accessibilityBadgeColor(cls: string | undefined): string {
  switch (cls) {
    case "always-accessible":
      return "#2f9e44";
    case "temporally-inaccessible":
      return "#f08c00";
    case "constantly-inaccessible":
      return "#e03131";
    default:
      return "#868e96";
  }
}

export function hostOf(url: string): string {
  try {
    return new URL(url).host;
  } catch {
    return url;
  }
}
