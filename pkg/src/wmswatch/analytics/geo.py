"""Spatial response-time analysis: distance, regression, closest-site study."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import MissingGeolocation, TooFewSites, ZeroVariance
from ..model.types import ServiceRecord
from ..scheduler.types import MonitoringSite

EARTH_RADIUS_KM = 6371.0


def haversine_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in kilometres between (lat, lon) points."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = (math.sin(dlat / 2.0) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2)
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


@dataclass(frozen=True)
class RegressionSummary:
    slope: float
    intercept: float
    r_squared: float
    n_sites: int
    zero_variance_rt: bool = False

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "r_squared": self.r_squared, "n_sites": self.n_sites,
                "zero_variance_rt": self.zero_variance_rt}


def distance_latency_regression(distances_km: Sequence[float],
                                rt_avg_ms: Sequence[float]) -> RegressionSummary:
    """Ordinary least squares of average response time on distance.

    Raises TooFewSites below three points and ZeroVariance when all
    distances coincide.  A constant response time is not an error: the
    slope is zero and R-squared reported as zero with a flag.
    """
    n = len(distances_km)
    if n != len(rt_avg_ms):
        raise ValueError("distances and response times must align")
    if n < 3:
        raise TooFewSites(f"regression needs >= 3 sites, got {n}")
    mean_d = sum(distances_km) / n
    mean_y = sum(rt_avg_ms) / n
    ss_dd = sum((d - mean_d) ** 2 for d in distances_km)
    ss_yy = sum((y - mean_y) ** 2 for y in rt_avg_ms)
    if ss_dd == 0.0:
        raise ZeroVariance("all distances equal; slope undefined")
    if ss_yy == 0.0:
        return RegressionSummary(slope=0.0, intercept=mean_y, r_squared=0.0,
                                 n_sites=n, zero_variance_rt=True)
    ss_dy = sum((d - mean_d) * (y - mean_y)
                for d, y in zip(distances_km, rt_avg_ms))
    slope = ss_dy / ss_dd
    intercept = mean_y - slope * mean_d
    ss_res = sum((y - (intercept + slope * d)) ** 2
                 for d, y in zip(distances_km, rt_avg_ms))
    return RegressionSummary(slope=slope, intercept=intercept,
                             r_squared=1.0 - ss_res / ss_yy, n_sites=n)


def regression_for_service(service: ServiceRecord,
                           sites: Sequence[MonitoringSite],
                           rt_by_site: Mapping[str, float]) -> RegressionSummary:
    """Distance/latency regression for one service across its sites."""
    if service.server_location is None:
        raise MissingGeolocation(f"service {service.id} has no coordinates")
    loc = (service.server_location.lat, service.server_location.lon)
    pairs = [
        (haversine_km(loc, (s.location.lat, s.location.lon)), rt_by_site[s.site_id])
        for s in sites if s.site_id in rt_by_site
    ]
    return distance_latency_regression([d for d, _ in pairs],
                                       [rt for _, rt in pairs])


@dataclass
class ClosestSiteAnalysis:
    fraction_closest_is_fastest: float
    n_services: int
    n_skipped: int
    # continent_matrix[server_continent][site_continent] = share of services
    # on that server continent whose fastest site sits on that site continent
    continent_matrix: dict[str, dict[str, float]]

    def to_dict(self) -> dict:
        return {
            "fraction_closest_is_fastest": self.fraction_closest_is_fastest,
            "n_services": self.n_services,
            "n_skipped": self.n_skipped,
            "continent_matrix": {k: dict(v) for k, v in self.continent_matrix.items()},
        }


def closest_site_analysis(services: Sequence[ServiceRecord],
                          sites: Sequence[MonitoringSite],
                          rt_by_service_site: Mapping[tuple[str, str], float]
                          ) -> ClosestSiteAnalysis:
    """How often is the geographically closest site also the fastest?

    Argmin ties break on the lowest site_id, which keeps fixture tables
    deterministic.  Services without geolocation or without any measured
    site are skipped and tallied.  Matrix rows each sum to one.
    """
    n_match = 0
    n_used = 0
    n_skipped = 0
    matrix_counts: dict[str, dict[str, int]] = {}

    site_list = sorted(sites, key=lambda s: s.site_id)
    for svc in services:
        measured = [s for s in site_list
                    if (svc.id, s.site_id) in rt_by_service_site]
        if svc.server_location is None or not measured:
            n_skipped += 1
            continue
        loc = (svc.server_location.lat, svc.server_location.lon)
        closest = min(measured, key=lambda s: (
            haversine_km(loc, (s.location.lat, s.location.lon)), s.site_id))
        fastest = min(measured, key=lambda s: (
            rt_by_service_site[(svc.id, s.site_id)], s.site_id))
        n_used += 1
        if closest.site_id == fastest.site_id:
            n_match += 1
        server_cont = svc.server_location.continent or "unknown"
        site_cont = fastest.location.continent or "unknown"
        row = matrix_counts.setdefault(server_cont, {})
        row[site_cont] = row.get(site_cont, 0) + 1

    matrix = {
        server_cont: {site_cont: count / sum(row.values())
                      for site_cont, count in row.items()}
        for server_cont, row in matrix_counts.items()
    }
    if n_used == 0:
        raise MissingGeolocation("no service had geolocation and measurements")
    return ClosestSiteAnalysis(
        fraction_closest_is_fastest=n_match / n_used,
        n_services=n_used, n_skipped=n_skipped, continent_matrix=matrix)
