"""Survey statistics and QoS analysis over stored records and metadata."""

from .coverage import CoverageGrid, coverage_grid, split_antimeridian
from .diurnal import (
    DiurnalSeries,
    diurnal_series,
    timezone_offset_from_longitude,
)
from .geo import (
    EARTH_RADIUS_KM,
    ClosestSiteAnalysis,
    RegressionSummary,
    closest_site_analysis,
    distance_latency_regression,
    haversine_km,
    regression_for_service,
)
from .histogram import Bin, density_histogram
from .keywords import keyword_frequency, layer_keywords, noun_lexicon, stop_words
from .powerlaw import (
    PowerLawFit,
    PowerLawSampler,
    continuous_cdf,
    discrete_cdf,
    fit_power_law,
    ks_distance,
)
from .qos import (
    AccessibilityClass,
    QoSSummary,
    classify_accessibility,
    error_shares,
    successability,
    summarize,
)
from .years import YearlyDistribution, yearly_distribution

__all__ = [
    "AccessibilityClass",
    "Bin",
    "ClosestSiteAnalysis",
    "CoverageGrid",
    "DiurnalSeries",
    "EARTH_RADIUS_KM",
    "PowerLawFit",
    "PowerLawSampler",
    "QoSSummary",
    "RegressionSummary",
    "YearlyDistribution",
    "classify_accessibility",
    "closest_site_analysis",
    "continuous_cdf",
    "coverage_grid",
    "density_histogram",
    "discrete_cdf",
    "distance_latency_regression",
    "diurnal_series",
    "error_shares",
    "fit_power_law",
    "haversine_km",
    "keyword_frequency",
    "ks_distance",
    "layer_keywords",
    "noun_lexicon",
    "regression_for_service",
    "split_antimeridian",
    "stop_words",
    "successability",
    "summarize",
    "timezone_offset_from_longitude",
    "yearly_distribution",
]
