"""Campaign planning and execution across monitoring sites."""

from .plan import (
    DEFAULT_PROVIDER_CAP,
    FoldedSeries,
    build_plan,
    fold_lattice_check,
    merge_cycle,
    partition_groups,
    select_candidates,
)
from .runner import (
    RealClock,
    RunReport,
    SimClock,
    host_of_url,
    run_campaign,
)
from .types import (
    CampaignConfig,
    CampaignMode,
    CampaignPlan,
    Fire,
    MonitoringSite,
    SiteLocation,
    SiteRole,
)

__all__ = [
    "CampaignConfig",
    "CampaignMode",
    "CampaignPlan",
    "DEFAULT_PROVIDER_CAP",
    "Fire",
    "FoldedSeries",
    "MonitoringSite",
    "RealClock",
    "RunReport",
    "SimClock",
    "SiteLocation",
    "SiteRole",
    "build_plan",
    "fold_lattice_check",
    "host_of_url",
    "merge_cycle",
    "partition_groups",
    "run_campaign",
    "select_candidates",
]
