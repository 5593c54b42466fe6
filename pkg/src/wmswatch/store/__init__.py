"""Persistence and the REST data-access service."""

from .campaigns import CampaignService
from .db import CLOCK_SKEW_ALLOWANCE_S, Store
from .rest import RestApi, RestServer, serve_rest

__all__ = [
    "CLOCK_SKEW_ALLOWANCE_S",
    "CampaignService",
    "RestApi",
    "RestServer",
    "Store",
    "serve_rest",
]
