"""Yearly distribution of layer collection times and service currency."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..model.timedim import extract_layer_years
from ..model.types import LayerRecord


@dataclass
class YearlyDistribution:
    """Per-year layer counts and the count of services whose *newest* dated
    layer falls in that year."""

    layer_count: dict[int, int] = field(default_factory=dict)
    services_with_latest_layer_count: dict[int, int] = field(default_factory=dict)
    dated_layers: int = 0
    dated_services: int = 0

    def share_of_services_with_latest_before(self, year: int) -> float:
        """Fraction of dated services whose newest layer predates ``year``."""
        if not self.dated_services:
            return 0.0
        older = sum(count for y, count in
                    self.services_with_latest_layer_count.items() if y < year)
        return older / self.dated_services

    def to_dict(self) -> dict:
        return {
            "layer_count": {str(y): c for y, c in sorted(self.layer_count.items())},
            "services_with_latest_layer_count": {
                str(y): c for y, c in
                sorted(self.services_with_latest_layer_count.items())},
            "dated_layers": self.dated_layers,
            "dated_services": self.dated_services,
        }


def yearly_distribution(layers_by_service: Mapping[str, Sequence[LayerRecord]]
                        ) -> YearlyDistribution:
    """Tabulate collection years over services' layer sets.

    A layer contributes to every year in its extracted year set; a service
    contributes once to the year of its newest dated layer.  Undated layers
    and services with no dated layer contribute nothing.
    """
    out = YearlyDistribution()
    for _service_id, layers in layers_by_service.items():
        latest: int | None = None
        for layer in layers:
            years = extract_layer_years(layer)
            if not years:
                continue
            out.dated_layers += 1
            for year in years:
                out.layer_count[year] = out.layer_count.get(year, 0) + 1
            newest = max(years)
            latest = newest if latest is None else max(latest, newest)
        if latest is not None:
            out.dated_services += 1
            out.services_with_latest_layer_count[latest] = \
                out.services_with_latest_layer_count.get(latest, 0) + 1
    return out
