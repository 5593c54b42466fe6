"""Unit-area histograms: density = frequency / (total_frequency * bin_width)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptySamples


@dataclass(frozen=True)
class Bin:
    left: float
    right: float
    count: int
    density: float


def density_histogram(samples, bin_width: float) -> list[Bin]:
    """Histogram whose densities integrate to exactly one.

    Bins are aligned to multiples of ``bin_width`` starting at the bin
    containing the smallest sample; the rightmost edge is inclusive so the
    maximum lands in the last bin.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    x = np.asarray(list(samples), dtype=float)
    if x.size == 0:
        raise EmptySamples("histogram over zero samples")

    left_edge = math.floor(x.min() / bin_width) * bin_width
    n_bins = max(int(math.ceil((x.max() - left_edge) / bin_width)), 1)
    # a maximum sitting exactly on the rightmost edge needs its own bin
    if x.max() >= left_edge + n_bins * bin_width:
        n_bins += 1
    edges = left_edge + bin_width * np.arange(n_bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    total = x.size
    return [
        Bin(left=float(edges[i]), right=float(edges[i + 1]),
            count=int(counts[i]),
            density=counts[i] / (total * bin_width))
        for i in range(n_bins)
    ]
