import random

import numpy as np
import pytest

from wmswatch.analytics import density_histogram
from wmswatch.errors import EmptySamples


def test_density_formula():
    # 100 samples, 10 land in one 0.5-wide bin -> density 0.2 exactly
    samples = [0.1] * 10 + [1.2] * 90
    bins = density_histogram(samples, 0.5)
    first = bins[0]
    assert first.count == 10
    assert first.density == 0.2
    assert first.density == first.count / (100 * 0.5)


def test_single_bin_density_is_inverse_width():
    bins = [b for b in density_histogram([2.1] * 7, 0.25) if b.count]
    assert len(bins) == 1
    assert bins[0].density == pytest.approx(1 / 0.25)


def test_integral_is_one_random_samples():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 500)
        width = rng.choice([0.1, 0.5, 1.0, 2.5])
        samples = [rng.gauss(5, 3) for _ in range(n)]
        bins = density_histogram(samples, width)
        integral = sum(b.density * width for b in bins)
        assert abs(integral - 1.0) <= 1e-9


def test_counts_match_numpy_oracle():
    rng = np.random.default_rng(3)
    samples = rng.exponential(2.0, size=1000)
    width = 0.5
    bins = density_histogram(samples, width)
    assert sum(b.count for b in bins) == 1000
    # every sample falls into exactly one [left, right) bin (max into the last)
    for b in bins:
        inside = np.sum((samples >= b.left) & (samples < b.right))
        if b.right >= samples.max() > b.left:
            inside = np.sum((samples >= b.left) & (samples <= b.right))
        assert b.count == inside


def test_empty_rejected():
    with pytest.raises(EmptySamples):
        density_histogram([], 0.5)
    with pytest.raises(ValueError):
        density_histogram([1.0], 0.0)
