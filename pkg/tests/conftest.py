"""Shared fixtures: a suite of smooth, strictly positive test densities."""

import numpy as np
import pytest

from cdtkit import density


def smooth_fixture_suite(n_bins: int = 1024):
    """Ten smooth, strictly positive densities on [0, 1].

    Dynamic range is kept moderate (roughly [0.3, 2.6] before normalization)
    so piecewise-linear transport maps resolve them well at kilobin grids.
    """
    spacing = 1.0 / n_bins
    y = spacing * (np.arange(n_bins) + 0.5)

    def bump(c, w):
        return np.exp(-0.5 * ((y - c) / w) ** 2)

    shapes = [
        1.0 + 0.3 * np.sin(2 * np.pi * y),
        0.4 + 2.2 * bump(0.5, 0.12),
        0.35 + 1.2 * bump(0.3, 0.08) + 0.8 * bump(0.7, 0.1),
        0.5 + y,
        1.55 - 0.9 * y,
        0.4 + 4.0 * y * np.exp(-3.0 * y),
        0.6 + 0.8 * np.cos(3.0 * y) ** 2,
        np.exp(0.8 * y),
        0.45 + 1.8 * bump(0.15, 0.1),
        1.2 - 0.6 * bump(0.5, 0.15),
    ]
    return [
        density.from_samples(s, 0.5 * spacing, spacing, epsilon_floor=0.0)
        for s in shapes
    ]


@pytest.fixture(scope="session")
def smooth_fixtures():
    return smooth_fixture_suite()
