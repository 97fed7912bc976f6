import numpy as np
import pytest

from tlphotons import LineParams, PiecewiseConstantWaveform
from tlphotons.photon_content import canonical_pulse


@pytest.fixture
def line():
    return LineParams()


@pytest.fixture
def canonical():
    return canonical_pulse()


@pytest.fixture
def unit_square():
    return PiecewiseConstantWaveform(((0.0, 1.0, 1.0),))


def random_bipolar_pulses(count, seed=20240811):
    """Deterministic family of exactly-bipolar piecewise-constant pulses."""
    rng = np.random.default_rng(seed)
    pulses = []
    while len(pulses) < count:
        n = int(rng.integers(2, 6))
        edges = np.sort(rng.uniform(-5.0, 5.0, size=n + 1))
        if np.min(np.diff(edges)) < 0.15:
            continue
        amps = rng.uniform(-2.0, 2.0, size=n)
        lengths = np.diff(edges)
        amps = amps - np.dot(amps, lengths) / np.sum(lengths)
        if np.max(np.abs(amps)) < 0.2:
            continue
        segs = tuple((float(edges[i]), float(edges[i + 1]), float(amps[i]))
                     for i in range(n))
        pulses.append(PiecewiseConstantWaveform(segs))
    return pulses


@pytest.fixture(scope="session")
def bipolar_family():
    return random_bipolar_pulses(50)
