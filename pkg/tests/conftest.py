import numpy as np
import pytest

from mpdsim.geometry import PhysicalSetup, PlaneSpec


@pytest.fixture(scope="session")
def sim1_setup() -> PhysicalSetup:
    """Two-plane triple-slit layout used throughout the correlation tests
    (slit separation 8 widths keeps the overlap terms below 1e-9)."""
    dx, b1, b2, ds = 8.0, 15.0, 30.0, 50.0
    off = np.array([-dx, 0.0, dx])
    return PhysicalSetup(
        sigma0=130.0,
        planes=(PlaneSpec(tuple(ds + off * b1), b1), PlaneSpec(tuple(off * b2), b2)),
        times=(0.2, 0.1),
    )


@pytest.fixture(scope="session")
def sim2_setup() -> PhysicalSetup:
    """Three-plane path-interference layout."""
    return PhysicalSetup(
        sigma0=200.0,
        planes=(
            PlaneSpec((-100.0, 100.0), 25.0),
            PlaneSpec((140.0,), 35.0),
            PlaneSpec((143.0,), 45.0),
        ),
        times=(0.5, 0.2, 0.1),
    )


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
