import numpy as np
import pytest

from cdpr import (
    PlanarCaseGeometry,
    ScanRegion,
    Variant,
    expand_planar,
    load_table1_preset,
)


@pytest.fixture(scope="session")
def planar() -> PlanarCaseGeometry:
    return load_table1_preset()


@pytest.fixture(scope="session")
def geom(planar):
    return expand_planar(planar, Variant.A)


@pytest.fixture(scope="session")
def region(geom) -> ScanRegion:
    return geom.scan


@pytest.fixture(scope="session")
def coarse_region(region) -> ScanRegion:
    """Same rectangle at a 0.25 m step: fast, still x-symmetric."""
    return ScanRegion(region.x_min, region.x_max, region.y_min, region.y_max, 0.25)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_poses(rng, count, x=(-12.0, 12.0), y=(-2.5, 2.0)):
    xs = rng.uniform(*x, size=count)
    ys = rng.uniform(*y, size=count)
    return np.column_stack([xs, ys])


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criteria verdict lines at the end of the run."""
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:
        return
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.line(line)
