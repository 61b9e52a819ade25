import math

import pytest

from pipeclimb import (
    BendSegment,
    PipeNetwork,
    RobotConfig,
    SpringConfig,
    StraightSegment,
)

V_REF = 350.0 / 9.0  # 350 mm climbed in 9 s


@pytest.fixture
def elbow_network():
    """350 mm straight, 90 deg bend at R = 381 mm, 100 mm straight; r = 128 mm."""
    return PipeNetwork(
        128.0,
        [StraightSegment(350.0), BendSegment(381.0, math.pi / 2, 0.0, 1.5), StraightSegment(100.0)],
    )


@pytest.fixture
def robot():
    return RobotConfig(contact_radius=128.0, spring=SpringConfig(4.0, 5.0), nominal_speed=V_REF)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
