import pytest

from focalcong.chart import parse_chart

XBETA = """\
# tangent planes to the translation surface (1, u, u^2, v, v^2)
vars: u v
point: [1, u, u^2, v, v^2]
point: [0, 1, 2*u, 0, 0]
point: [0, 0, 0, 1, 2*v]
"""

XDELTA = """\
vars: u v
point: [1, 0, 0, 0, 0]
point: [0, 1, 0, 0, 0]
point: [0, 0, 1, u, v]
"""

CONE = """\
vars: u v
point: [0, 0, 0, 0, 1]
point: [1, u, 0, 0, 0]
point: [0, 0, 1, v, 0]
"""


@pytest.fixture
def xbeta():
    return parse_chart(XBETA)


@pytest.fixture
def xdelta():
    return parse_chart(XDELTA)


@pytest.fixture
def cone():
    return parse_chart(CONE)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
