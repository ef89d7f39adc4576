import pytest

from revrom.circuit import GateInstance, Netlist

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fanout_netlist():
    """One input wire feeding two Feynman gate inputs."""
    return Netlist(
        name="fanout",
        wires=["a", "b", "p", "q"],
        gates=[GateInstance("g", "FEYNMAN", ["a", "a"], ["p", "q"])],
        inputs=["a", "b"],
        outputs=["p", "q"],
    )


@pytest.fixture
def cycle_netlist():
    """Two Feynman gates feeding each other with no declared state wire."""
    return Netlist(
        name="cycle",
        wires=["a", "b", "x", "y", "p", "q"],
        gates=[
            GateInstance("g1", "FEYNMAN", ["a", "y"], ["p", "x"]),
            GateInstance("g2", "FEYNMAN", ["b", "x"], ["q", "y"]),
        ],
        inputs=["a", "b"],
        outputs=["p", "q"],
    )


@pytest.fixture
def passthrough_netlist():
    return Netlist(name="wires", wires=["a", "b"], gates=[], inputs=["a", "b"], outputs=["a", "b"])
