import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revrom.circuit import (
    CostReport,
    GateInstance,
    Netlist,
    NetlistError,
    analyze,
    compose,
    garbage_wires,
    longest_path,
    single_gate,
    topological_order,
    validate,
)
from revrom.gates import GateKind, metadata
from revrom.synth import build_decoder, build_dff, build_rom


def _chain_np_feynman():
    """NP gate whose S output drives a Feynman target, the flip-flop-with-complement shape."""
    return Netlist(
        name="np_feynman",
        wires=["a", "b", "c", "d", "p", "q", "r", "s", "one", "x", "y"],
        gates=[
            GateInstance("np", "NP", ["a", "b", "c", "d"], ["p", "q", "r", "s"]),
            GateInstance("fg", "FEYNMAN", ["s", "one"], ["x", "y"]),
        ],
        inputs=["a", "b", "c", "d"],
        outputs=["p", "q", "r", "x", "y"],
        constants={"one": 1},
    )


def test_generated_decoder_is_valid():
    assert validate(build_decoder(2)) == []


def test_fanout_is_one_violation(fanout_netlist):
    problems = validate(fanout_netlist)
    assert len(problems) == 1
    assert "fan-out" in problems[0]


def test_undeclared_cycle_is_one_violation(cycle_netlist):
    problems = validate(cycle_netlist)
    assert len(problems) == 1
    assert "cycle" in problems[0]


def test_declared_state_wire_breaks_cycle(cycle_netlist):
    from dataclasses import replace

    ok = replace(cycle_netlist, state_wires=("y",))
    assert validate(ok) == []
    assert [g.id for g in topological_order(ok)] == ["g1", "g2"]


@pytest.mark.parametrize(
    "kwargs,fragment",
    [
        (dict(gates=[GateInstance("g", "FEYNMAN", ["a"], ["p", "q"])]), "needs 2"),
        (dict(gates=[GateInstance("g", "FEYNMAN", ["a", "zz"], ["p", "q"])]), "zz"),
        (
            dict(
                gates=[
                    GateInstance("g", "FEYNMAN", ["a", "b"], ["p", "q"]),
                    GateInstance("g", "FEYNMAN", ["p", "q"], ["r", "s"]),
                ],
                wires=["a", "b", "p", "q", "r", "s"],
                outputs=["r", "s"],
            ),
            "duplicate",
        ),
        (dict(outputs=["p", "nowhere"], wires=["a", "b", "p", "q", "nowhere"]), "nowhere"),
        (dict(constants={"a": 0}), "a"),
    ],
)
def test_structural_violations(kwargs, fragment):
    base = dict(
        name="t",
        wires=["a", "b", "p", "q"],
        gates=[GateInstance("g", "FEYNMAN", ["a", "b"], ["p", "q"])],
        inputs=["a", "b"],
        outputs=["p", "q"],
    )
    base.update(kwargs)
    problems = validate(Netlist(**base))
    assert problems
    assert any(fragment in p for p in problems)


def test_dangling_gate_input_is_reported():
    nl = Netlist(
        name="t",
        wires=["a", "b", "p", "q"],
        gates=[GateInstance("g", "FEYNMAN", ["a", "b"], ["p", "q"])],
        inputs=["a"],
        outputs=["p", "q"],
    )
    assert any("b" in p for p in validate(nl))


def test_two_drivers_is_reported():
    nl = Netlist(
        name="t",
        wires=["a", "b", "q"],
        gates=[GateInstance("g", "FEYNMAN", ["a", "b"], ["a", "q"])],
        inputs=["a", "b"],
        outputs=["q"],
    )
    assert validate(nl)


def test_analyze_rejects_invalid_netlist(fanout_netlist):
    with pytest.raises(NetlistError, match="fan-out"):
        analyze(fanout_netlist)
    with pytest.raises(NetlistError):
        longest_path(fanout_netlist)


def test_analyze_dff():
    assert analyze(build_dff(False)) == CostReport(
        gate_count=1, quantum_cost=5, transistor_count=9, garbage_outputs=2, constant_inputs=1, delay=5
    )


def test_analyze_dff_with_complement():
    r = analyze(build_dff(True))
    assert (r.gate_count, r.quantum_cost, r.transistor_count, r.delay, r.garbage_outputs) == (2, 6, 12, 6, 2)


def test_analyze_rom_16x2():
    r = analyze(build_rom(n=4, m=2, k=2))
    assert (r.gate_count, r.transistor_count, r.garbage_outputs) == (82, 522, 88)


def test_analyze_passthrough_is_all_zero(passthrough_netlist):
    assert analyze(passthrough_netlist).as_dict() == {
        "gate_count": 0,
        "quantum_cost": 0,
        "transistor_count": 0,
        "garbage_outputs": 0,
        "constant_inputs": 0,
        "delay": 0,
    }


def test_longest_path_examples(passthrough_netlist):
    assert longest_path(single_gate("NP")) == 5
    assert longest_path(_chain_np_feynman()) == 6
    assert longest_path(passthrough_netlist) == 0


def test_longest_path_takes_the_slowest_branch():
    # HL (7) feeding a Feynman (1) on one branch; a lone Fredkin (5) beside it
    nl = Netlist(
        name="branches",
        wires=["a", "b", "c", "d", "p", "q", "r", "s", "x", "y", "e", "f", "g", "u", "v", "w"],
        gates=[
            GateInstance("hl", "HL", ["a", "b", "c", "d"], ["p", "q", "r", "s"]),
            GateInstance("fg", "FEYNMAN", ["p", "q"], ["x", "y"]),
            GateInstance("fr", "FREDKIN", ["e", "f", "g"], ["u", "v", "w"]),
        ],
        inputs=["a", "b", "c", "d", "e", "f", "g"],
        outputs=["x", "y", "r", "s", "u", "v", "w"],
    )
    assert longest_path(nl) == 8


def test_state_wire_is_a_path_endpoint():
    assert longest_path(build_dff(False)) == 5


def test_garbage_wires_examples():
    assert garbage_wires(build_decoder(2)) == []
    assert sorted(garbage_wires(build_dff(False))) == ["ff.P", "ff.Q"]
    assert len(garbage_wires(build_decoder(3))) == 1


def test_cost_override_table():
    from dataclasses import replace

    from revrom.gates import DEFAULT_SPECS

    table = {GateKind.NP: replace(DEFAULT_SPECS[GateKind.NP], delay=2)}
    assert longest_path(_chain_np_feynman(), table) == 3
    assert analyze(_chain_np_feynman(), table).delay == 3


def test_compose_delay_is_additive():
    a, b = single_gate("NP"), single_gate("HL")
    assert longest_path(compose(a, b)) == longest_path(a) + longest_path(b)
    c = compose(compose(single_gate("FEYNMAN"), single_gate("FEYNMAN")), single_gate("FEYNMAN"))
    assert validate(c) == []
    assert longest_path(c) == 3


def test_compose_width_mismatch():
    with pytest.raises(ValueError):
        compose(single_gate("NP"), single_gate("FEYNMAN"))


GENERATED = [
    build_decoder(2),
    build_decoder(3),
    build_decoder(4),
    build_dff(False),
    build_dff(True),
    build_rom(n=4, m=1, k=2),
    build_rom(n=2, m=2, k=2),
]


@pytest.mark.parametrize("nl", GENERATED, ids=lambda nl: nl.name)
def test_quantum_cost_is_additive(nl):
    assert analyze(nl).quantum_cost == sum(metadata(g.kind).quantum_cost for g in nl.gates)
    assert analyze(nl).transistor_count == sum(metadata(g.kind).transistor_count for g in nl.gates)


@pytest.mark.parametrize("nl", GENERATED, ids=lambda nl: nl.name)
def test_garbage_plus_outputs_equals_unconsumed_gate_outputs(nl):
    consumed = {w for g in nl.gates for w in g.ins}
    unconsumed = [w for g in nl.gates for w in g.outs if w not in consumed]
    gate_driven_outputs = [w for w in nl.outputs if nl.sources[w][0].kind == "gate"]
    assert analyze(nl).garbage_outputs + len(gate_driven_outputs) == len(unconsumed)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_analyze_is_order_independent(data):
    nl = data.draw(st.sampled_from(GENERATED))
    perm = data.draw(st.permutations(list(nl.gates)))
    shuffled = nl.with_gates(perm)
    assert analyze(shuffled) == analyze(nl)
    assert sorted(garbage_wires(shuffled)) == sorted(garbage_wires(nl))


def test_netlist_is_immutable():
    nl = build_decoder(2)
    with pytest.raises(Exception):
        nl.name = "other"
