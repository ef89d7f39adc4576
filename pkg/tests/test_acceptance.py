"""End-to-end acceptance checks, one test per criterion, each with its time budget.

A summary line per criterion is printed at the end of the pytest run.
"""
import io
import itertools
import time
from contextlib import contextmanager

import numpy as np

from conftest import ACCEPTANCE_LINES
from revrom.circuit import analyze, garbage_wires, single_gate
from revrom.gates import GateKind, eval_backward, eval_gate, is_reversible, truth_table
from revrom.netio import write_vcd
from revrom.simfunc import SimState, check_injective, evaluate, run, run_backward, step
from revrom.switchsim import backend_equivalence, elaborate, equivalence, gate_netlist, run_switch
from revrom.synth import RomParams, build_decoder, build_dff, build_rom, crosscheck


@contextmanager
def criterion(number, title, budget=None):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        limit = f" (budget {budget:g}s)" if budget is not None else ""
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}  {elapsed:.2f}s{limit}")


def test_criterion_1_gate_library():
    with criterion(1, "gate library bijection, inverse, NP equations, printed-table erratum", 1.0):
        for kind in GateKind:
            rows = truth_table(kind)
            assert is_reversible([y for _, y in rows])
            assert all(eval_backward(kind, y) == x for x, y in rows)
        for a, b, c, d in itertools.product((0, 1), repeat=4):
            r = ((1 - a) & c) ^ (a & b)
            want = (a, ((1 - a) & b) ^ (a & (1 - c)), r, r ^ d)
            assert eval_gate("NP", (a, b, c, d)) == want
        # the printed table's A=1 half repeats the A=0 pattern
        printed = lambda a, b, c, d: (a, b, c, c ^ d)
        wrong = [x for x in itertools.product((0, 1), repeat=4) if eval_gate("NP", x) != printed(*x)]
        assert len(wrong) == 8 and all(x[0] == 1 for x in wrong)


def test_criterion_2_decoder():
    with criterion(2, "decoder counts for n=2..6 and exhaustive one-hot", 1.0):
        for n in range(2, 7):
            nl = build_decoder(n)
            r = analyze(nl)
            assert r.transistor_count == 4 * 2**n - 3
            assert r.gate_count == 2**n - 3
            assert r.garbage_outputs == n - 2
            lanes = np.arange(2**n)
            addr = {f"I{i + 1}": ((lanes >> (n - 1 - i)) & 1).astype(np.uint8) for i in range(n)}
            vals = evaluate(nl, addr)
            grid = np.stack([np.broadcast_to(vals[f"Y{i}"], lanes.shape) for i in range(2**n)])
            assert (grid == np.eye(2**n, dtype=np.uint8)).all()
        assert analyze(build_decoder(2)).transistor_count == 13


def test_criterion_3_dff():
    with criterion(3, "D flip-flop costs and 1000 x 64 random sequences"):
        r = analyze(build_dff(False))
        assert (r.gate_count, r.garbage_outputs, r.quantum_cost, r.transistor_count, r.delay) == (1, 2, 5, 9, 5)
        nl2 = build_dff(True)
        r = analyze(nl2)
        assert (r.gate_count, r.quantum_cost, r.transistor_count, r.delay) == (2, 6, 12, 6)
        assert r.garbage_outputs == 2
        assert nl2.meta["paper_claims"]["garbage"] == 1

        nl = build_dff(False)
        rng = np.random.default_rng(1)
        mismatches = 0
        for seq in rng.integers(0, 2, size=(1000, 64, 2)):
            state, q = SimState.initial(nl), 0
            for e, d in seq:
                state = step(nl, state, {"E": int(e), "D": int(d)})
                q = (e & d) | ((1 - e) & q)
                mismatches += state["Q"] != q
        assert mismatches == 0


def test_criterion_4_rom_counts():
    with criterion(4, "ROM cost theorems against constructed netlists", 10.0):
        rep = crosscheck(RomParams(4, 2, 2))
        got = rep.measured
        assert (got.gate_count, got.transistor_count, got.garbage_outputs) == (82, 522, 88)
        assert rep.ok
        assert build_rom(n=4, m=2, k=2).meta["paper_claims"]["garbage"] == 18
        rep = crosscheck(RomParams(4, 4, 2))
        got = rep.measured
        assert (got.gate_count, got.transistor_count, got.garbage_outputs) == (146, 938, 152)
        assert rep.ok
        for n, m in itertools.product((4, 5, 6), (1, 2, 4)):
            for k in range(2, n - 1):
                assert crosscheck(RomParams(n, m, k)).ok, (n, m, k)


def test_criterion_5_rom_behavior():
    with criterion(5, "rom(4,2,2) address sweep over 20 random data fills", 5.0):
        nl = build_rom(n=4, m=2, k=2)
        rng = np.random.default_rng(9)
        for _ in range(20):
            data = rng.integers(0, 2, size=(16, 2))
            fill = {f"R{w + 1}D{j}": int(data[w, j]) for w in range(16) for j in range(2)}
            vecs = [{**fill, **{f"I{i + 1}": (a >> (3 - i)) & 1 for i in range(4)}} for a in range(16)]
            for a, row in enumerate(run(nl, vecs)):
                assert (row["Q0"], row["Q1"]) == tuple(data[a])


def test_criterion_6_switch_level():
    with criterion(6, "switch-level cells, latch hold, rom(4,1,2) against functional backend", 60.0):
        counts = {}
        for kind in ("FEYNMAN", "FREDKIN", "TOFFOLI", "HL", "NP"):
            assert equivalence(kind).ok, kind
            counts[kind] = len(gate_netlist(kind).transistors)
        assert sorted(counts.values()) == [3, 4, 5, 9, 13]

        sw = elaborate(build_dff())
        rng = np.random.default_rng(6)
        seq = rng.integers(0, 2, size=(64, 2))
        q, trace = 0, run_switch(sw, [{"E": int(e), "D": int(d)} for e, d in seq])
        for (e, d), row in zip(seq, trace):
            q = (e & d) | ((1 - e) & q)
            assert row[sw.wire_nets["Q"]] == q

        rom = build_rom(n=4, m=1, k=2)
        assert len(elaborate(rom).transistors) == 314
        res = backend_equivalence(rom, sample=1000, seed=7)
        assert res.ok, res.counterexample
        assert res.checked == 1000


def test_criterion_7_reversibility():
    with criterion(7, "backward evaluation identity and injectivity of combinational generators"):
        circuits = [build_decoder(2), build_decoder(3)] + [single_gate(k) for k in GateKind]
        for nl in circuits:
            observed = list(nl.outputs) + garbage_wires(nl)
            for bits in itertools.product((0, 1), repeat=len(nl.inputs)):
                fwd = evaluate(nl, dict(zip(nl.inputs, bits)))
                back = run_backward(nl, {w: fwd[w] for w in observed})
                assert tuple(back[w] for w in nl.inputs) == bits
        generated = [build_decoder(n) for n in range(2, 11)] + [single_gate(k) for k in GateKind]
        for nl in generated:
            assert nl.is_combinational and len(nl.inputs) <= 10
            assert check_injective(nl), nl.name


def test_criterion_8_waveforms_replace_electrical_timing():
    # electrical timing diagrams and percentage comparisons with other designs are out of scope;
    # logic waveforms are emitted as VCD instead
    with criterion(8, "out of scope: electrical timing; VCD logic waveform emitted instead"):
        nl = build_rom(n=4, m=2, k=2)
        fill = {f"R{w + 1}D{j}": (w >> j) & 1 for w in range(16) for j in range(2)}
        vecs = [{**fill, **{f"I{i + 1}": (a >> (3 - i)) & 1 for i in range(4)}} for a in range(16)]
        buf = io.StringIO()
        write_vcd(buf, run(nl, vecs), signals=list(nl.inputs[:4]) + list(nl.outputs), scope=nl.name)
        text = buf.getvalue()
        assert "$enddefinitions" in text
        assert "#15" in text
