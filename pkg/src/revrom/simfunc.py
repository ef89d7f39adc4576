"""Gate-level simulation: level-sensitive stepping, mirror evaluation, injectivity.

Latches are transparent: a step re-evaluates the netlist, feeding state wires
back, until no state wire changes.  Generated circuits settle in two passes
(one to compute, one to confirm); anything still moving after
``MAX_SETTLE`` passes is reported as an oscillation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Netlist, NetlistError, garbage_wires, validate
from .gates import eval_backward, eval_lanes

__all__ = [
    "SimulationError",
    "OscillationError",
    "InconsistencyError",
    "CapacityError",
    "SimState",
    "evaluate",
    "step",
    "run",
    "run_backward",
    "check_injective",
    "exhaustive_vectors",
    "MAX_SETTLE",
    "MAX_INJECTIVE_INPUTS",
]

MAX_SETTLE = 4
MAX_INJECTIVE_INPUTS = 20


class SimulationError(RuntimeError):
    """Base class for simulation failures; ``step`` is the failing vector index."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class OscillationError(SimulationError):
    pass


class InconsistencyError(SimulationError):
    pass


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class SimState:
    values: Mapping[str, int] = field(default_factory=dict)
    step: int = 0
    iterations: int = 0

    @classmethod
    def initial(cls, netlist: Netlist, init: int = 0) -> "SimState":
        if init not in (0, 1):
            raise ValueError(f"initial state must be 0 or 1, got {init!r}")
        return cls({w: init for w in netlist.state_wires})

    def __getitem__(self, wire: str) -> int:
        return self.values[wire]


def _require_valid(netlist: Netlist) -> None:
    problems = validate(netlist)
    if problems:
        raise NetlistError(f"invalid netlist {netlist.name!r}: {problems[0]}")


def evaluate(netlist: Netlist, assignment: Mapping[str, object]) -> dict[str, object]:
    """One combinational pass; ``assignment`` covers primary inputs and state wires.

    Values may be ints or numpy arrays (evaluated lane-wise).
    """
    vals: dict[str, object] = dict(netlist.constants)
    vals.update(assignment)
    for g in netlist.schedule:
        outs = eval_lanes(g.kind, *(vals[w] for w in g.ins))
        for w, v in zip(g.outs, outs):
            vals[w] = v
    return vals


def _check_inputs(netlist: Netlist, inputs: Mapping[str, int]) -> dict[str, int]:
    missing = [w for w in netlist.inputs if w not in inputs]
    if missing:
        raise ValueError(f"input assignment is missing {missing[:5]}")
    out = {}
    for w in netlist.inputs:
        v = int(inputs[w])
        if v not in (0, 1):
            raise ValueError(f"input {w!r} must be 0 or 1, got {inputs[w]!r}")
        out[w] = v
    return out


def step(netlist: Netlist, state: SimState, inputs: Mapping[str, int], *, max_iterations: int = MAX_SETTLE) -> SimState:
    """Apply one input vector and let every transparent latch settle."""
    _require_valid(netlist)
    inputs = _check_inputs(netlist, inputs)
    held = {w: state.values.get(w, 0) for w in netlist.state_wires}
    for it in range(1, max_iterations + 1):
        vals = evaluate(netlist, {**inputs, **held})
        new = {w: vals[w] for w in netlist.state_wires}
        if new == held:
            return SimState(vals, state.step + 1, it)
        held = new
    raise OscillationError(
        f"{netlist.name}: state wires did not settle within {max_iterations} passes", state.step
    )


def run(netlist: Netlist, vectors: Iterable[Mapping[str, int]], init: int = 0) -> list[dict[str, int]]:
    """Step through ``vectors``; returns one dict of all wire values per step."""
    state = SimState.initial(netlist, init)
    trace = []
    for i, vec in enumerate(vectors):
        try:
            state = step(netlist, state, vec)
        except OscillationError as exc:
            raise OscillationError(str(exc), i) from None
        trace.append(dict(state.values))
    return trace


def run_backward(netlist: Netlist, outputs: Mapping[str, int]) -> dict[str, int]:
    """Invert a combinational netlist gate by gate, last gate first.

    ``outputs`` must assign every primary output and garbage wire.  Returns
    the recovered primary inputs and constant wires; a recovered constant that
    differs from its declared value raises :class:`InconsistencyError`.
    """
    _require_valid(netlist)
    if netlist.state_wires:
        raise ValueError("run_backward needs a combinational netlist")
    needed = list(netlist.outputs) + garbage_wires(netlist)
    missing = [w for w in needed if w not in outputs]
    if missing:
        raise ValueError(f"backward evaluation needs values for {missing[:5]}")
    known = {w: int(outputs[w]) for w in needed}
    for g in reversed(netlist.schedule):
        for w, v in zip(g.ins, eval_backward(g.kind, [known[w] for w in g.outs])):
            known[w] = v
    bad = {w: known[w] for w, v in netlist.constants.items() if known[w] != v}
    if bad:
        raise InconsistencyError(f"recovered constants {bad} differ from their declared values")
    result = {w: known[w] for w in netlist.inputs}
    result.update({w: known[w] for w in netlist.constants})
    return result


def exhaustive_vectors(wires: Sequence[str]) -> dict[str, np.ndarray]:
    """All 2^len(wires) assignments as uint8 lanes, first wire most significant."""
    n = len(wires)
    idx = np.arange(1 << n, dtype=np.uint32)
    return {w: ((idx >> (n - 1 - i)) & 1).astype(np.uint8) for i, w in enumerate(wires)}


def check_injective(netlist: Netlist, observe: Sequence[str] | None = None) -> bool:
    """True iff free inputs map injectively onto the observed wires.

    By default the observed wires are the primary outputs plus garbage wires;
    constants stay at their declared values.
    """
    _require_valid(netlist)
    if netlist.state_wires:
        raise ValueError("check_injective needs a combinational netlist")
    free = list(netlist.inputs)
    if len(free) > MAX_INJECTIVE_INPUTS:
        raise CapacityError(f"{len(free)} free inputs exceeds the limit of {MAX_INJECTIVE_INPUTS}")
    if observe is None:
        observe = list(netlist.outputs) + garbage_wires(netlist)
    lanes = 1 << len(free)
    vals = evaluate(netlist, exhaustive_vectors(free))
    if not observe:
        return lanes == 1
    cols = np.stack(
        [np.broadcast_to(np.asarray(vals[w], dtype=np.uint8), (lanes,)) for w in observe], axis=1
    )
    packed = np.packbits(cols, axis=1)
    return np.unique(packed, axis=0).shape[0] == lanes
