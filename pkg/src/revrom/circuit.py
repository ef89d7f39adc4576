"""Netlist data model and structural cost accounting for reversible circuits.

A :class:`Netlist` is a set of named wires and gate instances.  Every wire has
exactly one source (a primary input, a constant, or one gate output port) and
at most one sink (a primary output or one gate input port).  Feedback is only
allowed through wires listed in ``state_wires``; cutting those leaves a DAG.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .gates import INPUT_PORTS, OUTPUT_PORTS, GateKind, GateSpec, metadata

__all__ = [
    "GateInstance",
    "Netlist",
    "CostReport",
    "NetlistError",
    "Source",
    "Sink",
    "validate",
    "analyze",
    "longest_path",
    "garbage_wires",
    "topological_order",
    "compose",
    "single_gate",
]


class NetlistError(ValueError):
    """Raised when an operation needs a valid netlist and gets an invalid one."""


@dataclass(frozen=True)
class Source:
    """Where a wire's value comes from: ``kind`` is input, constant or gate."""

    kind: str
    ref: str | int
    port: int | None = None


@dataclass(frozen=True)
class Sink:
    kind: str  # "output" or "gate"
    ref: str | int
    port: int | None = None


@dataclass(frozen=True)
class GateInstance:
    id: str
    kind: GateKind
    ins: tuple[str, ...]
    outs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "ins", tuple(self.ins))
        object.__setattr__(self, "outs", tuple(self.outs))


@dataclass(frozen=True)
class Netlist:
    name: str
    wires: tuple[str, ...]
    gates: tuple[GateInstance, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    constants: Mapping[str, int] = field(default_factory=dict)
    state_wires: tuple[str, ...] = ()
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(self.wires))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "constants", dict(self.constants))
        object.__setattr__(self, "state_wires", tuple(self.state_wires))

    @cached_property
    def gate_by_id(self) -> dict[str, GateInstance]:
        return {g.id: g for g in self.gates}

    @cached_property
    def sources(self) -> dict[str, list[Source]]:
        src: dict[str, list[Source]] = defaultdict(list)
        for i, w in enumerate(self.inputs):
            src[w].append(Source("input", i))
        for w, v in self.constants.items():
            src[w].append(Source("constant", v))
        for g in self.gates:
            for p, w in enumerate(g.outs):
                src[w].append(Source("gate", g.id, p))
        return dict(src)

    @cached_property
    def sinks(self) -> dict[str, list[Sink]]:
        snk: dict[str, list[Sink]] = defaultdict(list)
        for i, w in enumerate(self.outputs):
            snk[w].append(Sink("output", i))
        for g in self.gates:
            for p, w in enumerate(g.ins):
                snk[w].append(Sink("gate", g.id, p))
        return dict(snk)

    @cached_property
    def violations(self) -> tuple[str, ...]:
        return _violations(self)

    @cached_property
    def schedule(self) -> tuple[GateInstance, ...]:
        """Gates in topological order (state wires cut)."""
        return tuple(topological_order(self))

    @property
    def free_inputs(self) -> tuple[str, ...]:
        return self.inputs

    @property
    def is_combinational(self) -> bool:
        return not self.state_wires

    def with_gates(self, gates: Iterable[GateInstance]) -> "Netlist":
        return replace(self, gates=tuple(gates))


@dataclass(frozen=True)
class CostReport:
    gate_count: int
    quantum_cost: int
    transistor_count: int
    garbage_outputs: int
    constant_inputs: int
    delay: int

    def as_dict(self) -> dict[str, int]:
        return {
            "gate_count": self.gate_count,
            "quantum_cost": self.quantum_cost,
            "transistor_count": self.transistor_count,
            "garbage_outputs": self.garbage_outputs,
            "constant_inputs": self.constant_inputs,
            "delay": self.delay,
        }


def validate(netlist: Netlist) -> list[str]:
    """Return human-readable violations; an empty list means the netlist is valid."""
    return list(netlist.violations)


def _violations(netlist: Netlist) -> tuple[str, ...]:
    problems: list[str] = []
    wire_set = set(netlist.wires)

    for w, n in Counter(netlist.wires).items():
        if n > 1:
            problems.append(f"duplicate wire id {w!r}")
    for gid, n in Counter(g.id for g in netlist.gates).items():
        if n > 1:
            problems.append(f"duplicate gate id {gid!r}")

    for g in netlist.gates:
        if not isinstance(g.kind, GateKind):
            problems.append(f"gate {g.id!r}: unknown kind {g.kind!r}")
            continue
        w = g.kind.width
        if len(g.ins) != w or len(g.outs) != w:
            problems.append(
                f"gate {g.id!r}: {g.kind} needs {w} ins/outs, got {len(g.ins)}/{len(g.outs)}"
            )

    referenced = set(netlist.inputs) | set(netlist.outputs) | set(netlist.constants)
    referenced |= set(netlist.state_wires)
    for g in netlist.gates:
        referenced.update(g.ins)
        referenced.update(g.outs)
    for w in sorted(referenced - wire_set):
        problems.append(f"wire {w!r} is referenced but not declared")

    for w in sorted(set(netlist.constants) & (set(netlist.inputs) | set(netlist.outputs))):
        problems.append(f"constant wire {w!r} listed as a primary input/output")
    for w, v in sorted(netlist.constants.items()):
        if v not in (0, 1):
            problems.append(f"constant wire {w!r} has value {v!r}")

    sources, sinks = netlist.sources, netlist.sinks
    for w in netlist.wires:
        if len(sources.get(w, [])) > 1:
            problems.append(f"wire {w!r} has {len(sources[w])} drivers")
        if len(sinks.get(w, [])) > 1:
            problems.append(f"fan-out: wire {w!r} has {len(sinks[w])} sinks")
    for g in netlist.gates:
        for p, w in enumerate(g.ins):
            if w in wire_set and not sources.get(w):
                problems.append(f"gate {g.id!r} input {p} on dangling wire {w!r}")
    for w in netlist.outputs:
        if w in wire_set and not sources.get(w):
            problems.append(f"primary output {w!r} is undriven")

    for w in netlist.state_wires:
        src, snk = sources.get(w, []), sinks.get(w, [])
        if not (src and src[0].kind == "gate" and snk and snk[0].kind == "gate"):
            problems.append(f"state wire {w!r} must run from a gate output to a gate input")

    if not problems:
        stuck = _find_cycle(netlist)
        if stuck is not None:
            problems.append(f"combinational cycle through gate {stuck!r}")
    return tuple(problems)


def _gate_deps(netlist: Netlist) -> dict[str, list[str]]:
    """gate id -> ids of gates feeding it, with state wires cut."""
    state = set(netlist.state_wires)
    deps: dict[str, list[str]] = {}
    for g in netlist.gates:
        d = []
        for w in g.ins:
            if w in state:
                continue
            for s in netlist.sources.get(w, []):
                if s.kind == "gate":
                    d.append(s.ref)
        deps[g.id] = d
    return deps


def _find_cycle(netlist: Netlist) -> str | None:
    try:
        topological_order(netlist)
    except NetlistError as exc:
        return exc.args[1]
    return None


def topological_order(netlist: Netlist) -> list[GateInstance]:
    """Gates ordered so every gate follows its (non-state) drivers.

    Ties keep declaration order, so the result is deterministic.
    """
    deps = _gate_deps(netlist)
    users: dict[str, list[str]] = defaultdict(list)
    indeg = {gid: 0 for gid in deps}
    for gid, ds in deps.items():
        for d in ds:
            if d in indeg:
                users[d].append(gid)
                indeg[gid] += 1
    order: list[str] = []
    ready = [g.id for g in netlist.gates if indeg[g.id] == 0]
    ready.reverse()
    while ready:
        gid = ready.pop()
        order.append(gid)
        for u in users[gid]:
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    if len(order) != len(indeg):
        stuck = next(g.id for g in netlist.gates if indeg[g.id] > 0)
        raise NetlistError("combinational cycle", stuck)
    by_id = netlist.gate_by_id
    return [by_id[g] for g in order]


def _require_valid(netlist: Netlist) -> None:
    problems = validate(netlist)
    if problems:
        raise NetlistError(f"invalid netlist {netlist.name!r}: {problems[0]}")


def garbage_wires(netlist: Netlist) -> list[str]:
    """Gate-output wires that nothing consumes and that are not primary outputs."""
    sinks = netlist.sinks
    return [w for g in netlist.gates for w in g.outs if not sinks.get(w)]


def longest_path(netlist: Netlist, costs: Mapping[GateKind, GateSpec] | None = None) -> int:
    """Largest summed gate delay from any source to a primary output or state wire."""
    _require_valid(netlist)
    arrival: dict[str, int] = {}
    for g in topological_order(netlist):
        t = max((arrival.get(w, 0) for w in g.ins), default=0)
        t += metadata(g.kind, costs).delay
        for w in g.outs:
            arrival[w] = t
    # state wires are cut points: endpoints here, time-0 sources for their readers
    ends = list(netlist.outputs) + list(netlist.state_wires)
    return max((arrival.get(w, 0) for w in ends), default=0)


def analyze(netlist: Netlist, costs: Mapping[GateKind, GateSpec] | None = None) -> CostReport:
    _require_valid(netlist)
    qc = tc = 0
    for g in netlist.gates:
        spec = metadata(g.kind, costs)
        qc += spec.quantum_cost
        tc += spec.transistor_count
    return CostReport(
        gate_count=len(netlist.gates),
        quantum_cost=qc,
        transistor_count=tc,
        garbage_outputs=len(garbage_wires(netlist)),
        constant_inputs=len(netlist.constants),
        delay=longest_path(netlist, costs),
    )


def compose(first: Netlist, second: Netlist, name: str | None = None) -> Netlist:
    """Serial composition: ``first``'s outputs drive ``second``'s inputs in order.

    Wire and gate ids are prefixed ``a.`` / ``b.`` to keep them unique.
    """
    if len(first.outputs) != len(second.inputs):
        raise ValueError(
            f"cannot compose {len(first.outputs)} outputs into {len(second.inputs)} inputs"
        )
    ra = {w: f"a.{w}" for w in first.wires}
    rb = {w: f"b.{w}" for w in second.wires}
    for o, i in zip(first.outputs, second.inputs):
        rb[i] = ra[o]

    def _gates(nl, ren, prefix):
        return [
            GateInstance(f"{prefix}{g.id}", g.kind, [ren[w] for w in g.ins], [ren[w] for w in g.outs])
            for g in nl.gates
        ]

    wires = list(ra.values()) + [w for k, w in rb.items() if k not in second.inputs]
    constants = {ra[w]: v for w, v in first.constants.items()}
    constants.update({rb[w]: v for w, v in second.constants.items()})
    return Netlist(
        name=name or f"{first.name}+{second.name}",
        wires=wires,
        gates=_gates(first, ra, "a.") + _gates(second, rb, "b."),
        inputs=[ra[w] for w in first.inputs],
        outputs=[rb[w] for w in second.outputs],
        constants=constants,
        state_wires=[ra[w] for w in first.state_wires] + [rb[w] for w in second.state_wires],
    )


def single_gate(kind: GateKind | str) -> Netlist:
    """A netlist holding exactly one gate whose ports are all primary I/O."""
    kind = GateKind(kind)
    ins = [f"in.{p}" for p in INPUT_PORTS[: kind.width]]
    outs = [f"out.{p}" for p in OUTPUT_PORTS[: kind.width]]
    return Netlist(
        name=kind.value.lower(),
        wires=ins + outs,
        gates=[GateInstance("g", kind, ins, outs)],
        inputs=ins,
        outputs=outs,
    )

