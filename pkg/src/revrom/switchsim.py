"""Switch-level simulation of the pass-transistor gate realizations.

Transistors are ideal switches: NMOS conducts when its gate reads 1, PMOS when
it reads 0.  A terminal written ``!X`` refers to the complement of net ``X``
(dual-rail convention); such a terminal is a read-only driver and costs no
transistor.

Rails and primary inputs are source nets.  Every other net is a storage net:
storage nets joined by conducting transistors form a component, and the
component takes the value of its strongest driver (RAIL > INPUT > STORED).
A component with no driver keeps the charge it held after the previous solve.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .circuit import Netlist, NetlistError, validate
from .gates import GateKind, eval_gate, int_to_bits
from . import simfunc

__all__ = [
    "Strength",
    "Transistor",
    "SwitchNetlist",
    "NetState",
    "SwitchError",
    "ConflictError",
    "SwitchOscillationError",
    "ElaborationError",
    "EquivalenceResult",
    "SUPPORTED_KINDS",
    "parse_switch",
    "format_switch",
    "gate_netlist",
    "elaborate",
    "solve",
    "run_switch",
    "equivalence",
    "backend_equivalence",
]

SUPPORTED_KINDS = (GateKind.FEYNMAN, GateKind.FREDKIN, GateKind.TOFFOLI, GateKind.HL, GateKind.NP)


class Strength(enum.IntEnum):
    STORED = 1
    INPUT = 2
    RAIL = 3


class SwitchError(simfunc.SimulationError):
    pass


class ConflictError(SwitchError):
    pass


class SwitchOscillationError(SwitchError):
    pass


class ElaborationError(ValueError):
    pass


def _split_ref(ref: str) -> tuple[str, bool]:
    return (ref[1:], True) if ref.startswith("!") else (ref, False)


@dataclass(frozen=True)
class Transistor:
    id: str
    kind: str  # "N" or "P"
    gate: str
    src: str
    drn: str

    def __post_init__(self):
        if self.kind not in ("N", "P"):
            raise ValueError(f"transistor {self.id}: kind must be N or P, got {self.kind!r}")


@dataclass(frozen=True)
class SwitchNetlist:
    name: str
    nets: tuple[str, ...]
    transistors: tuple[Transistor, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    rails: Mapping[str, int] = field(default_factory=dict)
    state_nets: tuple[str, ...] = ()
    wire_nets: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for attr in ("nets", "transistors", "inputs", "outputs", "state_nets"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        object.__setattr__(self, "rails", dict(self.rails))
        nets = set(self.nets)
        for r in self.rails:
            if r not in nets:
                raise ValueError(f"rail {r!r} is not a declared net")
        for r in self.rails:
            if r in self.outputs:
                raise ValueError(f"rail {r!r} cannot be an output")
        for t in self.transistors:
            for ref in (t.gate, t.src, t.drn):
                if _split_ref(ref)[0] not in nets:
                    raise ValueError(f"transistor {t.id}: unknown net {ref!r}")
        for n in self.inputs + self.outputs + self.state_nets:
            if n not in nets:
                raise ValueError(f"unknown net {n!r}")

    @cached_property
    def _plan(self) -> "_Plan":
        return _Plan(self)


def parse_switch(text: str, name: str = "switch") -> SwitchNetlist:
    """Parse the line-oriented transistor netlist format.

    Lines: ``NET n...``, ``RAIL name 0|1``, ``IN n...``, ``OUT n...``,
    ``STATE n...`` and ``T id N|P g=ref s=ref d=ref``; ``#`` starts a comment.
    """
    nets: list[str] = []
    rails: dict[str, int] = {}
    ins: list[str] = []
    outs: list[str] = []
    state: list[str] = []
    ts: list[Transistor] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "NET":
            nets += rest
        elif head == "RAIL":
            if len(rest) != 2 or rest[1] not in ("0", "1"):
                raise ValueError(f"line {lineno}: expected 'RAIL name 0|1'")
            rails[rest[0]] = int(rest[1])
        elif head == "IN":
            ins += rest
        elif head == "OUT":
            outs += rest
        elif head == "STATE":
            state += rest
        elif head == "T":
            if len(rest) != 5:
                raise ValueError(f"line {lineno}: expected 'T id N|P g= s= d='")
            tid, kind, *terms = rest
            refs = {}
            for term in terms:
                key, _, ref = term.partition("=")
                refs[key] = ref
            if set(refs) != {"g", "s", "d"}:
                raise ValueError(f"line {lineno}: transistor needs g=, s= and d=")
            ts.append(Transistor(tid, kind, refs["g"], refs["s"], refs["d"]))
        else:
            raise ValueError(f"line {lineno}: unknown declaration {head!r}")
    all_nets = list(dict.fromkeys(list(rails) + nets))
    return SwitchNetlist(name, all_nets, ts, ins, outs, rails, state)


def format_switch(sw: SwitchNetlist) -> str:
    lines = [f"# {sw.name}: {len(sw.transistors)} transistors"]
    for r, v in sw.rails.items():
        lines.append(f"RAIL {r} {v}")
    plain = [n for n in sw.nets if n not in sw.rails]
    for i in range(0, len(plain), 12):
        lines.append("NET " + " ".join(plain[i : i + 12]))
    for head, items in (("IN", sw.inputs), ("OUT", sw.outputs), ("STATE", sw.state_nets)):
        for i in range(0, len(items), 12):
            lines.append(f"{head} " + " ".join(items[i : i + 12]))
    for t in sw.transistors:
        lines.append(f"T {t.id} {t.kind} g={t.gate} s={t.src} d={t.drn}")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def gate_netlist(kind: GateKind | str) -> SwitchNetlist:
    """Reference transistor netlist of one gate kind, loaded from package data."""
    try:
        kind = GateKind(kind)
    except ValueError:
        raise ValueError(f"unknown gate kind {kind!r}") from None
    if kind not in SUPPORTED_KINDS:
        raise ValueError(f"no transistor realization for {kind}")
    text = resources.files("revrom.cells").joinpath(f"{kind.value.lower()}.sw").read_text()
    sw = parse_switch(text, kind.value)
    for t in sw.transistors:
        if _split_ref(t.src)[0] == _split_ref(t.drn)[0]:
            raise ValueError(f"{kind} cell: transistor {t.id} has src == drn")
    if len(sw.inputs) != kind.width or len(sw.outputs) != kind.width:
        raise ValueError(f"{kind} cell: port count does not match gate width")
    return sw


# -- elaboration ---------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def elaborate(netlist: Netlist) -> SwitchNetlist:
    """Replace every gate instance with its reference transistor netlist.

    Wires become shared nets, constants become the VDD/GND rails, and each
    instance's internal nets are named ``<gate id>/<net>``.  Where a feedback
    wire joins a device's source and drain into one net, that device is kept
    (it never changes any value) so the count still matches the cost model.
    """
    problems = validate(netlist)
    if problems:
        raise ElaborationError(f"invalid netlist: {problems[0]}")
    uf = _UnionFind()
    rail_key = {1: ("r", "VDD"), 0: ("r", "GND")}
    for w in netlist.wires:
        uf.find(("w", w))
    for r in rail_key.values():
        uf.find(r)
    for w, v in netlist.constants.items():
        uf.union(rail_key[v], ("w", w))

    raw: list[tuple[str, str, object, bool, object, bool, object, bool]] = []
    for g in netlist.gates:
        if g.kind not in SUPPORTED_KINDS:
            raise ElaborationError(f"gate {g.id!r}: no transistor realization for {g.kind}")
        cell = gate_netlist(g.kind)
        local: dict[str, tuple] = {}
        for r, v in cell.rails.items():
            local[r] = rail_key[v]
        for i, n in enumerate(cell.inputs):
            local[n] = ("w", g.ins[i])
        for j, n in enumerate(cell.outputs):
            if n in local:
                uf.union(local[n], ("w", g.outs[j]))
            else:
                local[n] = ("w", g.outs[j])
        for n in cell.nets:
            uf.find(local.setdefault(n, ("i", g.id, n)))
        for t in cell.transistors:
            refs = []
            for ref in (t.gate, t.src, t.drn):
                net, inv = _split_ref(ref)
                refs += [local[net], inv]
            raw.append((f"{g.id}/{t.id}", t.kind, *refs))

    if uf.find(rail_key[0]) == uf.find(rail_key[1]):
        raise ElaborationError("VDD and GND are shorted")

    classes: dict = {}
    for key in list(uf.parent):
        classes.setdefault(uf.find(key), []).append(key)
    pin = set(netlist.inputs)
    pout = set(netlist.outputs)

    def _name(members) -> str:
        rails = sorted(k[1] for k in members if k[0] == "r")
        if rails:
            return rails[0]
        wires = sorted(k[1] for k in members if k[0] == "w")
        for pick in ([w for w in wires if w in pin], [w for w in wires if w in pout], wires):
            if pick:
                return pick[0]
        k = members[0]
        return f"{k[1]}/{k[2]}"

    name_of = {root: _name(members) for root, members in classes.items()}

    def net(key) -> str:
        return name_of[uf.find(key)]

    def ref(key, inv: bool) -> str:
        return ("!" if inv else "") + net(key)

    ts = []
    for tid, kind, gk, gi, sk, si, dk, di in raw:
        ts.append(Transistor(tid, kind, ref(gk, gi), ref(sk, si), ref(dk, di)))
    nets = sorted(set(name_of.values()))
    return SwitchNetlist(
        name=netlist.name,
        nets=nets,
        transistors=ts,
        inputs=[net(("w", w)) for w in netlist.inputs],
        outputs=[net(("w", w)) for w in netlist.outputs],
        rails={"VDD": 1, "GND": 0},
        state_nets=[net(("w", w)) for w in netlist.state_wires],
        wire_nets={w: net(("w", w)) for w in netlist.wires},
    )


# -- solving -------------------------------------------------------------------

class _Plan:
    """Index arrays for one switch netlist."""

    def __init__(self, sw: SwitchNetlist):
        self.names = list(sw.nets)
        idx = {n: i for i, n in enumerate(self.names)}
        self.index = idx
        n = len(self.names)
        self.n = n
        self.source = np.zeros(n, dtype=bool)
        self.base_strength = np.full(n, Strength.STORED, dtype=np.int8)
        self.rail_idx = np.array([idx[r] for r in sw.rails], dtype=np.int64)
        self.rail_val = np.array(list(sw.rails.values()), dtype=np.uint8)
        self.input_idx = np.array([idx[x] for x in sw.inputs], dtype=np.int64)
        self.source[self.rail_idx] = True
        self.source[self.input_idx] = True
        self.base_strength[self.input_idx] = Strength.INPUT
        self.base_strength[self.rail_idx] = Strength.RAIL
        self.storage = np.flatnonzero(~self.source)
        self.storage_pos = np.full(n, -1, dtype=np.int64)
        self.storage_pos[self.storage] = np.arange(len(self.storage))
        self.output_idx = np.array([idx[x] for x in sw.outputs], dtype=np.int64)
        self.state_idx = np.array([idx[x] for x in sw.state_nets], dtype=np.int64)

        gate, ginv, nmos = [], [], []
        # storage-storage joins and storage <- driver attachments
        ja, jb, jt = [], [], []
        dt, dtarget, dref, dinv = [], [], [], []
        for ti, t in enumerate(sw.transistors):
            g, gi = _split_ref(t.gate)
            gate.append(idx[g])
            ginv.append(gi)
            nmos.append(t.kind == "N")
            (s, si), (d, di) = _split_ref(t.src), _split_ref(t.drn)
            s, d = idx[s], idx[d]
            s_plain_store = not si and not self.source[s]
            d_plain_store = not di and not self.source[d]
            if s_plain_store and d_plain_store:
                if s != d:
                    ja.append(s)
                    jb.append(d)
                    jt.append(ti)
            elif s_plain_store:
                dt.append(ti), dtarget.append(s), dref.append(d), dinv.append(di)
            elif d_plain_store:
                dt.append(ti), dtarget.append(d), dref.append(s), dinv.append(si)
        self.gate = np.array(gate, dtype=np.int64)
        self.ginv = np.array(ginv, dtype=np.uint8)
        self.nmos = np.array(nmos, dtype=bool)
        self.ja = self.storage_pos[np.array(ja, dtype=np.int64)]
        self.jb = self.storage_pos[np.array(jb, dtype=np.int64)]
        self.jt = np.array(jt, dtype=np.int64)
        self.dt = np.array(dt, dtype=np.int64)
        self.dtarget = self.storage_pos[np.array(dtarget, dtype=np.int64)]
        self.dref = np.array(dref, dtype=np.int64)
        self.dinv = np.array(dinv, dtype=np.uint8)
        self.bound = max(n, 2)

    def initial(self, inputs: np.ndarray, prev: np.ndarray) -> np.ndarray:
        val = prev.astype(np.uint8).copy()
        val[self.rail_idx] = self.rail_val
        val[self.input_idx] = inputs
        return val

    def solve(self, inputs: np.ndarray, prev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        val = self.initial(inputs, prev)
        strength = self.base_strength.copy()
        ns = len(self.storage)
        stored_lab_src = np.arange(ns)
        prev_store = prev[self.storage].astype(np.uint8)
        for _ in range(self.bound):
            g = val[self.gate] ^ self.ginv
            on = np.where(self.nmos, g == 1, g == 0)

            jon = on[self.jt]
            graph = coo_matrix(
                (np.ones(int(jon.sum()), dtype=np.int8), (self.ja[jon], self.jb[jon])), shape=(ns, ns)
            )
            ncomp, label = connected_components(graph, directed=False)

            don = on[self.dt]
            ref = self.dref[don]
            lab = np.concatenate([label[self.dtarget[don]], label[stored_lab_src]])
            st = np.concatenate([strength[ref], np.full(ns, Strength.STORED, dtype=np.int8)])
            v = np.concatenate([val[ref] ^ self.dinv[don], prev_store])

            best = np.zeros(ncomp, dtype=np.int8)
            np.maximum.at(best, lab, st)
            top = st == best[lab]
            ones = np.bincount(lab[top], weights=v[top], minlength=ncomp)
            count = np.bincount(lab[top], minlength=ncomp)
            conflict = (ones > 0) & (ones < count)
            comp_val = (ones > 0).astype(np.uint8)

            new_val = val.copy()
            new_strength = strength.copy()
            keep = conflict[label]
            upd = self.storage[~keep]
            new_val[upd] = comp_val[label[~keep]]
            new_strength[upd] = best[label[~keep]]
            if np.array_equal(new_val, val) and np.array_equal(new_strength, strength):
                if conflict.any():
                    comp = int(np.flatnonzero(conflict)[0])
                    members = [self.names[i] for i in self.storage[label == comp]]
                    raise ConflictError(f"conflicting drivers on component {members}")
                return val, strength
            val, strength = new_val, new_strength
        raise SwitchOscillationError(f"no fixpoint within {self.bound} iterations")


@dataclass(frozen=True)
class NetState:
    values: Mapping[str, int]
    strengths: Mapping[str, Strength] = field(default_factory=dict)

    def __getitem__(self, net: str) -> int:
        return self.values[net]


def _input_array(plan: _Plan, sw: SwitchNetlist, inputs: Mapping[str, int]) -> np.ndarray:
    missing = [x for x in sw.inputs if x not in inputs]
    if missing:
        raise ValueError(f"input assignment is missing {missing[:5]}")
    arr = np.array([int(inputs[x]) for x in sw.inputs], dtype=np.uint8)
    if np.any(arr > 1):
        raise ValueError("inputs must be 0 or 1")
    return arr


def _prev_array(plan: _Plan, prev: Mapping[str, int] | NetState | None) -> np.ndarray:
    arr = np.zeros(plan.n, dtype=np.uint8)
    if prev is None:
        return arr
    values = prev.values if isinstance(prev, NetState) else prev
    for net, v in values.items():
        arr[plan.index[net]] = int(v)
    return arr


def solve(sw: SwitchNetlist, inputs: Mapping[str, int], prev: Mapping[str, int] | NetState | None = None) -> NetState:
    """Fixpoint of conduction for one input vector.

    ``prev`` supplies the charge held on storage nets (all 0 by default).
    Raises :class:`ConflictError` when equally strong drivers disagree on a
    component, :class:`SwitchOscillationError` when no fixpoint is reached.
    """
    plan = sw._plan
    val, strength = plan.solve(_input_array(plan, sw, inputs), _prev_array(plan, prev))
    return NetState(
        {n: int(val[i]) for i, n in enumerate(plan.names)},
        {n: Strength(int(strength[i])) for i, n in enumerate(plan.names)},
    )


def _run_arrays(sw: SwitchNetlist, vectors: Iterable[Mapping[str, int]], init: int = 0):
    plan = sw._plan
    prev = np.zeros(plan.n, dtype=np.uint8)
    prev[plan.state_idx] = init
    for i, vec in enumerate(vectors):
        try:
            prev, _ = plan.solve(_input_array(plan, sw, vec), prev)
        except SwitchError as exc:
            raise type(exc)(str(exc), i) from None
        yield prev


def run_switch(sw: SwitchNetlist, vectors: Iterable[Mapping[str, int]], init: int = 0) -> list[dict[str, int]]:
    """Solve each vector in turn, carrying stored charge between steps.

    Returns one dict of every net's value per step.  ``init`` presets the
    declared state nets before the first step.
    """
    names = sw._plan.names
    return [{n: int(v[i]) for i, n in enumerate(names)} for v in _run_arrays(sw, vectors, init)]


# -- equivalence ---------------------------------------------------------------

@dataclass
class EquivalenceResult:
    ok: bool
    checked: int
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def equivalence(kind: GateKind | str) -> EquivalenceResult:
    """Exhaustively compare a reference transistor netlist with the gate equations."""
    kind = GateKind(kind)
    sw = gate_netlist(kind)
    w = kind.width
    for i in range(1 << w):
        bits = int_to_bits(i, w)
        inputs = dict(zip(sw.inputs, bits))
        want = eval_gate(kind, bits)
        try:
            st = solve(sw, inputs)
        except SwitchError as exc:
            return EquivalenceResult(False, i + 1, {"inputs": bits, "error": str(exc)})
        got = tuple(st[n] for n in sw.outputs)
        if got != want:
            return EquivalenceResult(False, i + 1, {"inputs": bits, "expected": want, "got": got})
    return EquivalenceResult(True, 1 << w)


def _vectors(netlist: Netlist, sample: int, seed: int | None, exhaustive_limit: int) -> list[dict[str, int]]:
    free = list(netlist.inputs)
    vecs: list[dict[str, int]] = []
    if len(free) <= exhaustive_limit:
        lanes = simfunc.exhaustive_vectors(free)
        for r in range(1 << len(free)):
            vecs.append({w: int(lanes[w][r]) for w in free})
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(sample, len(free)), dtype=np.uint8)
    vecs += [dict(zip(free, map(int, row))) for row in bits]
    return vecs


def backend_equivalence(
    netlist: Netlist,
    sample: int = 1000,
    seed: int | None = 0,
    *,
    exhaustive_limit: int = 12,
    init: int = 0,
) -> EquivalenceResult:
    """Run the functional and switch backends on the same vectors and compare outputs.

    Uses ``sample`` seeded random vectors, preceded by an exhaustive sweep when the
    circuit has at most ``exhaustive_limit`` free inputs.  Sequential circuits
    carry state across the whole sequence in both backends.
    """
    sw = elaborate(netlist)
    vecs = _vectors(netlist, sample, seed, exhaustive_limit)
    func = simfunc.run(netlist, vecs, init=init)
    out_idx = sw._plan.output_idx
    try:
        for i, (fstep, arr) in enumerate(zip(func, _run_arrays(sw, vecs, init))):
            want = tuple(fstep[w] for w in netlist.outputs)
            got = tuple(int(x) for x in arr[out_idx])
            if want != got:
                return EquivalenceResult(
                    False, i + 1, {"step": i, "inputs": vecs[i], "expected": want, "got": got}
                )
    except SwitchError as exc:
        return EquivalenceResult(False, exc.step or 0, {"step": exc.step, "error": str(exc)})
    return EquivalenceResult(True, len(vecs))
