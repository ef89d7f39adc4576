"""File formats: circuit JSON, vector CSV, DOT graphs and VCD traces."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

import jsonschema
from vcd import VCDWriter

from .circuit import GateInstance, Netlist, garbage_wires
from .gates import GateKind

__all__ = [
    "CIRCUIT_SCHEMA",
    "SchemaError",
    "to_json",
    "from_json",
    "netlist_to_dict",
    "netlist_from_dict",
    "load_netlist",
    "save_netlist",
    "read_vectors",
    "write_vectors",
    "vector_template",
    "to_dot",
    "write_vcd",
]

CIRCUIT_SCHEMA = {
    "type": "object",
    "required": ["name", "wires", "inputs", "outputs", "constants", "gates", "state_wires"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "wires": {"type": "array", "items": {"type": "string"}},
        "inputs": {"type": "array", "items": {"type": "string"}},
        "outputs": {"type": "array", "items": {"type": "string"}},
        "constants": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["wire", "value"],
                "additionalProperties": False,
                "properties": {"wire": {"type": "string"}, "value": {"enum": [0, 1]}},
            },
        },
        "gates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "ins", "outs"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": [k.value for k in GateKind]},
                    "ins": {"type": "array", "items": {"type": "string"}},
                    "outs": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "state_wires": {"type": "array", "items": {"type": "string"}},
        "meta": {"type": "object"},
    },
}


class SchemaError(ValueError):
    pass


def netlist_to_dict(netlist: Netlist) -> dict:
    return {
        "name": netlist.name,
        "wires": sorted(netlist.wires),
        "inputs": list(netlist.inputs),
        "outputs": list(netlist.outputs),
        "constants": [{"wire": w, "value": v} for w, v in sorted(netlist.constants.items())],
        "gates": [
            {"id": g.id, "kind": g.kind.value, "ins": list(g.ins), "outs": list(g.outs)}
            for g in sorted(netlist.gates, key=lambda g: g.id)
        ],
        "state_wires": sorted(netlist.state_wires),
        "meta": dict(netlist.meta),
    }


def to_json(netlist: Netlist) -> str:
    """Canonical JSON: wires, gates, constants and state wires sorted by id."""
    return json.dumps(netlist_to_dict(netlist), indent=2, sort_keys=True) + "\n"


def netlist_from_dict(data: Mapping) -> Netlist:
    try:
        jsonschema.validate(data, CIRCUIT_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"circuit schema violation at {where}: {exc.message}") from None
    return Netlist(
        name=data["name"],
        wires=data["wires"],
        gates=[GateInstance(g["id"], g["kind"], g["ins"], g["outs"]) for g in data["gates"]],
        inputs=data["inputs"],
        outputs=data["outputs"],
        constants={c["wire"]: c["value"] for c in data["constants"]},
        state_wires=data["state_wires"],
        meta=data.get("meta", {}),
    )


def from_json(text: str) -> Netlist:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    return netlist_from_dict(data)


def load_netlist(path: str | Path) -> Netlist:
    return from_json(Path(path).read_text())


def save_netlist(netlist: Netlist, path: str | Path) -> None:
    Path(path).write_text(to_json(netlist))


# -- vectors -------------------------------------------------------------------

def read_vectors(source: str | Path | IO[str]) -> tuple[list[str], list[dict[str, int]]]:
    """Read a vector CSV: header of input wire ids, one 0/1 row per step."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_vectors(fh)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        return [], []
    rows = []
    for lineno, row in enumerate(reader, 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ValueError(f"vector row {lineno} has {len(row)} fields, header has {len(header)}")
        try:
            bits = [int(c) for c in row]
        except ValueError:
            raise ValueError(f"vector row {lineno} must hold 0/1 values") from None
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"vector row {lineno} must hold 0/1 values")
        rows.append(dict(zip(header, bits)))
    return header, rows


def write_vectors(fh: IO[str], header: Sequence[str], rows: Iterable[Mapping[str, int]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([int(row[h]) for h in header])


def vector_template(netlist: Netlist) -> str:
    buf = io.StringIO()
    write_vectors(buf, netlist.inputs, [])
    return buf.getvalue()


# -- DOT -----------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def to_dot(netlist: Netlist) -> str:
    """One node per gate (``id:kind``), one edge per wire; garbage edges dashed.

    Primary inputs, constants, primary outputs and garbage ends appear as
    small terminal nodes so that every wire has two endpoints.
    """
    garbage = set(garbage_wires(netlist))
    lines = [f"digraph {_q(netlist.name)} {{", "  rankdir=LR;"]
    for g in netlist.gates:
        lines.append(f"  {_q(g.id)} [shape=box,label={_q(f'{g.id}:{g.kind.value}')}];")

    def endpoint_src(w: str) -> str:
        src = netlist.sources[w][0]
        if src.kind == "gate":
            return _q(src.ref)
        node = f"in:{w}" if src.kind == "input" else f"const:{w}"
        label = w if src.kind == "input" else str(src.ref)
        lines.append(f"  {_q(node)} [shape=plaintext,label={_q(label)}];")
        return _q(node)

    def endpoint_dst(w: str) -> str:
        sinks = netlist.sinks.get(w, [])
        if sinks and sinks[0].kind == "gate":
            return _q(sinks[0].ref)
        if sinks:
            node = f"out:{w}"
            lines.append(f"  {_q(node)} [shape=plaintext,label={_q(w)}];")
        else:
            node = f"sink:{w}"
            lines.append(f"  {_q(node)} [shape=point];")
        return _q(node)

    for w in sorted(netlist.wires):
        if not netlist.sources.get(w):
            continue
        a, b = endpoint_src(w), endpoint_dst(w)
        style = ",style=dashed" if w in garbage else ""
        lines.append(f"  {a} -> {b} [label={_q(w)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- VCD -----------------------------------------------------------------------

def write_vcd(fh: IO[str], trace: Sequence[Mapping[str, int]], signals: Sequence[str] | None = None, scope: str = "top") -> None:
    """Dump a per-step trace; step ``i`` is written at time ``i``."""
    if signals is None:
        signals = sorted(trace[0]) if trace else []
    with VCDWriter(fh, timescale="1 ns", date="", version="revrom") as writer:
        handles = {s: writer.register_var(scope, s, "wire", size=1) for s in signals}
        for t, row in enumerate(trace):
            for s, h in handles.items():
                writer.change(h, t, int(row[s]))
