"""Command-line driver: build, analyze, sim, verify, export.

Exit codes: 0 success, 1 verification or theorem failure, 2 usage or schema
error, 3 simulation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from .circuit import NetlistError, analyze, validate
from .gates import GateKind, eval_backward, is_reversible, truth_table
from .netio import SchemaError, load_netlist, read_vectors, to_dot, to_json, vector_template, write_vcd, write_vectors
from .simfunc import CapacityError, SimulationError, check_injective, run
from .switchsim import SUPPORTED_KINDS, ElaborationError, backend_equivalence, elaborate, equivalence, format_switch, run_switch
from .synth import RomParams, build_decoder, build_dff, build_rom, theorem_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SIM = 0, 1, 2, 3


class _UsageError(Exception):
    pass


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load(path: str):
    try:
        nl = load_netlist(path)
    except FileNotFoundError:
        raise _UsageError(f"no such file: {path}") from None
    except (SchemaError, ValueError) as exc:
        raise _UsageError(str(exc)) from None
    problems = validate(nl)
    if problems:
        raise _UsageError(f"{path}: invalid netlist: {problems[0]}")
    return nl


def cmd_build(args) -> int:
    try:
        if args.circuit == "decoder":
            nl = build_decoder(args.n)
        elif args.circuit == "dff":
            nl = build_dff(args.complement)
        else:
            nl = build_rom(RomParams(args.n, args.m, args.k))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    with _open_out(args.output) as fh:
        fh.write(to_json(nl))
    return EXIT_OK


def cmd_analyze(args) -> int:
    nl = _load(args.path)
    report = analyze(nl)
    theorems = None
    if args.check_theorems:
        try:
            theorems = theorem_report(nl)
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
    if args.format == "json":
        doc = {"name": nl.name, "cost": report.as_dict()}
        if theorems is not None:
            doc["theorems"] = {"predicted": theorems.predicted, "match": theorems.match, "ok": theorems.ok}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"circuit          {nl.name}")
        print(f"gates            {report.gate_count}")
        print(f"quantum cost     {report.quantum_cost}")
        print(f"transistors      {report.transistor_count}")
        print(f"garbage outputs  {report.garbage_outputs}")
        print(f"constant inputs  {report.constant_inputs}")
        print(f"delay            {report.delay}Δ")
        if theorems is not None:
            measured = {
                "gates": report.gate_count,
                "garbage": report.garbage_outputs,
                "transistors": report.transistor_count,
            }
            for name, want in theorems.predicted.items():
                mark = "ok" if theorems.match[name] else "MISMATCH"
                print(f"theorem {name:<12} predicted {want:<6} measured {measured[name]:<6} {mark}")
    if theorems is not None and not theorems.ok:
        return EXIT_FAIL
    return EXIT_OK


def cmd_sim(args) -> int:
    nl = _load(args.path)
    try:
        header, vectors = read_vectors(args.vectors)
    except FileNotFoundError:
        raise _UsageError(f"no such file: {args.vectors}") from None
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if vectors:
        missing = [w for w in nl.inputs if w not in header]
        if missing:
            raise _UsageError(f"vector file lacks inputs {missing[:5]}")
    try:
        if args.backend == "func":
            trace = run(nl, vectors, init=args.init_state)
            outputs = [{w: step[w] for w in nl.outputs} for step in trace]
        else:
            try:
                sw = elaborate(nl)
            except ElaborationError as exc:
                raise _UsageError(str(exc)) from None
            trace = run_switch(sw, vectors, init=args.init_state)
            outputs = [{w: step[sw.wire_nets[w]] for w in nl.outputs} for step in trace]
    except SimulationError as exc:
        print(f"simulation failed at step {exc.step}: {exc}", file=sys.stderr)
        return EXIT_SIM
    with _open_out(args.out) as fh:
        write_vectors(fh, nl.outputs, outputs)
    if args.vcd:
        with open(args.vcd, "w") as fh:
            write_vcd(fh, trace, scope=nl.name)
    return EXIT_OK


def _verify_gate(kind: GateKind) -> tuple[bool, dict]:
    rows = truth_table(kind)
    checks = {"bijective": is_reversible([out for _, out in rows])}
    bad = [x for x, y in rows if eval_backward(kind, y) != x]
    checks["inverse"] = not bad
    detail: dict = {}
    if bad:
        detail["inverse_counterexample"] = bad[0]
    if kind in SUPPORTED_KINDS:
        eq = equivalence(kind)
        checks["switch_equivalence"] = eq.ok
        if not eq.ok:
            detail["switch_counterexample"] = eq.counterexample
    return all(checks.values()), {"checks": checks, **detail}


def cmd_verify(args) -> int:
    if args.target == "gate":
        try:
            kind = GateKind(args.kind.upper())
        except ValueError:
            raise _UsageError(f"unknown gate kind {args.kind!r}") from None
        ok, detail = _verify_gate(kind)
    else:
        nl = _load(args.path)
        if args.backend_equivalence:
            try:
                res = backend_equivalence(nl, sample=args.sample, seed=args.seed)
            except ElaborationError as exc:
                raise _UsageError(str(exc)) from None
            ok, detail = res.ok, {"vectors": res.checked, "counterexample": res.counterexample}
        else:
            try:
                ok = check_injective(nl)
            except CapacityError as exc:
                raise _UsageError(str(exc)) from None
            except ValueError as exc:
                raise _UsageError(str(exc)) from None
            detail = {"injective": ok}
    print("PASS" if ok else "FAIL")
    print(json.dumps(detail, indent=2, sort_keys=True, default=str))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(args) -> int:
    nl = _load(args.path)
    if args.format == "dot":
        text = to_dot(nl)
    elif args.format == "vcd-template":
        text = vector_template(nl)
    else:
        try:
            text = format_switch(elaborate(nl))
        except ElaborationError as exc:
            raise _UsageError(str(exc)) from None
    with _open_out(args.output) as fh:
        fh.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revrom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="generate a circuit JSON file")
    bsub = b.add_subparsers(dest="circuit", required=True)
    dec = bsub.add_parser("decoder")
    dec.add_argument("--n", type=int, required=True)
    dff = bsub.add_parser("dff")
    dff.add_argument("--complement", action="store_true")
    rom = bsub.add_parser("rom")
    rom.add_argument("--n", type=int, required=True)
    rom.add_argument("--m", type=int, required=True)
    rom.add_argument("--k", type=int, required=True)
    for sp in (dec, dff, rom):
        sp.add_argument("-o", "--output", default="-")
        sp.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="print the cost report of a circuit")
    a.add_argument("path")
    a.add_argument("--check-theorems", action="store_true")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sim", help="simulate a circuit on a vector file")
    s.add_argument("path")
    s.add_argument("--vectors", required=True)
    s.add_argument("--backend", choices=["func", "switch"], default="func")
    s.add_argument("--vcd")
    s.add_argument("--init-state", type=int, choices=[0, 1], default=0)
    s.add_argument("--out", default="-", help="CSV of primary outputs per step")
    s.set_defaults(func=cmd_sim)

    v = sub.add_parser("verify", help="run property checks")
    vsub = v.add_subparsers(dest="target", required=True)
    vg = vsub.add_parser("gate")
    vg.add_argument("kind")
    vg.add_argument("--exhaustive", action="store_true", required=True)
    vc = vsub.add_parser("circuit")
    vc.add_argument("path")
    mode = vc.add_mutually_exclusive_group(required=True)
    mode.add_argument("--injective", action="store_true")
    mode.add_argument("--backend-equivalence", action="store_true")
    vc.add_argument("--sample", type=int, default=1000)
    vc.add_argument("--seed", type=int, default=0)
    for sp in (vg, vc):
        sp.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="write DOT, a vector template or a transistor netlist")
    e.add_argument("path")
    e.add_argument("--format", choices=["dot", "vcd-template", "transistor"], required=True)
    e.add_argument("-o", "--output", default="-")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"revrom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NetlistError as exc:
        print(f"revrom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
