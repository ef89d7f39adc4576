"""Switch-level view: transistor cells, an elaborated latch and a cross-backend check."""
import time

from revrom.switchsim import backend_equivalence, elaborate, equivalence, format_switch, gate_netlist, run_switch
from revrom.synth import build_dff, build_rom

for kind in ("FEYNMAN", "FREDKIN", "TOFFOLI", "HL", "NP"):
    res = equivalence(kind)
    print(f"{kind:8s} {len(gate_netlist(kind).transistors):2d} transistors, "
          f"{res.checked} rows, matches gate equations: {res.ok}")

print()
print(format_switch(gate_netlist("FEYNMAN")))

sw = elaborate(build_dff())
print(format_switch(sw))
q = sw.wire_nets["Q"]
seq = [(1, 1), (0, 0), (0, 1), (1, 0), (0, 1)]
trace = run_switch(sw, [{"E": e, "D": d} for e, d in seq])
for (e, d), row in zip(seq, trace):
    print(f"E={e} D={d} -> Q={row[q]}")

rom = build_rom(n=4, m=1, k=2)
t0 = time.perf_counter()
res = backend_equivalence(rom, sample=1000, seed=7)
print()
print(f"{rom.name}: {len(elaborate(rom).transistors)} transistors, {res.checked} vectors, "
      f"backends agree: {res.ok}  ({time.perf_counter() - t0:.1f}s)")
