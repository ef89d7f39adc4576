"""The 2^n x m ROM: cost formulas versus the built netlist, then a read-back sweep."""
import numpy as np

from revrom.circuit import analyze
from revrom.simfunc import run
from revrom.synth import RomParams, build_rom, crosscheck

print(" n  m  k  gates  garbage  transistors  match")
for n in (4, 5, 6):
    for m in (1, 2, 4):
        for k in range(2, n - 1):
            rep = crosscheck(RomParams(n, m, k))
            r = rep.measured
            print(f"{n:2d} {m:2d} {k:2d} {r.gate_count:6d} {r.garbage_outputs:8d} {r.transistor_count:12d}  {rep.ok}")

nl = build_rom(n=4, m=2, k=2)
print()
print(nl.name, analyze(nl).as_dict())
print("published:", nl.meta["paper_claims"], nl.meta["errata"])

# load random words, then sweep every address
rng = np.random.default_rng(42)
data = rng.integers(0, 2, size=(16, 2))
fill = {f"R{w + 1}D{j}": int(data[w, j]) for w in range(16) for j in range(2)}
vecs = [{**fill, **{f"I{i + 1}": (a >> (3 - i)) & 1 for i in range(4)}} for a in range(16)]
for a, row in enumerate(run(nl, vecs)):
    got = (row["Q0"], row["Q1"])
    print(f"addr {a:2d}  stored {tuple(int(x) for x in data[a])}  read {got}")
