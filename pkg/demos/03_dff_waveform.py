"""A level-sensitive D flip-flop from one NP gate, with a VCD dump of its trace."""
import sys

import numpy as np

from revrom.circuit import analyze
from revrom.netio import write_vcd
from revrom.simfunc import run
from revrom.synth import build_dff

for comp in (False, True):
    nl = build_dff(comp)
    print(nl.name, analyze(nl).as_dict())
    print("  published claims:", nl.meta["paper_claims"])
    for note in nl.meta["errata"]:
        print("  note:", note)

rng = np.random.default_rng(0)
stim = [{"E": int(e), "D": int(d)} for e, d in rng.integers(0, 2, size=(16, 2))]
nl = build_dff(True)
trace = run(nl, stim)

print()
print("E ", "".join(str(v["E"]) for v in stim))
print("D ", "".join(str(v["D"]) for v in stim))
print("Q ", "".join(str(t["Q"]) for t in trace))
print("Q'", "".join(str(t["Qbar"]) for t in trace))

path = sys.argv[1] if len(sys.argv) > 1 else "dff.vcd"
with open(path, "w") as fh:
    write_vcd(fh, trace, signals=["E", "D", "Q", "Qbar"], scope=nl.name)
print("wrote", path)
