"""Walk through the reversible gate library."""
from revrom.gates import GateKind, eval_backward, eval_gate, is_reversible, metadata, truth_table

# every gate is a permutation of its input space
for kind in GateKind:
    spec = metadata(kind)
    rows = truth_table(kind)
    ok = is_reversible([y for _, y in rows])
    print(f"{kind.value:8s} width {spec.width}  qc {spec.quantum_cost}  delay {spec.delay}  "
          f"transistors {spec.transistor_count}  bijective {ok}")

# NP: A=0 copies B and C, A=1 swaps in C' and B; S is R xor D
print()
print("NP truth table")
for x, y in truth_table("NP"):
    print("".join(map(str, x)), "->", "".join(map(str, y)))

# backward evaluation undoes the forward map
out = eval_gate("NP", (1, 0, 1, 1))
print()
print("NP(1,0,1,1) =", out, " backward ->", eval_backward("NP", out))

# HL with C=0, D=1 is a 2-to-4 one-hot decoder
for x in (0, 1):
    for y in (0, 1):
        print(f"HL({x},{y},0,1) =", eval_gate("HL", (x, y, 0, 1)))
