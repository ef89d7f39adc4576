"""Build n-to-2^n decoders and check them three ways: counts, one-hot output, reversibility."""
from revrom.circuit import analyze, garbage_wires
from revrom.netio import to_dot
from revrom.simfunc import check_injective, evaluate, run_backward
from revrom.synth import build_decoder, theorem_report

for n in range(2, 7):
    nl = build_decoder(n)
    r = analyze(nl)
    rep = theorem_report(nl)
    print(f"n={n}: {r.gate_count:3d} gates  {r.transistor_count:4d} transistors  "
          f"{r.garbage_outputs} garbage  delay {r.delay}  closed forms ok: {rep.ok}")

d3 = build_decoder(3)
for a in range(8):
    bits = {f"I{i + 1}": (a >> (2 - i)) & 1 for i in range(3)}
    vals = evaluate(d3, bits)
    print(f"address {a:03b} ->", "".join(str(vals[w]) for w in d3.outputs))

# the outputs plus the one garbage wire determine the address
print("injective:", check_injective(d3))
fwd = evaluate(d3, {"I1": 1, "I2": 1, "I3": 0})
back = run_backward(d3, {w: fwd[w] for w in list(d3.outputs) + garbage_wires(d3)})
print("backward from one-hot 6:", {w: back[w] for w in d3.inputs})

print()
print(to_dot(build_decoder(2)))
