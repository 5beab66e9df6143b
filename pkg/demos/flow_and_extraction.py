"""Find a ZX-flow, peel the non-Clifford spiders, and check the circuit."""

# %% Two non-Clifford spiders on one wire
from zxflow.circuit import emit_qasm
from zxflow.extract import extract, verify_extraction
from zxflow.flow import find_zx_flow, is_focused, verify_zx_flow
from zxflow.gallery import two_phase_line, two_phase_line_flow
from zxflow.webs import defects

d = two_phase_line()
f = find_zx_flow(d)
print("order:", f.order, "focused:", is_focused(d, f))
for v in f.order:
    print(f"f({v}) defects:", {k: str(a) for k, a in defects(d, f.flows[v]).items()})

# %% Swapping the order breaks the flow
print(verify_zx_flow(d, two_phase_line_flow(reverse=True)))

# %% Extraction gives one Pauli exponential per non-Clifford spider
c = extract(d, f)
for e in c.exps:
    print(f"exp(-i {e.angle} pi/2 {e.pauli})")
print(emit_qasm(c.gates()))
lam = verify_extraction(d, c)
print("proportional with constant", lam)
