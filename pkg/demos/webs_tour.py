"""Pauli webs on small diagrams, checked against dense contraction."""

# %% A three-qubit Clifford unitary and its logical webs
from zxflow import oracle
from zxflow.gallery import clifford_unitary3, encoder_422
from zxflow.webs import check_isometry, firing_sign, format_web, web_class_counts

d = clifford_unitary3()
lz, lx = check_isometry(d)
for i, (z, x) in enumerate(zip(lz, lx)):
    for name, w in (("Z", z), ("X", x)):
        r = oracle.verify_firing(d, w)
        print(f"{name}{i}: {r.input_pauli} -> {'+' if r.sign == 1 else '-'}{r.output_pauli}")
        assert r.sign == firing_sign(d, w)

# %% Every web is logical here; an encoder also has stabiliser webs
def counts(diagram):
    return {k.value: n for k, n in web_class_counts(diagram).items() if n}


print(counts(d))
print(counts(encoder_422()))

# %% One line per web: wire letters, then defects (none for webs)
print(format_web(d, lz[0]))
