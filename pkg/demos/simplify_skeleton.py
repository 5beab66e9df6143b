"""Scramble a circuit with rewrites, then simplify it back to a gadget skeleton."""

# %% A random circuit diagram with a few flow-preserving rewrites
import random

import numpy as np

from zxflow.corpus import random_flowful
from zxflow.flow import verify_zx_flow
from zxflow.oracle import equal_up_to_scalar, evaluate
from zxflow.rewrite import write_trace
from zxflow.simplify import is_skeleton, skeletonize

rng = random.Random(2024)
d, f = random_flowful(rng, 12, 3, n_rewrites=4)
print(f"{len(d.spiders())} spiders, {len(d.wires)} wires")

# %% Skeletonize, carrying the flow along every step
rw, strong = skeletonize(d, f, check=True)
print(f"{len(rw.steps)} steps -> {len(rw.d.spiders())} spiders; skeleton: {is_skeleton(rw.d)}")
print("strong flow verifies:", verify_zx_flow(rw.d, strong)[0])
print("transport stats:", rw.stats)

# %% The linear map is unchanged up to a scalar
lam = equal_up_to_scalar(evaluate(rw.d, cap=24), evaluate(d, cap=24))
print("scalar:", np.round(lam, 6))

# %% The trace is one JSON object per step
print(write_trace(rw.steps[:3]), end="")
