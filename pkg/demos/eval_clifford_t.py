"""Evaluate random scalar ZH-diagrams with pi/4 phases by reducing them to
pairs of 3-CNF model counts, and compare with direct contraction."""

from zhcount.diagram import contract
from zhcount.evalzh import eval_via_counting, fragment_of, lower_fragment
from zhcount.instances import random_zh

for seed in range(5):
    d = random_zh(seed, 2, 6)
    level = fragment_of(d)
    line = f"seed {seed}: {len(d.nodes)} nodes, {level}"
    if level.k:
        c, a, d1, d2 = lower_fragment(d)
        line += f", lowered to levels {fragment_of(d1).k} and {fragment_of(d2).k}"
    v = eval_via_counting(d)
    print(line)
    print(f"  by counting {v.to_complex():.4f}   by contraction {contract(d).to_complex():.4f}   equal {v == contract(d)}")
