"""Monotone 2-CNF counts from a permanent, exactly-one SAT counts from
perfect matchings."""

from zhcount.formula import CnfFormula, count_sat
from zhcount.perm import build_permanent_graph, default_gadget, permanent_ryser
from zhcount.zw import XsatInstance, count_perfect_matchings_mod, verify_pm_cert, xsat_count, xsat_to_perfect_matchings

f = CnfFormula(3, ((1, 2), (2, 3)))
g = build_permanent_graph(f)
perm = permanent_ryser(g.adjacency())
m = len(g.gadget_blocks)
print("clause gadget weights:", default_gadget().weights)
print(f"{g.n}-vertex cycle-cover graph, permanent {perm}")
print(f"{perm} * 2^{g.isolated} / 4^{m} = {perm * 2**g.isolated // 4**m}, direct count {count_sat(f)}")

x = XsatInstance(4, ((1, 2, 3), (3, -4), (1, 4)))
cert = xsat_to_perfect_matchings(x)
pm1, pm2 = count_perfect_matchings_mod(cert.g1), count_perfect_matchings_mod(cert.g2)
print(f"XSAT count {xsat_count(x)}; graphs with {cert.g1.n} and {cert.g2.n} vertices")
print(f"perfect matchings {pm1} and {pm2}, decoded count {cert.decode(pm1, pm2)} mod {cert.modulus}")
print("certificate verifies:", verify_pm_cert(x, cert))
