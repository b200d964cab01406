"""Walk through the finite-group side: testing pairs, then factoring one.

Run with ``python3 demos/finite_groups.py``.
"""

import numpy as np

from sumdiff.corpus import signed_pair, z4_square_sign_pairs
from sumdiff.groups import Group
from sumdiff.kb import decompose, oracle_equivalence
from sumdiff.measures import Measure, uniform

np.set_printoptions(precision=4, suppress=True)

# Two fair coins: sum and difference mod 2 always agree, so they are dependent.
z2 = Group((2,))
res = oracle_equivalence(uniform(z2), uniform(z2))
print("Z(2), uniform pair:", res.holds, "witness", res.witness)

# Uniform on Z(3) is fine: sum and difference are both uniform and independent.
z3 = Group((3,))
print("Z(3), uniform pair:", bool(oracle_equivalence(uniform(z3), uniform(z3))))

# Exact arithmetic: a rational pair on Z(4) that fails, with the first bad (u, v).
z4 = Group((4,))
mu = Measure.from_fractions(z4, ["1/2", "1/4", "0", "1/4"])
res = oracle_equivalence(mu, mu)
print("Z(4), (1/2, 1/4, 0, 1/4) twice:", res.holds, "exact:", res.exact, "witness", res.witness)

# A signed pair on Z(4)^2 built from an even sign table, coset amplitudes and shifts.
g = Group((4, 4))
signs = next(s for s in z4_square_sign_pairs() if (s[0] < 0).any() and (s[1] < 0).any())
m1, m2 = signed_pair(g, signs=signs, p={1: 0.3, 2: -0.2, 3: 0.1}, shifts=(5, 9))
print("\nsigned pair, smallest weights:", m1.weights.real.min().round(4), m2.weights.real.min().round(4))
print("independent (joint law agrees):", bool(oracle_equivalence(m1, m2, allow_signed=True)))

rep = decompose(m1, m2)
s = rep.structure
print("N has", len(s.N), "elements; G =", list(s.G.elements()), "; |V| =", len(s.V))
print("coset amplitudes p_1:", [round(r["p1"], 4) for r in rep.p_table])
print("shifts x_1, x_2:", rep.x_shift)
print("pi_1 as a 4x4 table:\n", rep.pi[0].weights.real.reshape(4, 4))
print("residual:", rep.residual)
for name, ok in rep.invariants().items():
    print(f"  {name:28s} {ok}")
