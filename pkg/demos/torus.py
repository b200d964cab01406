"""The two torus constructions: the circle family and the sign-table pair on T^2.

Run with ``python3 demos/torus.py``.
"""

import numpy as np

from sumdiff.torus import (
    Case1Params,
    GateRefused,
    Remark2Config,
    case1_charfns,
    case1_verify,
    case2_degeneration_check,
    remark2_sign_table,
    remark2_verify,
)

np.set_printoptions(precision=4, suppress=True)

p = Case1Params(sigma=0.5, m=3, q=0.7, t1=0.3, t2=-1.1)
n, f1, f2 = case1_charfns(p)
mid = p.nmax
print("circle family, |f_1| and |f_2| for n = 0..6:")
print(" ", np.abs(f1[mid:mid + 7]))
print(" ", np.abs(f2[mid:mid + 7]))
rep = case1_verify(p)
print("identity residual on |u|,|v| <= 32:", rep.eq3_max_residual)
print("min density:", round(rep.min_density, 4), "verdicts:", rep.verdicts)

# push q up with little smoothing and the densities go negative
bad = case1_verify(Case1Params(sigma=0.01, m=3, q=5.0, nmax=128))
print("sigma=0.01, q=5: positive =", bad.verdicts["positive"], "min density", round(bad.min_density, 3))

print("\nsign tables l_1, l_2 on Z(4)^2:")
print(remark2_sign_table(1))
print(remark2_sign_table(2))
rep = remark2_verify(Remark2Config(sigma=2.0))
print("gate sum:", round(rep.gate_sum, 5), "min density:", round(rep.min_density, 4))
print("pi_1:\n", np.array(rep.pi_tables[0]))
print("verdicts:", rep.verdicts)

try:
    remark2_verify(Remark2Config(sigma=0.05))
except GateRefused as exc:
    print("sigma=0.05:", exc)

print("\nHaar paired with odd frequencies only:", bool(case2_degeneration_check(mu2={1: 0.3, 3: 0.1})))
res = case2_degeneration_check(mu2={1: 0.3, 2: 0.2})
print("with an even frequency:", bool(res), "witness", res.witness)
