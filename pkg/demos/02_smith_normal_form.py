"""Smith normal form over Z_p with elementary factors.

The decomposition records every row and column operation as one of the
three elementary types T_ij(b), P_ij, D_i(u), so L and R can be rebuilt
and checked independently against the gcd-of-minors characterisation.
"""
from padicgates.plinalg import (
    PadicMatrix,
    elementary_divisor_check,
    minor_valuations,
    smith_normal_form,
)

a = PadicMatrix.from_rows(3, 3, [[6, 3, 9], [3, 12, 0], [9, 0, 18]])
print(a)
snf = smith_normal_form(a)
print("exponents e_i        :", [str(e) for e in snf.exponents])
print("v(Delta_i) from minors:", [str(v) for v in minor_valuations(a)])
print("L factors:", *snf.L_factors, sep="\n  ")
print("R factors:", *snf.R_factors, sep="\n  ")
print("L A R == diag(p^e):", snf.left() @ a @ snf.right() == snf.diagonal())
print("minor oracle agrees:", elementary_divisor_check(a, snf))

# an invertible matrix has trivial divisors, so A = L^-1 R^-1
g = PadicMatrix.from_rows(3, 3, [[2, 1, 0], [1, 1, 4], [0, 3, 1]])
s = smith_normal_form(g)
print("\nGL_3 example exponents:", s.exponents)
print("A == L^-1 R^-1:", s.left().inverse() @ s.right().inverse() == g)
