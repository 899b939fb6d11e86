"""Units of Z_p as zeta^a (1+p)^b.

Every unit at precision p^k splits into a power of the smallest primitive
root and a power of 1+p.  These are the exponents the gates M_zeta and
P_1+p carry when a determinant is peeled off a 2x2 matrix.
"""
from padicgates.padic import make, primitive_root, unit_decompose, valuation

p, k = 5, 3
print(f"working in Z_{p} mod {p}^{k} = {p ** k}")
print("smallest primitive root:", primitive_root(p))

x = make(p, k, -1)
print("-1 is stored as", x, "and its inverse is", x.inverse())

for u in (2, 7, 124, 63):
    dec = unit_decompose(make(p, k, u))
    print(f"{u:>4} = {dec.zeta}^{dec.a} * {1 + p}^{dec.b}  (mod {p ** k}) -> check {dec.recompose().r}")

# valuations stand in for p-adic "probabilities": larger means smaller
for n in (7, 50, 0):
    print(f"v_5({n}) mod 5^3 =", valuation(make(p, k, n)))
