"""GL_N(Z) from the cyclic shift X and the transvection P.

Row reduction turns g into the identity with transvections; each
transvection is a conjugate X^m P^b X^-m or a commutator of two of them.
For N = 2 the words use {Z, X, P} instead.
"""
import random

from padicgates.zsynth import decompose_glnz, eval_hr, hr_generators, random_word

x, p = hr_generators(4)
print("X =", x)
print("P =", p)

g = [[2, 1], [1, 1]]
w = decompose_glnz(g)
print(f"\n{g} = {w}")

rng = random.Random(3)
for n in (2, 3, 4):
    g = eval_hr(random_word(n, 12, rng))
    w = decompose_glnz(g)
    print(f"N={n}: {len(w)} symbols, exact={eval_hr(w) == g}, g={g}")
