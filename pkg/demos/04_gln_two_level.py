"""GL_N(Z_p) as a product of two-level gates.

Each elementary factor from the Smith form acts on just two coordinates,
so it becomes a 2x2 word placed on a coordinate pair.
"""
import random

from padicgates.plinalg import PadicMatrix
from padicgates.psynth import eval_two_level, synth_gln

p, k, n = 5, 2, 4
rng = random.Random(1)
while True:
    g = PadicMatrix.from_rows(p, k, [[rng.randrange(p ** k) for _ in range(n)] for _ in range(n)])
    if g.is_gl():
        break

gates = synth_gln(g)
print(g)
print(f"{len(gates)} two-level gates:")
for gate in gates:
    print("  ", gate)
print("product == g:", eval_two_level(gates, p, k, n) == g)
