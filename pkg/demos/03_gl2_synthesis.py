"""Compiling GL_2(Z_p) into words over {X, P-, M_zeta, P_1+p}.

The compiler peels the determinant, makes the lower-left entry a unit
(swapping rows with X if needed) and factors the rest as
upper * lower * upper unipotent matrices.  The BFS oracle then confirms,
independently, that these four gates reach all of GL_2(Z/p^k) for small p^k.
"""
import random

from padicgates.plinalg import PadicMatrix
from padicgates.psynth import bfs_oracle, eval_word, synth_gl2

p, k = 7, 3
rng = random.Random(0)
for _ in range(5):
    while True:
        rows = [[rng.randrange(p ** k) for _ in range(2)] for _ in range(2)]
        g = PadicMatrix.from_rows(p, k, rows)
        if g.is_gl():
            break
    w = synth_gl2(g)
    print(f"{g.tolist()} -> {w}   ({len(w)} symbols, ok={eval_word(w) == g})")

for p, k in [(3, 1), (5, 1), (3, 2)]:
    rep = bfs_oracle(p, k)
    print(f"p={p} k={k}: reached {rep.reachable} of |GL_2(Z/{p}^{k})| = {rep.group_order}")
