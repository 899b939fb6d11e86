"""Complex, p-adic and adelic state vectors side by side."""
import math

from padicgates.psynth import word
from padicgates.qsim import (
    AdelicState,
    ComplexGate,
    ComplexState,
    PadicState,
    adelic_gate,
    apply_adelic,
    apply_complex,
    apply_padic,
    is_normalized_adelic,
    padic_probabilities,
    probabilities,
    sample,
)

# complex: Bell state from H then CNOT
s = ComplexState.basis("00")
s = apply_complex(ComplexGate("H", (0,)), s)
s = apply_complex(ComplexGate("CNOT", (0, 1)), s)
print("Bell probabilities:", probabilities(s))
shots = sample(s, 1000, seed=0)
print("1000 shots:", {b: shots.count(b) for b in sorted(set(shots))})

# p-adic: coefficients stay in Z_p, valuations replace probabilities
ps = PadicState.from_residues(5, 3, [1, 0])
ps = apply_padic(word(5, 3, ("Pminus", 5)), ps)
print("\n5-adic state:", [str(a) for a in ps.amplitudes])
print("valuations:", {b: str(v) for b, v in padic_probabilities(ps).items()})

# adelic: a gate acting at the real place and at p = 5 only
gate = adelic_gate(1, ComplexGate("Ry", (0,), (math.pi / 3,)), {5: word(5, 2, "X")})
a = apply_adelic(gate, AdelicState.basis("0"))
for bits, c in zip(("0", "1"), a.coefficients):
    print(f"|{bits}>: inf={c.archimedean:.4f}  locals={ {q: str(x) for q, x in c.locals.items()} }  tail={c.tail}")
print("support:", sorted(a.support), " normalized:", is_normalized_adelic(a))
