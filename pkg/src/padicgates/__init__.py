"""p-adic and adelic quantum gates: exact Z_p arithmetic, Smith normal form,
gate-word synthesis for GL_N(Z_p) and GL_N(Z), and state-vector simulators."""

from .padic import (
    AtLeast,
    PadicError,
    PadicInt,
    UnitDecomposition,
    arith,
    inverse,
    make,
    parse_padic,
    primitive_root,
    unit_decompose,
    valuation,
)
from .plinalg import (
    Dilation,
    PadicMatrix,
    SmithDecomposition,
    Swap,
    Transvection,
    det,
    elementary_divisor_check,
    elementary_to_matrix,
    is_gl,
    mat_mul,
    smith_normal_form,
)
from .psynth import (
    GateSymbol,
    GateWord,
    TwoLevelGate,
    bfs_oracle,
    eval_word,
    synth_gl2,
    synth_gln,
)
from .zsynth import HRWord, decompose_glnz, eval_hr, hr_generators

__version__ = "0.1.0"
