"""State-vector simulation for complex, p-adic and adelic (over Q) qubits.

Basis states are labelled by bit strings ``k_n ... k_1``; qubit 0 is the
leftmost character, so a state's amplitude array is indexed by
``int(bits, 2)``.

Gate conventions follow the usual textbook forms with two exceptions
worth knowing about:

* ``Y`` is ``[[0, i], [-i, 0]]``, the negative of the more common choice.
* ``Rz(theta)`` is ``diag(exp(-i theta/2), exp(i theta/2))``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .padic import PadicError, PadicInt, Valuation, is_prime, make, valuation
from .plinalg import PadicMatrix, is_gl
from .psynth import GateWord, eval_word, parse_word, word

GATE_TOL = 1e-12
NORM_TOL = 1e-9

_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    "S": np.diag([1, 1j]),
    "T": np.diag([1, cmath.exp(1j * math.pi / 4)]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}
_TOFFOLI = np.eye(8, dtype=complex)
_TOFFOLI[6:, 6:] = [[0, 1], [1, 0]]
_FIXED["Toffoli"] = _TOFFOLI


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])


_PARAM = {
    "M": lambda a: cmath.exp(1j * a) * np.eye(2),
    "P": lambda a: np.diag([1, cmath.exp(1j * a)]),
    "Rx": _rx,
    "Ry": _ry,
    "Rz": _rz,
}

GATE_KINDS = tuple(_PARAM) + tuple(_FIXED)


class SimulationError(ValueError):
    pass


def gate_matrix(kind: str, params: Sequence[float] = ()) -> np.ndarray:
    if kind in _FIXED:
        return _FIXED[kind].copy()
    if kind in _PARAM:
        if len(params) != 1:
            raise SimulationError(f"{kind} takes one angle parameter")
        return np.asarray(_PARAM[kind](float(params[0])), dtype=complex)
    raise SimulationError(f"unknown gate kind {kind!r}")


def is_unitary(u: np.ndarray, tol: float = GATE_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=tol)


@dataclass(frozen=True)
class ComplexGate:
    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", tuple(float(x) for x in self.params))
        m = gate_matrix(self.kind, self.params)
        arity = int(round(math.log2(m.shape[0])))
        if len(self.targets) != arity:
            raise SimulationError(f"{self.kind} acts on {arity} qubit(s), got targets {self.targets}")
        if len(set(self.targets)) != arity:
            raise SimulationError(f"repeated target in {self.targets}")
        if not is_unitary(m):
            raise SimulationError(f"{self.kind} is not unitary")

    @property
    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.params)

    def adjoint_matrix(self) -> np.ndarray:
        return self.matrix.conj().T


def apply_matrix(amps: np.ndarray, mat: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Apply a ``2**len(targets)`` square matrix to the listed qubits."""
    k = len(targets)
    if any(not 0 <= t < n for t in targets) or len(set(targets)) != k:
        raise SimulationError(f"bad targets {tuple(targets)} for {n} qubits")
    psi = amps.reshape((2,) * n)
    g = np.asarray(mat).reshape((2,) * (2 * k))
    psi = np.tensordot(g, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return psi.reshape(-1)


def lift_matrix(mat: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of a gate acting on ``targets``."""
    eye = np.eye(2 ** n, dtype=complex)
    cols = [apply_matrix(eye[:, c], mat, targets, n) for c in range(2 ** n)]
    return np.stack(cols, axis=1)


def bitstrings(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2 ** n)]


# --- complex regime ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2 ** self.n:
            raise SimulationError(f"expected {2 ** self.n} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise SimulationError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, bits: str) -> ComplexState:
        n = len(bits)
        amps = np.zeros(2 ** n, dtype=complex)
        amps[int(bits, 2)] = 1
        return cls(n, amps)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1) <= tol


def apply_complex(gate: ComplexGate, state: ComplexState) -> ComplexState:
    return ComplexState(state.n, apply_matrix(state.amplitudes, gate.matrix, gate.targets, state.n))


def probabilities(state: ComplexState) -> dict[str, float]:
    if not state.is_normalized():
        raise SimulationError(f"state is not normalized (|x|^2 = {state.norm_squared()})")
    probs = np.abs(state.amplitudes) ** 2
    return dict(zip(bitstrings(state.n), probs.tolist()))


def sample(state: ComplexState, shots: int, seed) -> list[str]:
    """Born-rule samples; the same seed gives the same sequence."""
    probs = np.array(list(probabilities(state).values()))
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(probs), size=shots, p=probs / probs.sum())
    labels = bitstrings(state.n)
    return [labels[i] for i in idx]


def measure_sample(state: ComplexState, seed) -> str:
    return sample(state, 1, seed)[0]


# --- p-adic regime ---------------------------------------------------------------

@dataclass(frozen=True)
class PadicState:
    """Amplitudes in Z_p at a shared ``(p, k)``; always normalized."""

    n: int
    amplitudes: tuple[PadicInt, ...]

    def __post_init__(self):
        amps = tuple(self.amplitudes)
        if len(amps) != 2 ** self.n:
            raise SimulationError(f"expected {2 ** self.n} amplitudes, got {len(amps)}")
        if len({(a.p, a.k) for a in amps}) != 1:
            raise SimulationError("amplitudes must share (p, k)")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_residues(cls, p: int, k: int, values: Sequence[int]) -> PadicState:
        n = int(round(math.log2(len(values))))
        return cls(n, tuple(make(p, k, v) for v in values))

    @classmethod
    def basis(cls, p: int, k: int, bits: str) -> PadicState:
        vals = [0] * 2 ** len(bits)
        vals[int(bits, 2)] = 1
        return cls.from_residues(p, k, vals)

    @property
    def p(self) -> int:
        return self.amplitudes[0].p

    @property
    def k(self) -> int:
        return self.amplitudes[0].k

    def residues(self) -> list[int]:
        return [a.r for a in self.amplitudes]

    def is_normalized(self) -> bool:
        # Z_p-valued by construction; Q_p amplitudes are not representable
        return all(isinstance(a, PadicInt) for a in self.amplitudes)


def lift_padic(gate: PadicMatrix, targets: Sequence[int], n: int) -> PadicMatrix:
    """Embed a gate on ``targets`` into the full ``2**n`` space over Z_p."""
    k = len(targets)
    if gate.n != 2 ** k:
        raise SimulationError(f"gate of size {gate.n} cannot act on {k} qubit(s)")
    if any(not 0 <= t < n for t in targets) or len(set(targets)) != k:
        raise SimulationError(f"bad targets {tuple(targets)} for {n} qubits")
    shifts = [n - 1 - t for t in targets]
    mask = sum(1 << s for s in shifts)

    def sub(idx: int) -> int:
        return sum(((idx >> s) & 1) << (k - 1 - pos) for pos, s in enumerate(shifts))

    size = 2 ** n
    rows = [[gate.entries[sub(r)][sub(c)] if (r & ~mask) == (c & ~mask) else 0 for c in range(size)]
            for r in range(size)]
    return PadicMatrix.from_rows(gate.p, gate.k, rows)


def _as_padic_matrix(gate: Union[PadicMatrix, GateWord]) -> PadicMatrix:
    return eval_word(gate) if isinstance(gate, GateWord) else gate


def apply_padic(gate: Union[PadicMatrix, GateWord], state: PadicState,
                targets: Sequence[int] | None = None) -> PadicState:
    """Act with a GL_N(Z_p) gate; ``targets`` embeds a smaller gate."""
    g = _as_padic_matrix(gate)
    if (g.p, g.k) != (state.p, state.k):
        raise PadicError(f"gate at {g.p}^{g.k} vs state at {state.p}^{state.k}")
    if not is_gl(g):
        raise SimulationError("gate is not in GL_N(Z_p)")
    if targets is not None:
        g = lift_padic(g, targets, state.n)
    if g.n != 2 ** state.n:
        raise SimulationError(f"gate size {g.n} does not match {state.n} qubit(s)")
    return PadicState.from_residues(state.p, state.k, g.apply(state.residues()))


def padic_probabilities(state: PadicState) -> dict[str, Valuation]:
    """Valuation of each coefficient; a larger valuation reads as less likely."""
    return {b: valuation(a) for b, a in zip(bitstrings(state.n), state.amplitudes)}


# --- adelic regime (F = Q) ---------------------------------------------------------

@dataclass(frozen=True)
class AdelicCoefficient:
    """One adele: a real-place value plus finitely many p-adic components.

    ``tail`` is the integer held at every prime not listed in ``locals``;
    ``None`` means no integrality is asserted there.
    """

    archimedean: complex
    locals: Mapping[int, PadicInt] = field(default_factory=dict)
    tail: int | None = 0

    def __post_init__(self):
        object.__setattr__(self, "archimedean", complex(self.archimedean))
        loc = dict(self.locals)
        for q, x in loc.items():
            if not is_prime(q) or x.p != q:
                raise SimulationError(f"local component at {q} must be a {q}-adic integer")
        object.__setattr__(self, "locals", loc)

    @property
    def tail_integral(self) -> bool:
        return self.tail is not None

    def local(self, q: int, k: int) -> PadicInt:
        """The ``q``-component, materialised from ``tail`` if unlisted."""
        if q in self.locals:
            return self.locals[q]
        if self.tail is None:
            raise SimulationError(f"no value known at unlisted prime {q}")
        return make(q, k, self.tail)


@dataclass(frozen=True)
class AdelicState:
    n: int
    coefficients: tuple[AdelicCoefficient, ...]

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if len(coeffs) != 2 ** self.n:
            raise SimulationError(f"expected {2 ** self.n} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def basis(cls, bits: str) -> AdelicState:
        idx = int(bits, 2)
        return cls(len(bits), tuple(AdelicCoefficient(float(i == idx), {}, int(i == idx))
                                    for i in range(2 ** len(bits))))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(q for c in self.coefficients for q in c.locals)

    def archimedean(self) -> np.ndarray:
        return np.array([c.archimedean for c in self.coefficients])

    def local_vector(self, q: int, k: int) -> list[PadicInt]:
        return [c.local(q, k) for c in self.coefficients]


@dataclass(frozen=True, eq=False)
class AdelicGate:
    """Finite-type gate: a unitary at the real place, GL_N(Z_p) at finitely many primes.

    ``archimedean=None`` is the identity; every prime absent from ``locals``
    is acted on trivially.
    """

    n: int
    archimedean: np.ndarray | None = None
    locals: Mapping[int, PadicMatrix] = field(default_factory=dict)

    def __post_init__(self):
        dim = 2 ** self.n
        if self.archimedean is not None:
            u = np.asarray(self.archimedean, dtype=complex)
            if u.shape != (dim, dim):
                raise SimulationError(f"archimedean part must be {dim}x{dim}")
            if not is_unitary(u):
                raise SimulationError("archimedean part is not unitary/orthogonal")
            object.__setattr__(self, "archimedean", u)
        loc = dict(self.locals)
        for q, g in loc.items():
            if g.p != q:
                raise SimulationError(f"local gate at {q} is over Z_{g.p}")
            if g.n != dim:
                raise SimulationError(f"local gate at {q} must be {dim}x{dim}")
            if not is_gl(g):
                raise SimulationError(f"local gate at {q} is not in GL_N(Z_{q})")
        object.__setattr__(self, "locals", loc)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.locals)


def adelic_gate(n: int, inf: ComplexGate | np.ndarray | None = None,
                locals: Mapping[int, Union[PadicMatrix, GateWord]] | None = None,
                targets: Sequence[int] | None = None) -> AdelicGate:
    """Build an :class:`AdelicGate`, lifting gates that act on fewer qubits.

    A :class:`ComplexGate` brings its own targets; local words/matrices
    smaller than ``2**n`` are placed on ``targets``.
    """
    arch = None
    if isinstance(inf, ComplexGate):
        arch = lift_matrix(inf.matrix, inf.targets, n)
    elif inf is not None:
        arch = np.asarray(inf, dtype=complex)
    loc = {}
    for q, g in (locals or {}).items():
        m = _as_padic_matrix(g)
        if m.n != 2 ** n:
            if targets is None:
                raise SimulationError("targets needed to place a smaller local gate")
            m = lift_padic(m, targets, n)
        loc[int(q)] = m
    return AdelicGate(n, arch, loc)


def apply_adelic(gate: AdelicGate, state: AdelicState) -> AdelicState:
    """Act place by place; places outside the gate's support are untouched."""
    if gate.n != state.n:
        raise SimulationError(f"gate on {gate.n} qubit(s) vs state on {state.n}")
    arch = [c.archimedean for c in state.coefficients]
    if gate.archimedean is not None:
        arch = (gate.archimedean @ np.array(arch)).tolist()
    locs = [dict(c.locals) for c in state.coefficients]
    for q, g in gate.locals.items():
        vec = state.local_vector(q, g.k)
        k = min([g.k] + [x.k for x in vec])
        out = g.reduce(k).apply([x.r for x in vec])
        for d, r in zip(locs, out):
            d[q] = PadicInt(q, k, r)
    coeffs = tuple(AdelicCoefficient(a, d, c.tail) for a, d, c in zip(arch, locs, state.coefficients))
    return AdelicState(state.n, coeffs)


def is_normalized_adelic(state: AdelicState, tol: float = NORM_TOL) -> bool:
    """Integral at every finite place and unit norm at the real place."""
    for c in state.coefficients:
        if not c.tail_integral:
            return False
        for x in c.locals.values():
            v = valuation(x)
            if isinstance(v, int) and v < 0:
                return False
    return abs(float(np.sum(np.abs(state.archimedean()) ** 2)) - 1) <= tol


# --- circuit files ------------------------------------------------------------------

def complex_gate_from_json(obj) -> ComplexGate:
    return ComplexGate(obj["kind"], tuple(obj.get("targets", ())), tuple(obj.get("params", ())))


def padic_gate_from_json(obj, p: int, k: int) -> tuple[PadicMatrix, tuple[int, ...] | None]:
    """Decode ``{"kind", "params", "targets"}`` for the p-adic regime.

    ``kind`` is ``"word"`` (params: token string), ``"matrix"`` (params:
    integer rows) or a generator name (params: ``[exponent]``).
    """
    kind = obj["kind"]
    k = obj.get("k", k)
    params = obj.get("params", [])
    if kind == "word":
        m = eval_word(parse_word(params, p, k))
    elif kind == "matrix":
        m = PadicMatrix.from_rows(p, k, params)
    elif kind in ("X", "Pminus", "Mzeta", "P1p"):
        e = int(params[0]) if params else 1
        m = eval_word(word(p, k, (kind, e)))
    else:
        raise SimulationError(f"unknown p-adic gate kind {kind!r}")
    targets = obj.get("targets")
    return m, (tuple(targets) if targets is not None else None)


def _complex_value(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _encode_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def initial_state(circuit: dict):
    regime, n = circuit["regime"], int(circuit["n"])
    init = circuit.get("initial", "0" * n)
    if regime == "complex":
        if isinstance(init, str):
            return ComplexState.basis(init)
        return ComplexState(n, [_complex_value(v) for v in init])
    if regime == "padic":
        p, k = int(circuit["p"]), int(circuit["k"])
        if isinstance(init, str):
            return PadicState.basis(p, k, init)
        return PadicState.from_residues(p, k, init)
    if regime == "adelic":
        if isinstance(init, str):
            return AdelicState.basis(init)
        k = int(circuit.get("k", 1))
        coeffs = []
        for c in init:
            loc = {int(q): make(int(q), k, r) for q, r in c.get("locals", {}).items()}
            coeffs.append(AdelicCoefficient(_complex_value(c.get("inf", 0.0)), loc, c.get("tail", 0)))
        return AdelicState(n, tuple(coeffs))
    raise SimulationError(f"unknown regime {regime!r}")


def run_circuit(circuit: dict):
    """Evaluate a circuit dict; returns ``(initial_state, final_state)``."""
    regime, n = circuit["regime"], int(circuit["n"])
    state = initial_state(circuit)
    init = state
    if regime == "complex" and not state.is_normalized():
        raise SimulationError("initial state is not normalized")
    if regime == "adelic" and not is_normalized_adelic(state):
        raise SimulationError("initial adelic state is not normalized")
    for g in circuit.get("gates", []):
        if regime == "complex":
            state = apply_complex(complex_gate_from_json(g), state)
        elif regime == "padic":
            m, targets = padic_gate_from_json(g, state.p, state.k)
            state = apply_padic(m, state, targets)
        else:
            inf = g.get("inf")
            arch = None
            if inf:
                cg = complex_gate_from_json(inf)
                arch = lift_matrix(cg.matrix, cg.targets, n)
            loc = {}
            for q, local_gate in g.get("locals", {}).items():
                q = int(q)
                m, targets = padic_gate_from_json(local_gate, q, int(circuit.get("k", 1)))
                loc[q] = lift_padic(m, targets, n) if targets is not None and m.n != 2 ** n else m
            gate = AdelicGate(n, arch, loc)
            state = apply_adelic(gate, state)
    return init, state


def state_to_json(state) -> dict:
    if isinstance(state, ComplexState):
        return {"n": state.n, "amplitudes": [_encode_complex(z) for z in state.amplitudes.tolist()]}
    if isinstance(state, PadicState):
        return {"n": state.n, "p": state.p, "k": state.k, "residues": state.residues()}
    return {
        "n": state.n,
        "support": sorted(state.support),
        "coefficients": [
            {"inf": _encode_complex(c.archimedean),
             "locals": {str(q): {"k": x.k, "r": x.r} for q, x in sorted(c.locals.items())},
             "tail": c.tail}
            for c in state.coefficients
        ],
    }
