"""Rewriting CNOT/ECR circuits into the native set {S, virtual Z, ECR_down}.

A :class:`GateSeq` lists gates in time order (first listed acts first).
Lowering happens in three steps:

* :func:`transpile` replaces CNOT_down, CNOT_up and ECR_up by a single
  ECR_down dressed with one-qubit gates;
* :func:`expand_native` rewrites H, X, Y+/-, Z+/- into S and Z_theta;
* :func:`compile_virtual_z` pushes every Z_theta to the end of the circuit,
  turning each pulse it crosses into a frame-shifted pulse.

Frame-shifted pulses are G_phi = Z_phi^dag G Z_phi, so for a single qubit
``[Z_theta(a), S]`` becomes ``[S_theta(a)]`` followed by a pending Z_theta(a)
that commutes with Z-basis readout.  ECR_down carries one frame angle per
qubit in the same way.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import gates as g

TWO_PI = 2 * math.pi

ONE_QUBIT = {"S", "S_theta", "Z_theta", "H", "X", "Y+", "Y-", "Z+", "Z-"}
TWO_QUBIT = {"ECR_down", "ECR_up", "CNOT_down", "CNOT_up", "CR+", "CR-"}
PARAMETRIZED = {"S_theta": 1, "Z_theta": 1}
# labels compile_virtual_z knows how to lower
EXPANDABLE = {"S", "S_theta", "Z_theta", "H", "X", "Y+", "Y-", "Z+", "Z-", "ECR_down"}
NATIVE = {"S", "S_theta", "Z_theta", "ECR_down"}


class TranspileError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.name in ONE_QUBIT:
            nq = 1
        elif self.name in TWO_QUBIT:
            nq = 2
        else:
            raise TranspileError(f"unknown gate {self.name!r}")
        if len(self.qubits) != nq or len(set(self.qubits)) != nq:
            raise TranspileError(f"{self.name} needs {nq} distinct qubit(s), got {self.qubits}")
        if self.name == "ECR_down":
            nparams = (0, 2)
        else:
            nparams = (PARAMETRIZED.get(self.name, 0),)
        if len(self.params) not in nparams:
            raise TranspileError(f"{self.name} takes {nparams} parameter(s), got {self.params}")
        if not all(math.isfinite(p) for p in self.params):
            raise TranspileError(f"non-finite angle in {self}")

    def matrix(self) -> np.ndarray:
        return gate_matrix(self)

    def __str__(self) -> str:
        head = self.name
        if self.params:
            head += "(" + ",".join(repr(p) for p in self.params) + ")"
        return " ".join([head] + [f"q[{q}]" for q in self.qubits])


@dataclass(frozen=True)
class GateSeq:
    """Gates in time order plus pending virtual-Z frames per qubit."""

    gates: tuple[Gate, ...] = ()
    frames: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __iter__(self):
        return iter(self.gates)

    def __len__(self):
        return len(self.gates)

    def two_qubit_count(self) -> int:
        return sum(1 for gate in self.gates if len(gate.qubits) == 2)

    def names(self) -> set[str]:
        return {gate.name for gate in self.gates}

    def dumps(self) -> str:
        """One gate per line: ``NAME(theta) q[i] (q[j])``."""
        return "".join(str(gate) + "\n" for gate in self.gates)

    @classmethod
    def loads(cls, text: str) -> "GateSeq":
        out = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = _LINE.fullmatch(line)
            if m is None:
                raise TranspileError(f"line {lineno}: cannot parse {line!r}")
            params = tuple(float(p) for p in m["params"].split(",")) if m["params"] else ()
            qubits = tuple(int(q) for q in re.findall(r"q\[(\d+)\]", m["qubits"]))
            out.append(Gate(m["name"], qubits, params))
        return cls(tuple(out))


_LINE = re.compile(r"(?P<name>[A-Za-z_+\-]+)(?:\((?P<params>[^)]*)\))?(?P<qubits>(?:\s+q\[\d+\])+)")


def gate_matrix(gate: Gate) -> np.ndarray:
    name, p = gate.name, gate.params
    if name == "S":
        return g.s_gate()
    if name == "S_theta":
        return g.s_theta(p[0])
    if name == "Z_theta":
        return g.z_theta(p[0])
    if name == "H":
        return g.hadamard()
    if name == "X":
        return g.pauli("X")
    if name in ("Y+", "Y-"):
        return g.y_rot(math.pi / 2 if name == "Y+" else -math.pi / 2)
    if name in ("Z+", "Z-"):
        return g.z_theta(math.pi / 2 if name == "Z+" else -math.pi / 2)
    if name == "ECR_down":
        u = g.ecr("down")
        if p:
            z = g.kron(g.z_theta(p[0]), g.z_theta(p[1]))
            u = z.conj().T @ u @ z
        return u
    if name == "ECR_up":
        return g.ecr("up")
    if name == "CNOT_down":
        return g.cnot("down")
    if name == "CNOT_up":
        return g.cnot("up")
    if name in ("CR+", "CR-"):
        return g.cross_resonance(1 if name == "CR+" else -1)
    raise TranspileError(f"no matrix for {name!r}")


def seq_to_unitary(seq, nqubits: int) -> np.ndarray:
    """Product of embedded gate matrices, first listed gate acting first."""
    if not 1 <= nqubits <= 4:
        raise TranspileError(f"oracle supports 1..4 qubits, got {nqubits}")
    u = np.eye(2**nqubits, dtype=complex)
    for gate in seq:
        if max(gate.qubits) >= nqubits:
            raise TranspileError(f"{gate} addresses a qubit outside 0..{nqubits - 1}")
        u = g.embed(gate_matrix(gate), gate.qubits, nqubits) @ u
    return u


def transpile_cnot(direction: str = "down", control: int = 0, target: int = 1) -> GateSeq:
    """CNOT as one ECR_down plus single-qubit gates.

    ``direction='down'`` means ``control`` is the ECR's upper qubit,
    ``'up'`` means the ECR still runs upper-to-lower but the CNOT is reversed.
    Qubit arguments name the upper (first) and lower (second) qubit of the
    two-qubit gate in both cases.
    """
    q0, q1 = control, target
    if direction == "down":
        # CNOT_down = (Z+ I) ECR_down (X S)
        return GateSeq((
            Gate("X", (q0,)),
            Gate("S", (q1,)),
            Gate("ECR_down", (q0, q1)),
            Gate("Z+", (q0,)),
        ))
    if direction == "up":
        # CNOT_up = (H H) ECR_down (S S) (Z- H)
        return GateSeq((
            Gate("Z-", (q0,)),
            Gate("H", (q1,)),
            Gate("S", (q0,)),
            Gate("S", (q1,)),
            Gate("ECR_down", (q0, q1)),
            Gate("H", (q0,)),
            Gate("H", (q1,)),
        ))
    raise TranspileError(f"direction must be 'down' or 'up', got {direction!r}")


def transpile_ecr_up(q0: int = 0, q1: int = 1) -> GateSeq:
    # ECR_up = (H H) ECR_down (Y+ Y-)
    return GateSeq((
        Gate("Y+", (q0,)),
        Gate("Y-", (q1,)),
        Gate("ECR_down", (q0, q1)),
        Gate("H", (q0,)),
        Gate("H", (q1,)),
    ))


def transpile(seq) -> GateSeq:
    """Replace CNOTs and ECR_up by ECR_down-based equivalents."""
    out: list[Gate] = []
    for gate in seq:
        if gate.name == "CNOT_down":
            out.extend(transpile_cnot("down", *gate.qubits))
        elif gate.name == "CNOT_up":
            out.extend(transpile_cnot("up", *gate.qubits))
        elif gate.name == "ECR_up":
            out.extend(transpile_ecr_up(*gate.qubits))
        elif gate.name in ("CR+", "CR-"):
            raise TranspileError(f"{gate.name} is a pulse component, not a schedulable gate")
        else:
            out.append(gate)
    return GateSeq(tuple(out), dict(getattr(seq, "frames", {}) or {}))


_HALF_PI = math.pi / 2

# time-ordered expansions; each equals the original gate up to global phase
_EXPANSION = {
    "H": (("Z_theta", _HALF_PI), ("S", None), ("Z_theta", _HALF_PI)),
    "X": (("S", None), ("S", None)),
    "Y+": (("Z_theta", -_HALF_PI), ("S", None), ("Z_theta", _HALF_PI)),
    "Y-": (("Z_theta", _HALF_PI), ("S", None), ("Z_theta", -_HALF_PI)),
    "Z+": (("Z_theta", _HALF_PI),),
    "Z-": (("Z_theta", -_HALF_PI),),
}


def expand_native(seq) -> GateSeq:
    """Rewrite H, X, Y+/-, Z+/- into S and Z_theta gates."""
    out: list[Gate] = []
    for gate in seq:
        if gate.name not in EXPANDABLE:
            raise TranspileError(f"{gate.name} cannot be lowered to the native set; transpile it first")
        rule = _EXPANSION.get(gate.name)
        if rule is None:
            out.append(gate)
            continue
        for name, angle in rule:
            out.append(Gate(name, gate.qubits, () if angle is None else (angle,)))
    return GateSeq(tuple(out), dict(getattr(seq, "frames", {}) or {}))


def _wrap(theta: float) -> float:
    return math.fmod(theta, TWO_PI)


def compile_virtual_z(seq) -> GateSeq:
    """Absorb all Z_theta into frame angles of the following pulses.

    The returned sequence contains only S, S_theta and ECR_down.  Its
    ``frames`` map each qubit to the Z rotation still owed at the end of the
    circuit, so ``Z_frames @ U(result) == U(seq)`` up to global phase.
    """
    frames: dict[int, float] = {}
    out: list[Gate] = []
    for gate in expand_native(seq):
        q = gate.qubits
        if gate.name == "Z_theta":
            frames[q[0]] = _wrap(frames.get(q[0], 0.0) + gate.params[0])
        elif gate.name in ("S", "S_theta"):
            theta = _wrap((gate.params[0] if gate.params else 0.0) + frames.get(q[0], 0.0))
            out.append(Gate("S", q) if theta == 0.0 else Gate("S_theta", q, (theta,)))
        else:  # ECR_down
            base = gate.params or (0.0, 0.0)
            phis = tuple(_wrap(base[i] + frames.get(q[i], 0.0)) for i in range(2))
            out.append(Gate("ECR_down", q, () if phis == (0.0, 0.0) else phis))
    incoming = dict(getattr(seq, "frames", {}) or {})
    for qubit, theta in incoming.items():
        frames[qubit] = _wrap(frames.get(qubit, 0.0) + theta)
    return GateSeq(tuple(out), {q: t for q, t in sorted(frames.items()) if t != 0.0})


def frame_unitary(frames: dict, nqubits: int) -> np.ndarray:
    """Product of the pending Z_theta frames as an n-qubit matrix."""
    u = np.eye(2**nqubits, dtype=complex)
    for qubit, theta in frames.items():
        u = g.embed(g.z_theta(theta), (qubit,), nqubits) @ u
    return u


def ecr_identities() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Named (lhs, rhs) matrix pairs for every ECR/CNOT identity used here."""
    X, I = g.pauli("X"), g.pauli("I")
    S, H = g.s_gate(), g.hadamard()
    zp, zm = g.z_theta(_HALF_PI), g.z_theta(-_HALF_PI)
    yp, ym = g.y_rot(_HALF_PI), g.y_rot(-_HALF_PI)
    ecr = g.ecr("down")
    hh = g.kron(H, H)
    return {
        "ECR_down = CR- (XI) CR+": (ecr, g.cross_resonance(-1) @ g.kron(X, I) @ g.cross_resonance(1)),
        "ECR_down ECR_down = II": (ecr @ ecr, np.eye(4)),
        "ECR_up = (HH) ECR_down (Y+ Y-)": (g.ecr("up"), hh @ ecr @ g.kron(yp, ym)),
        "CNOT_down = (Z+ I) ECR_down (X S)": (g.cnot("down"), g.kron(zp, I) @ ecr @ g.kron(X, S)),
        "CNOT_up = (HH) ECR_down (SS) (Z- H)": (g.cnot("up"), hh @ ecr @ g.kron(S, S) @ g.kron(zm, H)),
        "CNOT_up = (HH) CNOT_down (HH)": (g.cnot("up"), hh @ g.cnot("down") @ hh),
        "H = Z+ S Z+": (H, zp @ S @ zp),
        "Y+ = Z+ S Z-": (yp, zp @ S @ zm),
        "Y- = Z- S Z+": (ym, zm @ S @ zp),
        "transpile_cnot(down)": (g.cnot("down"), seq_to_unitary(transpile_cnot("down"), 2)),
        "transpile_cnot(up)": (g.cnot("up"), seq_to_unitary(transpile_cnot("up"), 2)),
        "transpile_ecr_up": (g.ecr("up"), seq_to_unitary(transpile_ecr_up(), 2)),
    }


def verify_identities(tol: float = 1e-10) -> dict[str, bool]:
    return {name: g.equal_up_to_global_phase(lhs, rhs, tol)
            for name, (lhs, rhs) in ecr_identities().items()}
