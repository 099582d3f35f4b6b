"""Single- and two-qubit gate matrices for transmon-style native gate sets.

All matrices are plain complex numpy arrays.  Two-qubit matrices use the
basis |00>, |01>, |10>, |11> where the left label is the first (upper,
control-convention) qubit, so ``kron(a, b)`` puts ``a`` on that qubit.

Rotations follow V_theta = exp(-i theta V / 2) = cos(theta/2) - i V sin(theta/2)
for any involutory V (one or two qubits).
"""

from __future__ import annotations

import numpy as np

UNITARY_TOL = 1e-12

_SQRT2 = np.sqrt(2.0)

_PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class GateError(ValueError):
    """Invalid gate construction or comparison."""


def pauli(axis: str) -> np.ndarray:
    try:
        return _PAULI[axis.upper()].copy()
    except (KeyError, AttributeError):
        raise GateError(f"unknown Pauli axis {axis!r}") from None


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol)


def rot(v: np.ndarray, theta: float) -> np.ndarray:
    """Rotation exp(-i theta v / 2) about an involution ``v`` (v @ v = I)."""
    v = np.asarray(v, dtype=complex)
    if v.shape not in ((2, 2), (4, 4)):
        raise GateError(f"rotation generator must be 2x2 or 4x4, got {v.shape}")
    eye = np.eye(v.shape[0])
    if np.linalg.norm(v @ v - eye) > UNITARY_TOL:
        raise GateError("rotation generator must square to the identity")
    return np.cos(theta / 2) * eye - 1j * np.sin(theta / 2) * v


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise GateError("kron expects two single-qubit (2x2) matrices")
    return np.kron(a, b)


def z_theta(theta: float) -> np.ndarray:
    """Virtual Z rotation diag(e^{-i theta/2}, e^{i theta/2})."""
    return rot(_PAULI["Z"], theta)


def s_gate() -> np.ndarray:
    """Native pi/2 pulse about x: (1 - iX)/sqrt(2)."""
    return (_PAULI["I"] - 1j * _PAULI["X"]) / _SQRT2


def s_theta(theta: float) -> np.ndarray:
    """S pulse in a frame rotated by ``theta``: Z_theta^dag S Z_theta."""
    z = z_theta(theta)
    return z.conj().T @ s_gate() @ z


def hadamard() -> np.ndarray:
    return (_PAULI["Z"] + _PAULI["X"]) / _SQRT2


def x_rot(theta: float) -> np.ndarray:
    return rot(_PAULI["X"], theta)


def y_rot(theta: float) -> np.ndarray:
    return rot(_PAULI["Y"], theta)


def _swap_direction(g: np.ndarray) -> np.ndarray:
    # <a'b'|G_up|ab> = <b'a'|G_down|ba>
    return g.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)


def _check_direction(direction: str) -> str:
    if direction not in ("down", "up"):
        raise GateError(f"direction must be 'down' or 'up', got {direction!r}")
    return direction


def ecr(direction: str = "down") -> np.ndarray:
    """Echoed cross-resonance gate; ECR_down = (XI - YX)/sqrt(2)."""
    x, y = _PAULI["X"], _PAULI["Y"]
    down = (np.kron(x, _PAULI["I"]) - np.kron(y, x)) / _SQRT2
    return down if _check_direction(direction) == "down" else _swap_direction(down)


def cnot(direction: str = "down") -> np.ndarray:
    """CNOT with the first qubit as control (down) or as target (up)."""
    down = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    return down if _check_direction(direction) == "down" else _swap_direction(down)


def cross_resonance(sign: int) -> np.ndarray:
    """CR^{+/-} = (ZX)_{+/- pi/4}."""
    if sign not in (1, -1):
        raise GateError("cross-resonance sign must be +1 or -1")
    return rot(np.kron(_PAULI["Z"], _PAULI["X"]), sign * np.pi / 4)


def global_phase(u: np.ndarray, v: np.ndarray) -> complex:
    """Phase e^{i phi} with u ~ e^{i phi} v, taken from v's largest entry."""
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0:
        return 1.0 + 0j
    ratio = u[idx] / v[idx]
    if abs(ratio) == 0:
        return 1.0 + 0j
    return ratio / abs(ratio)


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise GateError(f"dimension mismatch: {u.shape} vs {v.shape}")
    phase = global_phase(u, v)
    return bool(np.max(np.abs(u - phase * v)) <= tol)


def embed(u: np.ndarray, targets, nqubits: int) -> np.ndarray:
    """Lift a k-qubit operator acting on ``targets`` to the full n-qubit space.

    ``targets[0]`` receives the operator's first (leftmost) tensor factor.
    Qubit 0 is the most significant bit of the full basis index.
    """
    u = np.asarray(u, dtype=complex)
    targets = tuple(int(t) for t in targets)
    k = len(targets)
    if u.shape != (2**k, 2**k):
        raise GateError(f"operator shape {u.shape} does not match {k} target(s)")
    if len(set(targets)) != k:
        raise GateError(f"targets must be distinct, got {targets}")
    if any(t < 0 or t >= nqubits for t in targets):
        raise GateError(f"targets {targets} out of range for {nqubits} qubit(s)")
    if k == nqubits and targets == tuple(range(nqubits)):
        return u.copy()
    rest = [q for q in range(nqubits) if q not in targets]
    full = np.kron(u, np.eye(2 ** len(rest)))
    # axes of ``full`` are ordered (targets..., rest...); move them home
    order = list(targets) + rest
    inv = np.argsort(order)
    t = full.reshape([2] * (2 * nqubits))
    t = t.transpose(list(inv) + [nqubits + i for i in inv])
    return t.reshape(2**nqubits, 2**nqubits)
