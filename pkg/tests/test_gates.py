import math

import numpy as np
import pytest

from nosig import gates as g

SQ2 = math.sqrt(2)
X, Y, Z, I = (g.pauli(k) for k in "XYZI")
ZP, ZM = g.z_theta(math.pi / 2), g.z_theta(-math.pi / 2)
YP, YM = g.y_rot(math.pi / 2), g.y_rot(-math.pi / 2)


def test_pauli_z_matrix():
    assert np.array_equal(g.pauli("Z"), np.diag([1, -1]))


def test_pauli_x_involution():
    assert np.allclose(X @ X, I, atol=1e-15)


def test_pauli_xy_product():
    # oracle: 2x2 product written out by hand
    xy = np.array([[0 * 0 + 1 * 1j, 0 * -1j + 1 * 0], [1 * 0 + 0 * 1j, 1 * -1j + 0 * 0]])
    assert np.allclose(X @ Y, xy)
    assert np.allclose(X @ Y, 1j * Z)


def test_pauli_rejects_unknown_axis():
    with pytest.raises(g.GateError):
        g.pauli("W")


def test_rot_z_is_diagonal_phase():
    for theta in (0.3, -1.2, 2.5):
        expected = np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])
        assert np.allclose(g.rot(Z, theta), expected, atol=1e-15)


def test_rot_x_half_pi_is_s():
    expected = np.array([[1, -1j], [-1j, 1]]) / SQ2
    assert np.allclose(g.rot(X, math.pi / 2), expected, atol=1e-15)
    assert np.allclose(g.s_gate(), expected, atol=1e-15)


def test_rot_zero_angle_is_identity():
    assert np.allclose(g.rot(X, 0.0), I)
    assert np.allclose(g.rot(np.kron(Z, X), 0.0), np.eye(4))


def test_rot_rejects_non_involution():
    with pytest.raises(g.GateError):
        g.rot(g.s_gate(), 0.1)


def test_rot_is_additive():
    rng = np.random.default_rng(12)
    gens = [X, Y, Z, np.kron(Z, X), np.kron(X, Y)]
    for _ in range(1000):
        v = gens[rng.integers(len(gens))]
        a, b = rng.uniform(-10, 10, size=2)
        assert np.max(np.abs(g.rot(v, a) @ g.rot(v, b) - g.rot(v, a + b))) <= 1e-12


def test_s_squared():
    # (1 - iX)^2 / 2 = (1 - 2iX - 1)/2 = -iX
    assert np.allclose(g.s_gate() @ g.s_gate(), -1j * X, atol=1e-15)


def test_s_theta_zero_is_s():
    assert np.allclose(g.s_theta(0.0), g.s_gate())


def test_s_theta_is_equatorial_rotation():
    # Z_t^dag X Z_t = cos t X - sin t Y, so S_t rotates by pi/2 about that axis
    for t in np.linspace(-3, 3, 25):
        axis = math.cos(t) * X - math.sin(t) * Y
        assert g.equal_up_to_global_phase(g.s_theta(t), g.rot(axis, math.pi / 2), 1e-12)


def test_hadamard_matrix_and_virtual_form():
    assert np.allclose(g.hadamard(), np.array([[1, 1], [1, -1]]) / SQ2)
    assert g.equal_up_to_global_phase(g.hadamard(), ZP @ g.s_gate() @ ZP, 1e-12)
    assert np.allclose(g.hadamard() @ g.hadamard(), I)


def test_y_rotations_from_s():
    s = g.s_gate()
    assert g.equal_up_to_global_phase(ZP @ s @ ZM, YP, 1e-12)
    assert g.equal_up_to_global_phase(ZM @ s @ ZP, YM, 1e-12)
    assert g.equal_up_to_global_phase(YP, g.hadamard() @ Z, 1e-12)
    assert g.equal_up_to_global_phase(YM, Z @ g.hadamard(), 1e-12)


def test_ecr_down_explicit_matrix():
    expected = np.array([[0, 0, 1, 1j], [0, 0, 1j, 1], [1, -1j, 0, 0], [-1j, 1, 0, 0]]) / SQ2
    assert np.allclose(g.ecr("down"), expected)


def test_ecr_is_its_inverse():
    e = g.ecr("down")
    assert np.allclose(e @ e, np.eye(4), atol=1e-15)


def test_ecr_cross_resonance_form():
    lhs = g.cross_resonance(-1) @ g.kron(X, I) @ g.cross_resonance(1)
    assert g.equal_up_to_global_phase(g.ecr("down"), lhs, 1e-12)


def test_ecr_up_pauli_form():
    assert np.allclose(g.ecr("up"), (np.kron(I, X) - np.kron(X, Y)) / SQ2)


def test_cnot_down_flips_target_when_control_set():
    ket10 = np.eye(4)[2]
    assert np.allclose(g.cnot("down") @ ket10, np.eye(4)[3])


def test_cnot_up_is_hadamard_conjugate():
    hh = g.kron(g.hadamard(), g.hadamard())
    assert np.allclose(g.cnot("up"), hh @ g.cnot("down") @ hh)
    assert np.allclose(g.cnot("up"), np.eye(4)[[0, 3, 2, 1]])


def test_direction_index_swap():
    for make in (g.ecr, g.cnot):
        down, up = make("down"), make("up")
        for i in range(4):
            for j in range(4):
                a1, b1, a0, b0 = i >> 1, i & 1, j >> 1, j & 1
                assert up[i, j] == down[2 * b1 + a1, 2 * b0 + a0]


def test_bad_direction():
    with pytest.raises(g.GateError):
        g.ecr("sideways")


def test_constructors_are_unitary():
    mats = [g.s_gate(), g.s_theta(0.4), g.hadamard(), g.z_theta(1.1), g.ecr("down"), g.ecr("up"),
            g.cnot("down"), g.cnot("up"), g.cross_resonance(1), g.cross_resonance(-1), X, Y, Z]
    for m in mats:
        assert g.is_unitary(m)


def test_kron_identity():
    assert np.array_equal(g.kron(I, I), np.eye(4))


def test_kron_rejects_two_qubit_factor():
    with pytest.raises(g.GateError):
        g.kron(np.eye(4), I)


def test_phase_equivalence():
    assert g.equal_up_to_global_phase(-1j * X, X, 1e-12)
    assert not g.equal_up_to_global_phase(X, Z, 1e-12)
    with pytest.raises(g.GateError):
        g.equal_up_to_global_phase(X, np.eye(4), 1e-12)


def test_embed_matches_kron_and_swaps_order():
    a, b = g.s_gate(), g.hadamard()
    assert np.allclose(g.embed(g.kron(a, b), (0, 1), 2), np.kron(a, b))
    assert np.allclose(g.embed(g.kron(a, b), (1, 0), 2), np.kron(b, a))
    assert np.allclose(g.embed(a, (1,), 3), np.kron(np.kron(I, a), I))
    with pytest.raises(g.GateError):
        g.embed(a, (3,), 3)
