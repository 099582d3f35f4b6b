"""
Native-gate identities
======================

Check that the echoed cross-resonance (ECR) decompositions of CNOT hold,
then fold the Z rotations into frame changes.
"""

import numpy as np

from nosig import gates as g
from nosig.transpiler import compile_virtual_z, seq_to_unitary, transpile_cnot, verify_identities

# every identity, up to a global phase
for name, ok in verify_identities(1e-10).items():
    print(f"{name:40s} {'ok' if ok else 'FAIL'}")

# the CNOT with the control on the second qubit, in native gates
seq = transpile_cnot("up")
print("\nCNOT up as written:")
for gate in seq.gates:
    print("  ", gate)
print("equals CNOT up:", g.equal_up_to_global_phase(seq_to_unitary(seq, 2), g.cnot("up"), 1e-12))

# Z rotations are free on hardware: push them through as frame updates
native = compile_virtual_z(seq)
print("\nafter virtual-Z folding:")
print(native.dumps())
print("two-qubit gates:", native.two_qubit_count(), "  pending frames:",
      {q: round(f, 4) for q, f in native.frames.items()})
np.set_printoptions(precision=3, suppress=True)
print("\nECR down:\n", g.ecr("down"))
