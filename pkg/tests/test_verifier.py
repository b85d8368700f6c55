import numpy as np
import pytest

from qutil.architecture import falcon_r4, line
from qutil.circuit import Circuit, instr
from qutil.errors import CapacityError
from qutil.gates import FALCON_BASIS, BasisSet, matrix
from qutil.generator import GenerationConfig, generate
from qutil.transpiler import Layout, TranspileConfig, TranspileResult, transpile, translate
from qutil.verifier import (
    apply_circuit,
    check,
    equivalent,
    permutation_matrix,
    phase_aligned_deviation,
    probe_equivalent,
    run_suite,
    unitary,
)


def test_little_endian_convention():
    # X on qubit 1 of a 3-qubit register maps |000> to index 2 (bit 1 set)
    u = unitary(Circuit(3, [instr("X", 1)]))
    assert np.argmax(np.abs(u[:, 0])) == 2
    # CX(0, 1): control is operand 0, the low bit
    assert np.allclose(unitary(Circuit(2, [instr("CX", 0, 1)])), matrix("CX"))
    # reversed operands equal the SWAP-conjugated matrix
    sw = matrix("SWAP")
    assert np.allclose(unitary(Circuit(2, [instr("CX", 1, 0)])), sw @ matrix("CX") @ sw)
    # a gate on (2, 0) of a 3-qubit register against an explicit kron construction
    cz = unitary(Circuit(3, [instr("CRy", 2, 0, params=[0.7])]))
    ref = np.zeros((8, 8), dtype=complex)
    g = matrix("CRy", [0.7])
    for col in range(8):
        b0, b1, b2 = col & 1, (col >> 1) & 1, (col >> 2) & 1
        local_in = b2 + 2 * b0
        for local_out in range(4):
            o2, o0 = local_out & 1, local_out >> 1
            ref[o0 + 2 * b1 + 4 * o2, col] += g[local_out, local_in]
    assert np.allclose(cz, ref)


def test_unitary_examples():
    assert np.allclose(unitary(Circuit(1, [instr("H", 0), instr("H", 0)])), np.eye(2), atol=1e-12)
    sw = Circuit(2, [instr("SWAP", 0, 1)])
    assert np.allclose(unitary(translate(sw, BasisSet(FALCON_BASIS))), unitary(sw))
    with pytest.raises(CapacityError):
        unitary(Circuit(9))


def test_unitary_multiplicative():
    c = generate(GenerationConfig(4, 10, (1, 1), 3))
    k = len(c) // 2
    a = c.with_instructions(c.instructions[:k])
    b = c.with_instructions(c.instructions[k:])
    assert np.allclose(unitary(c), unitary(b) @ unitary(a))


def test_permutation_matrix():
    p = permutation_matrix([1, 0])
    assert np.allclose(p, matrix("SWAP"))
    p3 = permutation_matrix([1, 2, 0])
    assert np.allclose(p3 @ p3.conj().T, np.eye(8))


def test_phase_alignment():
    u = matrix("U", [0.3, 0.2, 0.1])
    assert phase_aligned_deviation(u * np.exp(0.4j), u) < 1e-14


def test_identity_transpile_is_equivalent():
    c = Circuit(3, [instr("Rz", 0, params=[0.3]), instr("CX", 0, 1), instr("SX", 2), instr("CX", 1, 2)])
    res = transpile(c, line(3), TranspileConfig(O=0, L="trivial"))
    ok, dev = equivalent(c, res)
    assert ok and dev < 1e-12


def test_routed_line_example():
    c = Circuit(3, [instr("CX", 0, 2)])
    res = transpile(c, line(3), TranspileConfig(O=0, L="trivial", trivial_first=False, vf2=False))
    assert res.final_layout.v2p != res.initial_layout.v2p
    ok, _ = equivalent(c, res)
    assert ok


def test_dropped_gate_detected():
    c = generate(GenerationConfig(3, 8, (1, 1), 4))
    res = transpile(c, line(3), TranspileConfig(O=1, L="sabre", seed=2))
    broken = TranspileResult(
        res.circuit.with_instructions(res.circuit.instructions[:-1]),
        res.initial_layout,
        res.final_layout,
        res.layout_method,
    )
    assert not equivalent(c, broken)[0]
    assert not probe_equivalent(c, broken)[0]


def test_wrong_final_layout_detected():
    c = Circuit(3, [instr("CX", 0, 2), instr("H", 0)])
    res = transpile(c, line(3), TranspileConfig(O=0, L="trivial", trivial_first=False, vf2=False))
    lie = TranspileResult(res.circuit, res.initial_layout, Layout(range(3)), res.layout_method)
    assert not equivalent(c, lie)[0]


def test_probe_matches_full_check_on_falcon():
    for seed in range(6):
        c = generate(GenerationConfig(5, 12, (1, 1), seed))
        res = transpile(c, falcon_r4(), TranspileConfig(O=2, L="sabre", seed=seed))
        ok, dev = check(c, res)
        assert ok, dev
        assert probe_equivalent(c, res, samples=8, seed=seed)[0]


def test_apply_circuit_vector():
    c = Circuit(2, [instr("H", 0), instr("CX", 0, 1)])
    out = apply_circuit(c, np.array([1, 0, 0, 0], dtype=complex))
    assert np.allclose(out, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_suite_small():
    cases = run_suite(circuits=12, max_width=4, seed=9)
    assert len(cases) == 12 * 12
    assert all(c.ok for c in cases)
