import json
import math

import numpy as np
import pytest

from qut.circuit import Circuit, GateApplication, random_circuit
from qut.jsonio import (
    CircuitJsonError,
    emit_json,
    nearest_unitary,
    parse_json,
)
from qut.simulator import run_statevector


def test_x_gate_round_trip():
    c = Circuit(1, (GateApplication("x", (0,)),))
    assert parse_json(emit_json(c)).structurally_equal(c)


def test_empty_gate_list():
    c = parse_json(json.dumps({"num_qubits": 2, "gates": []}))
    assert c.num_qubits == 2 and len(c.gates) == 0


def test_perturbed_hadamard_loads_after_reunitarization():
    doc = {
        "num_qubits": 1,
        "gates": [{
            "kind": "unitary",
            "targets": [0],
            "matrix": [[[0.7066, 0], [0.7076, 0]],
                       [[0.7076, 0], [-0.7066, 0]]],
        }],
    }
    c = parse_json(json.dumps(doc))
    m = c.gates[0].matrix
    np.testing.assert_allclose(m @ m.conj().T, np.eye(2), atol=1e-12)
    # still within the original's neighborhood
    np.testing.assert_allclose(m.real, [[0.7066, 0.7076], [0.7076, -0.7066]],
                               atol=1e-4)


def test_large_defect_rejected():
    doc = {"num_qubits": 1,
           "gates": [{"kind": "unitary", "targets": [0],
                      "matrix": [[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]]}]}
    with pytest.raises(CircuitJsonError):
        parse_json(json.dumps(doc))


def test_schema_violations():
    with pytest.raises(CircuitJsonError):
        parse_json(json.dumps({"gates": []}))
    with pytest.raises(CircuitJsonError):
        parse_json(json.dumps({"num_qubits": 1,
                               "gates": [{"kind": "h"}]}))
    with pytest.raises(CircuitJsonError):
        parse_json("not json at all {")


def test_nearest_unitary_of_scaled_unitary():
    q = np.array([[0, 1], [1, 0]], dtype=complex)
    np.testing.assert_allclose(nearest_unitary(1.7 * q), q, atol=1e-12)


def test_custom_gate_round_trip_preserves_matrix():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q, _ = np.linalg.qr(a)
    c = Circuit(2, (GateApplication("unitary", (0, 1), matrix=q),))
    again = parse_json(emit_json(c))
    np.testing.assert_array_equal(again.gates[0].matrix, q)


def test_round_trip_random_circuits_bit_exact():
    for seed in range(200):
        c = random_circuit(1 + seed % 4, 1 + seed % 6, seed=seed)
        again = parse_json(emit_json(c))
        assert again.structurally_equal(c)
        for g, g2 in zip(c.gates, again.gates):
            assert g.params == g2.params


def test_simulated_equivalence_after_round_trip():
    c = random_circuit(3, 5, seed=17)
    s1 = run_statevector(c)
    s2 = run_statevector(parse_json(emit_json(c)))
    np.testing.assert_array_equal(s1.amplitudes, s2.amplitudes)
