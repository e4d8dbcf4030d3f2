import math

import numpy as np
import pytest

from qut import gates


def test_catalog_matrices_unitary():
    for name, spec in gates.CATALOG.items():
        params = tuple(0.3 + 0.1 * i for i in range(spec.num_params))
        m = gates.gate_matrix(name, params)
        assert gates.is_unitary(m), name
        assert m.shape == (2 ** spec.arity, 2 ** spec.arity)


def test_every_gate_has_catalog_inverse():
    for name, spec in gates.CATALOG.items():
        assert spec.inverse_name in gates.CATALOG, name
        params = tuple(0.5 for _ in range(spec.num_params))
        inv_spec = gates.CATALOG[spec.inverse_name]
        inv_params = tuple(s * p for s, p in zip(inv_spec.param_signs, params))
        prod = gates.gate_matrix(spec.inverse_name, inv_params) @ \
            gates.gate_matrix(name, params)
        np.testing.assert_allclose(prod, np.eye(prod.shape[0]), atol=1e-10)


def test_r_gate_inverse_negates_theta_only():
    spec = gates.CATALOG["r"]
    assert spec.inverse_name == "r"
    assert spec.param_signs == (-1.0, 1.0)


def test_s_inverse_is_sdg():
    assert gates.CATALOG["s"].inverse_name == "sdg"
    assert gates.CATALOG["t"].inverse_name == "tdg"


def test_hadamard_entries():
    m = gates.gate_matrix("h", ())
    inv = 1 / math.sqrt(2)
    np.testing.assert_allclose(m, [[inv, inv], [inv, -inv]], atol=1e-15)


def test_controlled_builder_cx():
    cx = gates.controlled(gates.gate_matrix("x", ()), 1)
    np.testing.assert_array_equal(
        cx, gates.gate_matrix("cx", ())
    )


def test_ccx_structure():
    m = gates.gate_matrix("ccx", ())
    # acts only when both low (control) bits are set
    assert m[3, 7] == 1 and m[7, 3] == 1
    diag = np.diag(m)
    assert diag[3] == 0 and diag[7] == 0
    assert all(diag[i] == 1 for i in range(8) if i not in (3, 7))


def test_r_gate_matches_definition():
    theta, phi = 0.7, 1.2
    m = gates.gate_matrix("r", (theta, phi))
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    from scipy.linalg import expm
    expected = expm(-1j * theta / 2 * (math.cos(phi) * x + math.sin(phi) * y))
    np.testing.assert_allclose(m, expected, atol=1e-12)


def test_equivalence_classes_share_signature():
    for cls in gates.EQUIVALENCE_CLASSES:
        arities = {gates.CATALOG[k].arity for k in cls}
        nparams = {gates.CATALOG[k].num_params for k in cls}
        assert len(arities) == 1 and len(nparams) == 1


def test_equivalence_class_lookup():
    assert set(gates.equivalence_class("h")) == {
        "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg"}
    assert set(gates.equivalence_class("cx")) == {"cx", "cy", "cz", "swap"}
    assert set(gates.equivalence_class("r")) == {"r"}
    assert set(gates.equivalence_class("ccx")) == {"ccx", "cswap"}
    assert set(gates.equivalence_class("crx")) == {"crx", "cry", "crz", "cp"}


def test_unknown_gate_rejected():
    with pytest.raises(KeyError):
        gates.gate_matrix("nope", ())


def test_is_unitary_rejects_defect():
    assert not gates.is_unitary(np.array([[1, 0], [0, 0.999]], dtype=complex))
