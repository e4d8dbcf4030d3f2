"""State-preparation synthesis via recursive disentangling.

The disentangling direction maps the target state to |0...0> with multiplexed
rz/ry rotations on successive qubits; the emitted circuit is its inverse.
Cost is O(2^n) gates for dense vectors.  The result matches the target up to
one global phase, which is returned alongside the circuit when needed.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, GateApplication, invert_circuit
from .core import StateVector

_ANGLE_EPS = 1e-14


def _bloch_angles(pair: np.ndarray) -> tuple[complex, float, float]:
    """Decompose (alpha, beta) = r e^{it} (cos(th/2) e^{-i ph/2}, sin(th/2) e^{i ph/2})."""
    alpha, beta = pair
    mag = np.hypot(abs(alpha), abs(beta))
    if mag < 1e-300:
        return 0.0, 0.0, 0.0
    theta = 2.0 * np.arctan2(abs(beta), abs(alpha))
    phi_a = np.angle(alpha) if abs(alpha) > 0 else 0.0
    phi_b = np.angle(beta) if abs(beta) > 0 else phi_a
    phi = phi_b - phi_a
    t = 0.5 * (phi_a + phi_b)
    return mag * np.exp(1j * t), theta, phi


def _multiplexed_rotation(
    kind: str, angles: list[float], controls: list[int], target: int
) -> list[GateApplication]:
    """Uniformly controlled rx-free rotation (ry or rz), decomposed with cx.

    Uses the standard sum/difference recursion; correctness relies on
    X R(theta) X = R(-theta) for both ry and rz.
    """
    if all(abs(a) < _ANGLE_EPS for a in angles):
        return []
    if not controls:
        return [GateApplication(kind, (target,), (angles[0],))]
    half = len(angles) // 2
    low, high = angles[:half], angles[half:]
    plus = [(a + b) / 2 for a, b in zip(low, high)]
    minus = [(a - b) / 2 for a, b in zip(low, high)]
    top = controls[-1]
    inner = controls[:-1]
    out = _multiplexed_rotation(kind, plus, inner, target)
    out.append(GateApplication("cx", (top, target)))
    out += _multiplexed_rotation(kind, minus, inner, target)
    out.append(GateApplication("cx", (top, target)))
    return out


def disentangling_circuit(target: StateVector) -> tuple[Circuit, float]:
    """Circuit mapping `target` to |0...0>, plus the residual global phase.

    Applying the returned circuit to `target` yields e^{i phase}|0...0>.
    """
    n = target.num_qubits
    vec = target.amplitudes.copy()
    ops: list[GateApplication] = []
    for q in range(n):
        pairs = vec.reshape(-1, 2)  # qubit q is the LSB of the current vector
        reduced = np.empty(pairs.shape[0], dtype=complex)
        thetas = np.empty(pairs.shape[0])
        phis = np.empty(pairs.shape[0])
        for i, pair in enumerate(pairs):
            reduced[i], thetas[i], phis[i] = _bloch_angles(pair)
        controls = list(range(q + 1, n))
        ops += _multiplexed_rotation("rz", list(-phis), controls, q)
        ops += _multiplexed_rotation("ry", list(-thetas), controls, q)
        vec = reduced
    phase = float(np.angle(vec[0]))
    return Circuit(n, tuple(ops), "disentangle"), phase


def synthesize_state_prep(target: StateVector) -> Circuit:
    """Circuit preparing `target` from |0...0>, exact up to a global phase."""
    uncompute, _ = disentangling_circuit(target)
    prep = invert_circuit(uncompute)
    return Circuit(prep.num_qubits, prep.gates, "state_prep")
