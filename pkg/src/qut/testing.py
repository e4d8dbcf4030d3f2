"""The four quantum unit-test families: Statistical (plus Monte Carlo
variants), Swap, Statevector, and Inverse.

Each test arranges a harness circuit from the input preparation W, the
program under test U, and the expected state, runs it on the embedded
simulator, and asserts on the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy import stats

from .circuit import Circuit, build_inverse_harness, build_swap_harness, compose
from .core import StateVector, global_phase_aligned
from .simulator import (
    marginal_sample,
    run_statevector,
    sample_counts,
    sample_from_probs,
)
from .synth import synthesize_state_prep

STAT_KINDS = ("chi2", "g_test", "multinomial")
MC_KINDS = ("mc_chi2", "mc_g", "mc_multinomial")

SUPPORT_FLOOR = 1e-12
PEARSON_MIN_SHOTS = 13
DEFAULT_TOLERANCE = 1e-10
MULTINOMIAL_ENUM_LIMIT = 10**6

# ExpectedSpec: either a preparation circuit for |psi_E> or the vector itself.
ExpectedSpec = Circuit | StateVector


class MultinomialIntractableError(ValueError):
    """Exact multinomial enumeration too large; use the MC variant."""


@dataclass(frozen=True)
class TestVerdict:
    outcome: str  # "pass" | "fail"
    p_value: float | None = None
    first_failure_shot: int | None = None
    max_amplitude_deviation: float | None = None
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"


def expected_state(expected: ExpectedSpec) -> StateVector:
    if isinstance(expected, StateVector):
        return expected
    return run_statevector(expected)


def expected_prep_circuit(expected: ExpectedSpec) -> Circuit:
    if isinstance(expected, StateVector):
        return synthesize_state_prep(expected)
    return expected


def chi2_statistic(observed: np.ndarray, expected_counts: np.ndarray) -> float:
    return float(((observed - expected_counts) ** 2 / expected_counts).sum())


def g_statistic(observed: np.ndarray, expected_counts: np.ndarray) -> float:
    nz = observed > 0
    return float(2.0 * (observed[nz] * np.log(observed[nz] / expected_counts[nz])).sum())


def exact_multinomial_p_value(observed: np.ndarray, probs: np.ndarray) -> float:
    """p = sum of probabilities of count vectors no more likely than observed.

    Enumerates every composition of S into k categories; guarded by
    MULTINOMIAL_ENUM_LIMIT.
    """
    k = len(probs)
    shots = int(observed.sum())
    if comb(shots + k - 1, k - 1) > MULTINOMIAL_ENUM_LIMIT:
        raise MultinomialIntractableError(
            f"{comb(shots + k - 1, k - 1)} count vectors exceed enumeration "
            f"limit {MULTINOMIAL_ENUM_LIMIT}; use the Monte Carlo variant"
        )
    log_obs = stats.multinomial.logpmf(observed, shots, probs)
    total = 0.0
    vec = np.zeros(k, dtype=np.int64)

    def rec(idx: int, remaining: int):
        nonlocal total
        if idx == k - 1:
            vec[idx] = remaining
            lp = stats.multinomial.logpmf(vec, shots, probs)
            if lp <= log_obs + 1e-9:
                total += np.exp(lp)
            return
        for c in range(remaining + 1):
            vec[idx] = c
            rec(idx + 1, remaining - c)

    rec(0, shots)
    return float(min(total, 1.0))


def _support(probs: np.ndarray) -> np.ndarray:
    return probs > SUPPORT_FLOOR


def statistical_p_value(
    counts: np.ndarray, probs: np.ndarray, kind: str
) -> float:
    """Goodness-of-fit p-value of observed counts against expected probabilities.

    Counts and probs are indexed by basis state.  Categories outside the
    expected support short-circuit to p = 0; a single-category support with
    all mass observed inside it yields p = 1.
    """
    support = _support(probs)
    shots = int(counts.sum())
    if counts[~support].sum() > 0:
        return 0.0
    obs = counts[support].astype(float)
    p = probs[support] / probs[support].sum()
    k = len(obs)
    if k == 1:
        return 1.0
    if kind == "chi2":
        return float(stats.chi2.sf(chi2_statistic(obs, shots * p), k - 1))
    if kind == "g_test":
        return float(stats.chi2.sf(g_statistic(obs, shots * p), k - 1))
    if kind == "multinomial":
        return exact_multinomial_p_value(obs.astype(np.int64), p)
    raise ValueError(f"unknown statistical kind '{kind}'")


def _counts_array(stream_values: np.ndarray, dim: int) -> np.ndarray:
    return np.bincount(stream_values, minlength=dim)


def statistical_test(
    w: Circuit,
    u: Circuit,
    expected: ExpectedSpec,
    shots: int,
    p_threshold: float,
    kind: str,
    seed: int,
) -> TestVerdict:
    """Sample W.U and compare the histogram with |psi_E>'s distribution."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0.0 < p_threshold < 1.0:
        raise ValueError("p threshold must lie in (0, 1)")
    if kind not in STAT_KINDS:
        raise ValueError(f"kind must be one of {STAT_KINDS}")
    harness = compose(w, u)
    stream, _ = sample_counts(harness, shots, seed)
    counts = _counts_array(stream.values, 1 << harness.num_qubits)
    probs = expected_state(expected).probabilities()
    p = statistical_p_value(counts, probs, kind)
    warns = ()
    if shots < PEARSON_MIN_SHOTS:
        warns = (f"fewer than {PEARSON_MIN_SHOTS} observations; "
                 "the asymptotic p-value is unreliable",)
    return TestVerdict("pass" if p >= p_threshold else "fail", p_value=p,
                       warnings=warns)


def _discrepancy_scores(
    synthetic: np.ndarray, expected_counts: np.ndarray, probs: np.ndarray, kind: str
) -> np.ndarray:
    """Per-row score for MC comparison; lower = more extreme."""
    if kind == "mc_chi2":
        stat = ((synthetic - expected_counts) ** 2 / expected_counts).sum(axis=1)
        return stats.chi2.sf(stat, len(probs) - 1)
    if kind == "mc_g":
        ratio = np.ones_like(synthetic, dtype=float)
        nz = synthetic > 0
        ratio[nz] = synthetic[nz] / np.broadcast_to(expected_counts, synthetic.shape)[nz]
        stat = 2.0 * (synthetic * np.log(ratio)).sum(axis=1)
        return stats.chi2.sf(stat, len(probs) - 1)
    if kind == "mc_multinomial":
        shots = int(synthetic[0].sum())
        return stats.multinomial.logpmf(synthetic, shots, probs)
    raise ValueError(f"unknown Monte Carlo kind '{kind}'")


def mc_statistical_test(
    w: Circuit,
    u: Circuit,
    expected: ExpectedSpec,
    shots: int,
    p_threshold: float,
    kind: str,
    repetitions: int,
    seed: int,
) -> TestVerdict:
    """Monte Carlo statistical test: empirical p-value against synthetic draws.

    The empirical p is (number of synthetic count vectors at least as extreme
    as observed) / repetitions, with no continuity correction.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if kind not in MC_KINDS:
        raise ValueError(f"kind must be one of {MC_KINDS}")
    harness = compose(w, u)
    stream, _ = sample_counts(harness, shots, seed)
    counts = _counts_array(stream.values, 1 << harness.num_qubits)
    probs = expected_state(expected).probabilities()

    support = _support(probs)
    if counts[~support].sum() > 0:
        return TestVerdict("fail", p_value=0.0)
    obs = counts[support].astype(float)
    p_sup = probs[support] / probs[support].sum()
    if len(obs) == 1:
        return TestVerdict("pass", p_value=1.0)

    expected_counts = shots * p_sup
    observed_score = _discrepancy_scores(obs[None, :], expected_counts, p_sup, kind)[0]
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x4D43]))  # "MC"
    synthetic = rng.multinomial(shots, p_sup, size=repetitions)
    scores = _discrepancy_scores(synthetic.astype(float), expected_counts, p_sup, kind)
    empirical_p = float((scores <= observed_score + 1e-12).sum() / repetitions)
    return TestVerdict("pass" if empirical_p >= p_threshold else "fail",
                       p_value=empirical_p)


def swap_test(
    w: Circuit, u: Circuit, expected: ExpectedSpec, shots: int, seed: int
) -> TestVerdict:
    """Pass iff the swap-harness ancilla reads 0 on every shot."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    harness = build_swap_harness(compose(w, u), expected_prep_circuit(expected))
    stream = marginal_sample(harness, 0, shots, seed)
    first = stream.first_nonzero()
    if first is None:
        return TestVerdict("pass")
    return TestVerdict("fail", first_failure_shot=first)


def statevector_test(
    w: Circuit,
    u: Circuit,
    expected: ExpectedSpec,
    tolerance: float = DEFAULT_TOLERANCE,
    mode: str = "global_phase",
    max_qubits: int = 24,
) -> TestVerdict:
    """Element-wise statevector comparison at `tolerance`.

    In global_phase mode (default) the actual state is first rotated so its
    largest-magnitude amplitude agrees in phase with the expected one.
    """
    if mode not in ("strict", "global_phase"):
        raise ValueError("mode must be 'strict' or 'global_phase'")
    if u.num_qubits > max_qubits:
        raise ValueError(f"register of {u.num_qubits} qubits exceeds the "
                         f"{max_qubits}-qubit simulation guard")
    actual = run_statevector(compose(w, u)).amplitudes
    exp = expected_state(expected).amplitudes
    if mode == "global_phase":
        actual = global_phase_aligned(actual, exp)
    deviation = float(np.abs(actual - exp).max())
    return TestVerdict("pass" if deviation <= tolerance else "fail",
                       max_amplitude_deviation=deviation)


def inverse_test(
    w: Circuit, u: Circuit, expected: ExpectedSpec, shots: int, seed: int
) -> TestVerdict:
    """Pass iff every measured bitstring of W.U.Z is all-zeros."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    harness = build_inverse_harness(w, u, expected)
    probs = run_statevector(harness).probabilities()
    values = sample_from_probs(probs, shots, seed)
    nz = np.flatnonzero(values)
    if nz.size == 0:
        return TestVerdict("pass")
    return TestVerdict("fail", first_failure_shot=int(nz[0]) + 1)
