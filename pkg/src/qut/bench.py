"""Experiment orchestration: per-pair shot caps, minimum-shot search, dense
ranking, repetition management, metrics, and CSV reporting.

Seed mixing: each (pair, test, repetition) task derives its RNG seed from the
first 8 bytes (big-endian) of SHA-256 over the UTF-8 string
"{base_seed}|{pair_id}|{test}|{repetition}", so any implementation of the
same scheme reproduces the measurement streams exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .circuit import Circuit, build_swap_harness, invert_circuit, compose
from .qasm import parse_qasm
from .jsonio import parse_json
from .shots import EquivalentStatesError, estimate_shots_for_pair
from .simulator import (
    marginal_probability_one,
    run_statevector,
    sample_from_probs,
)
from .testing import (
    MC_KINDS,
    STAT_KINDS,
    MultinomialIntractableError,
    statevector_test,
    statistical_p_value,
    _discrepancy_scores,
    _support,
)

SAMPLED_TESTS = STAT_KINDS + MC_KINDS + ("swap", "inverse")
ALL_TESTS = SAMPLED_TESTS + ("statevector",)

CSV_HEADER = [
    "pair_id", "test", "repetition", "seed", "verdict",
    "shots_used", "shot_estimate", "rank", "wall_time_ms",
]


def mix_seed(base_seed: int, pair_id: str, test: str, repetition: int) -> int:
    digest = hashlib.sha256(
        f"{base_seed}|{pair_id}|{test}|{repetition}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big")


def dense_rank(values: Sequence[int | None]) -> list[int]:
    """Dense ranking; ties share a rank, NotDetected (None) ranks last, shared."""
    distinct = sorted({v for v in values if v is not None})
    rank_of = {v: i + 1 for i, v in enumerate(distinct)}
    last = len(distinct) + 1 if any(v is None for v in values) else None
    return [rank_of[v] if v is not None else last for v in values]


def first_failure_shot(stream) -> int | None:
    """1-based index of the first nonzero outcome in a shot stream, or None."""
    return stream.first_nonzero()


def _p_value_at(
    prefix_counts: np.ndarray,
    probs: np.ndarray,
    kind: str,
    mc_reps: int,
    seed: int,
    shots: int,
) -> float:
    if kind in STAT_KINDS:
        return statistical_p_value(prefix_counts, probs, kind)
    # Monte Carlo kinds: empirical p-value with a seed derived per shot count
    support = _support(probs)
    if prefix_counts[~support].sum() > 0:
        return 0.0
    obs = prefix_counts[support].astype(float)
    p_sup = probs[support] / probs[support].sum()
    if len(obs) == 1:
        return 1.0
    expected_counts = shots * p_sup
    observed = _discrepancy_scores(obs[None, :], expected_counts, p_sup, kind)[0]
    rng = np.random.default_rng(np.random.SeedSequence([seed, shots, 0x4D43]))
    synthetic = rng.multinomial(shots, p_sup, size=mc_reps).astype(float)
    scores = _discrepancy_scores(synthetic, expected_counts, p_sup, kind)
    return float((scores <= observed + 1e-12).sum() / mc_reps)


def _first_crossing_asymptotic(
    stream_values: np.ndarray,
    probs: np.ndarray,
    kind: str,
    p_threshold: float,
    upto: int,
) -> int | None:
    """Smallest s in [1, upto] with asymptotic p-value < p_t, fully vectorized.

    Only for the chi2 / g_test kinds whose statistics admit a cumulative
    prefix formulation.
    """
    support = _support(probs)
    values = stream_values[:upto]
    outside = np.flatnonzero(~support[values])
    horizon = int(outside[0]) + 1 if outside.size else upto + 1
    # from the first out-of-support sample onward, p = 0 < p_t
    limit = min(upto, horizon - 1)
    k = int(support.sum())
    if k >= 2 and limit >= 1:
        # remap in-support basis states to compact category indices
        remap = np.cumsum(support) - 1
        cats = remap[values[:limit]]
        one_hot = np.zeros((limit, k))
        one_hot[np.arange(limit), cats] = 1.0
        counts = np.cumsum(one_hot, axis=0)
        s = np.arange(1, limit + 1, dtype=float)[:, None]
        p_sup = probs[support] / probs[support].sum()
        expected = s * p_sup[None, :]
        if kind == "chi2":
            stat = ((counts - expected) ** 2 / expected).sum(axis=1)
        else:
            ratio = np.divide(counts, expected,
                              out=np.ones_like(counts), where=counts > 0)
            stat = 2.0 * (counts * np.log(ratio)).sum(axis=1)
        p_vals = stats.chi2.sf(stat, k - 1)
        below = np.flatnonzero(p_vals < p_threshold)
        if below.size and int(below[0]) + 1 < horizon:
            return int(below[0]) + 1
    if horizon <= upto:
        return horizon
    return None


def min_shots_statistical(
    stream_values: np.ndarray,
    expected_probs: np.ndarray,
    kind: str,
    p_threshold: float,
    cap: int,
    seed: int = 0,
    mc_reps: int = 1000,
) -> int | None:
    """Minimal prefix length S of the realized stream with p-value < p_t.

    Two-pass search over one fixed stream: a coarse scan over powers of two
    finds a bracketing interval, then binary search pins a crossing.  Because
    the p-value is not monotone in S, the crossing is then verified as the
    true minimum by checking every smaller prefix (vectorized for the
    asymptotic kinds).  Returns None (NotDetected) if no S <= cap works.
    """
    cap = min(cap, len(stream_values))
    dim = len(expected_probs)

    def p_at(s: int) -> float:
        counts = np.bincount(stream_values[:s], minlength=dim)
        return _p_value_at(counts, expected_probs, kind, mc_reps, seed, s)

    # coarse scan: powers of two, then the cap itself
    grid = []
    s = 1
    while s < cap:
        grid.append(s)
        s *= 2
    grid.append(cap)
    below_at = None
    for s in grid:
        if p_at(s) < p_threshold:
            below_at = s
            break
    hi = None
    if below_at is not None:
        lo, hi = below_at // 2, below_at  # p(hi) < p_t
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if p_at(mid) < p_threshold:
                hi = mid
            else:
                lo = mid
    # The p-value is not monotone in S: a dip below p_t can sit strictly
    # between grid points or before the binary-search crossing, so the
    # remaining prefixes are checked exhaustively.
    bound = cap if hi is None else hi - 1
    if kind in ("chi2", "g_test"):
        earlier = _first_crossing_asymptotic(
            stream_values, expected_probs, kind, p_threshold, bound
        )
    else:
        earlier = next(
            (s for s in range(1, bound + 1) if p_at(s) < p_threshold), None
        )
    return earlier if earlier is not None else hi


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: str = ""
    tests: tuple[str, ...] = ("chi2", "swap", "statevector", "inverse")
    p_t: float = 0.05
    p_e: float = 0.05
    shot_cap_absolute: int = 10_000
    cap_factor: float = 2.0
    repetitions: int = 100
    base_seed: int = 0
    mc_reps: int = 1000
    record_timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(self.tests))
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.cap_factor <= 0:
            raise ValueError("cap_factor must be positive")
        unknown = set(self.tests) - set(ALL_TESTS)
        if unknown:
            raise ValueError(f"unknown tests: {sorted(unknown)}")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(
            {k: list(v) if isinstance(v, tuple) else v
             for k, v in self.__dict__.items()},
            indent=2,
        )


@dataclass(frozen=True)
class ExperimentRow:
    pair_id: str
    test: str
    repetition: int
    seed: int
    verdict: str  # "pass" | "fail" | "not_detected" | "error"
    shots_used: int
    shot_estimate: int
    rank: int | None = None
    wall_time_ms: int = 0


@dataclass
class CorpusPair:
    pair_id: str
    original: Circuit
    mutant: Circuit


def load_circuit_file(path: str | Path) -> Circuit:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_json(text)
    return parse_qasm(text)


def load_corpus(manifest_path: str | Path) -> list[CorpusPair]:
    """Corpus manifest: JSON lines of {pair_id, original, mutant} with file
    paths relative to the manifest."""
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    pairs = []
    for line in manifest_path.read_text().splitlines():
        if not line.strip():
            continue
        entry = json.loads(line)
        pairs.append(CorpusPair(
            str(entry["pair_id"]),
            load_circuit_file(base / entry["original"]),
            load_circuit_file(base / entry["mutant"]),
        ))
    return pairs


def _run_pair(pair: CorpusPair, config: ExperimentConfig) -> list[ExperimentRow]:
    rows: list[ExperimentRow] = []
    empty_w = Circuit(pair.original.num_qubits)
    try:
        estimate = estimate_shots_for_pair(pair.original, pair.mutant,
                                           p_e=config.p_e)
    except EquivalentStatesError:
        return [ExperimentRow(pair.pair_id, t, 0, 0, "error", 0, 0)
                for t in config.tests]
    cap = min(config.shot_cap_absolute,
              math.ceil(config.cap_factor * estimate.shots))
    cap = max(cap, 1)

    original_state = run_statevector(pair.original)
    expected_probs = original_state.probabilities()

    # shared per-pair precomputation for the sampled tests
    mutant_probs = run_statevector(pair.mutant).probabilities()
    inverse_probs = None
    swap_p1 = None
    if "inverse" in config.tests:
        inverse_probs = run_statevector(
            compose(pair.mutant, invert_circuit(pair.original))
        ).probabilities()
    if "swap" in config.tests:
        harness = build_swap_harness(pair.mutant, pair.original)
        swap_p1 = marginal_probability_one(run_statevector(harness), 0)

    for test in config.tests:
        if test == "statevector":
            start = time.perf_counter()
            verdict = statevector_test(empty_w, pair.mutant, original_state)
            elapsed = int((time.perf_counter() - start) * 1000)
            seed = mix_seed(config.base_seed, pair.pair_id, test, 0)
            rows.append(ExperimentRow(
                pair.pair_id, test, 0, seed,
                "fail" if not verdict.passed else "pass",
                0, estimate.shots,
                wall_time_ms=elapsed if config.record_timing else 0,
            ))
            continue
        for rep in range(config.repetitions):
            seed = mix_seed(config.base_seed, pair.pair_id, test, rep)
            start = time.perf_counter()
            if test == "swap":
                rng = np.random.default_rng(seed)
                bits = rng.random(cap) < swap_p1
                nz = np.flatnonzero(bits)
                found = int(nz[0]) + 1 if nz.size else None
            elif test == "inverse":
                values = sample_from_probs(inverse_probs, cap, seed)
                nz = np.flatnonzero(values)
                found = int(nz[0]) + 1 if nz.size else None
            else:
                values = sample_from_probs(mutant_probs, cap, seed)
                try:
                    found = min_shots_statistical(
                        values, expected_probs, test, config.p_t, cap,
                        seed=seed, mc_reps=config.mc_reps,
                    )
                except MultinomialIntractableError:
                    rows.append(ExperimentRow(
                        pair.pair_id, test, rep, seed, "error", 0,
                        estimate.shots))
                    continue
            elapsed = int((time.perf_counter() - start) * 1000)
            rows.append(ExperimentRow(
                pair.pair_id, test, rep, seed,
                "fail" if found is not None else "not_detected",
                found if found is not None else cap,
                estimate.shots,
                wall_time_ms=elapsed if config.record_timing else 0,
            ))
    return rows


def _fill_ranks(rows: list[ExperimentRow]) -> list[ExperimentRow]:
    """Dense-rank sampled tests within each (pair_id, repetition) group."""
    from dataclasses import replace

    groups: dict[tuple[str, int], list[int]] = {}
    for i, row in enumerate(rows):
        if row.test in SAMPLED_TESTS and row.verdict in ("fail", "not_detected"):
            groups.setdefault((row.pair_id, row.repetition), []).append(i)
    out = list(rows)
    for indices in groups.values():
        shots = [
            rows[i].shots_used if rows[i].verdict == "fail" else None
            for i in indices
        ]
        for i, rank in zip(indices, dense_rank(shots)):
            out[i] = replace(rows[i], rank=rank)
    return out


def run_benchmark(
    pairs: Sequence[CorpusPair], config: ExperimentConfig
) -> list[ExperimentRow]:
    """Run every configured test on every pair; rows come back sorted by
    (pair_id, test, repetition) so output is order-independent."""
    rows: list[ExperimentRow] = []
    for pair in pairs:
        rows.extend(_run_pair(pair, config))
    rows = _fill_ranks(rows)
    rows.sort(key=lambda r: (r.pair_id, r.test, r.repetition))
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.pair_id, r.test, r.repetition, r.seed, r.verdict,
            r.shots_used, r.shot_estimate,
            "" if r.rank is None else r.rank, r.wall_time_ms,
        ])
    return buf.getvalue()


def compute_metrics(rows: Sequence[ExperimentRow]) -> dict[str, dict[str, float]]:
    """Per-test {tp, fn, recall}; every corpus pair is faulty by construction,
    so a Fail verdict is a true positive and anything else a false negative."""
    if not rows:
        raise ValueError("no rows to summarize")
    out: dict[str, dict[str, float]] = {}
    for test in sorted({r.test for r in rows}):
        relevant = [r for r in rows if r.test == test and r.verdict != "error"]
        tp = sum(r.verdict == "fail" for r in relevant)
        fn = len(relevant) - tp
        recall = tp / (tp + fn) if tp + fn else 0.0
        out[test] = {"tp": tp, "fn": fn, "recall": recall}
    return out
