"""Monte Carlo harness: Haar interferometers, permanents, LXEB estimator.

Randomness comes from the counter-based Philox generator with one stream
per trial, keyed by (seed, trial index), so results are reproducible and
independent of execution order.  Outcome sampling is exact inverse-CDF
over the fully enumerated n-photon distribution; probabilities are squared
permanents computed by the Gray-code Ryser recursion.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import FeasibilityError
from .refval import lxe_ref_bs, outcome_count
from .schur import OccPattern, patterns

__all__ = [
    "PERMANENT_GUARD",
    "PROBABILITY_GUARD",
    "ENUMERATION_GUARD",
    "EstimateReport",
    "haar_unitary",
    "permanent",
    "bs_probability",
    "enumerate_outcomes",
    "exact_lxe",
    "exact_distribution",
    "lxeb_experiment",
    "thread_budget",
]

PERMANENT_GUARD = 24
PROBABILITY_GUARD = 12
ENUMERATION_GUARD = 10**7


def thread_budget() -> int:
    """Parallelism cap from LXEBKIT_THREADS (default 1)."""
    raw = os.environ.get("LXEBKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _rng_for(seed: int, stream: int) -> np.random.Generator:
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def haar_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed m x m unitary (Ginibre + QR with phase fix)."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def permanent(a: np.ndarray) -> complex:
    """Permanent of a square matrix by the Gray-code Ryser recursion.

    O(2^s s) time; refuses matrices larger than the desk-scale guard.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("permanent needs a square matrix")
    s = a.shape[0]
    if s == 0:
        return 1 + 0j
    if s > PERMANENT_GUARD:
        raise FeasibilityError(f"matrix size {s} exceeds permanent guard {PERMANENT_GUARD}")
    row_sums = np.zeros(s, dtype=complex)
    total = 0j
    sign = 1
    gray = 0
    for counter in range(1, 1 << s):
        # bit that flips between consecutive Gray codes
        new_gray = counter ^ (counter >> 1)
        flipped = new_gray ^ gray
        j = flipped.bit_length() - 1
        if new_gray & flipped:
            row_sums += a[:, j]
        else:
            row_sums -= a[:, j]
        gray = new_gray
        sign = -sign
        total += sign * np.prod(row_sums)
    return complex((-1) ** s * total)


def _expand(pattern) -> list[int]:
    out = []
    for idx, count in enumerate(pattern):
        out.extend([idx] * count)
    return out


def bs_probability(u: np.ndarray, input_pattern, outcome) -> float:
    """|per(U_{outcome,input})|^2 / (outcome! input!): the probability of
    one photon-count outcome for a Fock input through interferometer u.

    Rows of u are repeated per the outcome, columns per the input.
    """
    input_pattern = tuple(int(c) for c in input_pattern)
    outcome = tuple(int(c) for c in outcome)
    n = sum(input_pattern)
    if sum(outcome) != n:
        raise ValueError(
            f"photon numbers differ: input {n}, outcome {sum(outcome)}"
        )
    if n > PROBABILITY_GUARD:
        raise FeasibilityError(f"n={n} exceeds probability guard {PROBABILITY_GUARD}")
    if n == 0:
        return 1.0
    rows = _expand(outcome)
    cols = _expand(input_pattern)
    sub = u[np.ix_(rows, cols)]
    per = permanent(sub)
    weight = 1.0
    for c in outcome:
        weight *= math.factorial(c)
    for c in input_pattern:
        weight *= math.factorial(c)
    return abs(per) ** 2 / weight


def enumerate_outcomes(m: int, n: int) -> tuple[OccPattern, ...]:
    """All of S_{m,n} in colexicographic order."""
    if outcome_count(m, n) > ENUMERATION_GUARD:
        raise FeasibilityError(
            f"|S_{{{m},{n}}}| = {outcome_count(m, n)} exceeds guard {ENUMERATION_GUARD}"
        )
    return patterns(m, n)


def exact_distribution(u: np.ndarray, input_pattern) -> np.ndarray:
    """Exact outcome probabilities over S_{m,n} (colex order)."""
    input_pattern = tuple(int(c) for c in input_pattern)
    m = u.shape[0]
    n = sum(input_pattern)
    outcomes = enumerate_outcomes(m, n)
    return np.array([bs_probability(u, input_pattern, out) for out in outcomes])


def exact_lxe(u: np.ndarray, input_pattern) -> float:
    """LXE(p, p) = sum of squared outcome probabilities, full enumeration."""
    probs = exact_distribution(u, input_pattern)
    return float(math.fsum(p * p for p in probs))


@dataclass(frozen=True)
class EstimateReport:
    """Fidelity estimate across independently drawn interferometers."""

    m: int
    n: int
    trials: int
    samples_per_trial: int
    seed: int
    fidelity_mean: float
    fidelity_stderr: float
    ref_value: float
    null_model: str = "ideal"

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "samples_per_trial": self.samples_per_trial,
            "seed": self.seed,
            "null_model": self.null_model,
            "fidelity_mean": self.fidelity_mean,
            "fidelity_stderr": self.fidelity_stderr,
            "ref_value": self.ref_value,
        }


def _trial_lxe(m, n, input_pattern, samples, seed, trial, null_model) -> float:
    rng = _rng_for(seed, trial)
    u = haar_unitary(m, rng)
    probs = exact_distribution(u, input_pattern)
    size = len(probs)
    if null_model == "uniform":
        draws = rng.integers(0, size, size=samples)
    else:
        cdf = np.cumsum(probs)
        cdf[-1] = max(cdf[-1], 1.0)
        draws = np.searchsorted(cdf, rng.random(samples), side="right")
    return float(math.fsum(probs[i] for i in draws) / samples)


def lxeb_experiment(
    m: int,
    n: int,
    trials: int = 10,
    samples: int = 1000,
    seed: int = 0,
    null_model: str = "ideal",
) -> EstimateReport:
    """Empirical LXEB fidelity for collision-free Fock-state sampling.

    For each trial a fresh Haar interferometer is drawn, ``samples``
    outcomes are sampled exactly (inverse CDF over the enumerated
    distribution, or uniformly for the null model), and the empirical
    score is converted to a fidelity against the closed-form reference.
    The standard error is the cross-trial spread of the estimator mapped
    through the fidelity normalization.  Deterministic given the seed.
    """
    if null_model not in ("ideal", "uniform"):
        raise ValueError(f"unknown null model {null_model!r}")
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    input_pattern = (1,) * n + (0,) * (m - n)
    ref = lxe_ref_bs(m, n, exact=n <= 40).value_float
    size = outcome_count(m, n)

    workers = min(thread_budget(), trials)
    estimates = [0.0] * trials
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(
                    _trial_lxe, m, n, input_pattern, samples, seed, t, null_model
                ): t
                for t in range(trials)
            }
            for fut, t in futures.items():
                estimates[t] = fut.result()
    else:
        for t in range(trials):
            estimates[t] = _trial_lxe(m, n, input_pattern, samples, seed, t, null_model)

    denom = size * ref - 1.0
    fidelities = [(size * est - 1.0) / denom for est in estimates]
    mean = math.fsum(fidelities) / trials
    sx = math.sqrt(
        math.fsum((est - math.fsum(estimates) / trials) ** 2 for est in estimates)
        / (trials - 1)
    )
    stderr = size / denom * sx / math.sqrt(trials)
    return EstimateReport(
        m, n, trials, samples, seed, mean, stderr, ref, null_model
    )
