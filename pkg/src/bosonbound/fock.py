"""n-photon, m-mode outcome states and exact output distributions.

Convention: ``U[i, j]`` is the amplitude for a photon entering mode ``i`` to
leave in mode ``j``. With input ``|1_n>`` (one photon in each of the first
``n`` modes) the probability of outcome ``S`` is
``|Per(U[first n rows, columns of S with multiplicity])|^2 / prod(s_i!)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial

import numpy as np

from .errors import ContractError, DimensionError, InputStateError, SizeLimitError
from .linalg import as_square
from .permanent import batch_permanents

MAX_OUTCOMES = 10**6
MAX_FACTORIAL = 20

FACTORIALS = tuple(factorial(k) for k in range(MAX_FACTORIAL + 1))


def num_outcomes(m, n):
    """``C(m + n - 1, n)``, the number of ways to put n photons in m modes."""
    return comb(m + n - 1, n)


@lru_cache(maxsize=64)
def outcome_table(m, n):
    """Return ``(counts, modes)`` for every outcome, in enumeration order.

    ``counts`` is (N, m): photons per mode. ``modes`` is (N, n): the occupied
    mode of each photon, nondecreasing. Both arrays are read-only.
    """
    if m < 1 or n < 0:
        raise DimensionError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    N = num_outcomes(m, n)
    if N > MAX_OUTCOMES:
        raise SizeLimitError(f"C({m + n - 1}, {n}) = {N} outcomes exceeds cap {MAX_OUTCOMES}")
    if n == 0:
        modes = np.zeros((1, 0), dtype=np.int64)
    else:
        flat = np.fromiter(
            (j for combo in combinations_with_replacement(range(m), n) for j in combo),
            dtype=np.int64,
            count=N * n,
        )
        modes = flat.reshape(N, n)
    counts = np.zeros((N, m), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(N), n), modes.ravel()), 1)
    counts.setflags(write=False)
    modes.setflags(write=False)
    return counts, modes


@lru_cache(maxsize=64)
def outcome_index(m, n):
    counts, _ = outcome_table(m, n)
    return {tuple(int(x) for x in row): i for i, row in enumerate(counts)}


def enumerate_outcomes(m, n):
    """All outcome states as tuples, lexicographically descending in the counts.

    >>> enumerate_outcomes(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    counts, _ = outcome_table(m, n)
    return [tuple(int(x) for x in row) for row in counts]


def factorial_products(counts):
    """Row-wise ``prod(s_i!)`` as float64, from exact integer factorials."""
    counts = np.asarray(counts)
    if counts.size and counts.max() > MAX_FACTORIAL:
        raise SizeLimitError(f"photon count per mode above {MAX_FACTORIAL}")
    table = np.array(FACTORIALS, dtype=object)
    exact = np.prod(table[counts], axis=-1)
    return np.asarray(exact, dtype=np.float64)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Dense probability vector over the outcome states of ``(m, n)``."""

    m: int
    n: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (num_outcomes(self.m, self.n),):
            raise DimensionError(
                f"expected {num_outcomes(self.m, self.n)} probabilities, got shape {probs.shape}"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def outcomes(self):
        return outcome_table(self.m, self.n)[0]

    def __len__(self):
        return self.probs.size

    def __getitem__(self, state):
        return float(self.probs[outcome_index(self.m, self.n)[tuple(state)]])

    def total(self):
        return float(np.sum(self.probs))

    def as_dict(self):
        return dict(zip(enumerate_outcomes(self.m, self.n), self.probs.tolist()))


def _check_input(U, n):
    A = as_square(U)
    m = A.shape[0]
    if n < 0 or n > m:
        raise InputStateError(f"input |1_n> needs 0 <= n <= m, got n={n}, m={m}")
    return A, m


def output_amplitudes(U, n):
    """Amplitudes ``Per(U_[n],S) / sqrt(prod s_i!)`` for every outcome S."""
    A, m = _check_input(U, n)
    counts, modes = outcome_table(m, n)
    rows = np.broadcast_to(np.arange(n, dtype=np.int64), modes.shape)
    perms = batch_permanents(A, rows, modes)
    return perms / np.sqrt(factorial_products(counts))


def output_distribution(U, n):
    """Exact BosonSampling distribution for ``|1_n>`` sent through ``U``."""
    amps = output_amplitudes(U, n)
    return OutcomeDistribution(as_square(U).shape[0], n, np.abs(amps) ** 2)


def distinguishable_distribution(U, n):
    """Outcome distribution when the n photons are mutually distinguishable.

    Each particle moves independently with transition probabilities
    ``|U_ij|^2``; the count statistics are ``Per(P_[n],S) / prod(s_i!)``.
    """
    A, m = _check_input(U, n)
    P = np.abs(A) ** 2
    counts, modes = outcome_table(m, n)
    rows = np.broadcast_to(np.arange(n, dtype=np.int64), modes.shape)
    perms = batch_permanents(P.astype(np.complex128), rows, modes).real
    return OutcomeDistribution(m, n, np.clip(perms, 0.0, None) / factorial_products(counts))


def sample_outcome(dist, seed, count):
    """Draw ``count`` i.i.d. outcomes by inverse CDF over the enumeration order."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    probs = dist.probs
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-6:
        raise ContractError(f"distribution is not normalized (mass {probs.sum():.9f})")
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    # u can land at or past the last positive-mass boundary only through rounding
    last = int(np.flatnonzero(probs > 0)[-1])
    idx = np.minimum(idx, last)
    counts = dist.outcomes
    return [tuple(int(x) for x in counts[i]) for i in idx]
