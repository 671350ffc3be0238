"""Pressure from its definition: partition sums over n-cylinders

In the symbolic metric any ε < 1 separates distinct n-cylinders, so one
representative per admissible n-word is a maximal (n, ε)-separated set and

    Z_n = Σ_{admissible n-words w} exp(sup_{[w]} S_n φ)

The ε-limit of the definition is therefore exact at finite ε. Sums are
accumulated in log space by a forward recurrence over word length.
"""

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import logsumexp

from sftpressure.exceptions import DepthTooLargeError, InputError
from sftpressure.symbolic import Potential, SftSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionSumResult:
    """log Z_n and the pressure estimate log Z_n / n"""

    n: int
    log_sum: float

    @property
    def estimate(self) -> float:
        return self.log_sum / self.n


def _log_weights(system: SftSystem, potential: Potential) -> np.ndarray:
    """Log transition weights: φ(ij) (or φ(i)) on allowed pairs, −inf elsewhere"""
    if potential.depth > 2:
        raise DepthTooLargeError(
            f"Partition sums need depth ≤ 2, got {potential.depth}; recode first"
        )
    values = potential.as_matrix(fill=-np.inf)
    return np.where(system.adjacency == 1, values, -np.inf)


def _forward(system: SftSystem, potential: Potential) -> Iterator[PartitionSumResult]:
    """Yield log Z_1, log Z_2, … from one forward recurrence

    For depth 1, a_m(j) is the log of Σ exp(S_m φ) over m-words ending in j.
    For depth 2, a_m(j) holds the first m − 1 summands; the last window is
    closed with the best admissible successor.
    """
    weights = _log_weights(system, potential)
    if potential.depth == 1:
        phi = potential.as_vector()
        a = phi.copy()
        closing = np.zeros(system.alphabet_size)
        step = np.where(system.adjacency == 1, 0.0, -np.inf) + phi[np.newaxis, :]
    else:
        a = np.zeros(system.alphabet_size)
        closing = weights.max(axis=1)
        step = weights

    n = 1
    while True:
        yield PartitionSumResult(n=n, log_sum=float(logsumexp(a + closing)))
        a = logsumexp(a[:, np.newaxis] + step, axis=0)
        n += 1


def partition_sum(system: SftSystem, potential: Potential, n: int) -> PartitionSumResult:
    """log Z_n for a depth ≤ 2 potential

    Examples:
        >>> from sftpressure.symbolic import golden_mean, zero_potential
        >>> g = golden_mean()
        >>> round(partition_sum(g, zero_potential(g), 3).log_sum, 6)  # log 5
        1.609438
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    for result in _forward(system, potential):
        if result.n == n:
            return result
    raise AssertionError("unreachable")


def pressure_estimate_sequence(
    system: SftSystem, potential: Potential, n_max: int
) -> list[PartitionSumResult]:
    """Partition-sum estimates for n = 1 … n_max"""
    if n_max < 2:
        raise InputError(f"n_max must be at least 2, got {n_max}")
    results = []
    for result in _forward(system, potential):
        results.append(result)
        if result.n == n_max:
            break
    logger.debug("Computed %d partition sums", len(results))
    return results


def convergence_constant(results: list[PartitionSumResult], spectral: float) -> float:
    """max_n n·|estimate(n) − P|, the constant C in |estimate − P| ≤ C/n"""
    return max(r.n * abs(r.estimate - spectral) for r in results)
