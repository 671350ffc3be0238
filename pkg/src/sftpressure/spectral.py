"""Transfer matrices, Perron eigendata and equilibrium Markov measures

For a locally constant potential of depth ≤ 2 the transfer operator acts
on functions of the first coordinate through the matrix

    M[i, j] = adjacency[i, j] · exp(φ(i) − shift)      (depth 1)
    M[i, j] = adjacency[i, j] · exp(φ(ij) − shift)     (depth 2)

with shift = max φ, so entries never overflow. Its leading eigenvalue is
exp(P(φ) − shift). The equilibrium state is the Markov measure obtained by
stochasticizing M with the right eigenvector h; its stationary vector is
the product of the left and right eigenvectors.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from sftpressure.exceptions import (
    DegenerateEigenvectorError,
    DepthMismatchError,
    DepthTooLargeError,
    InputError,
    NoConvergenceError,
    NoDecayError,
    NotPrimitiveError,
    UnsupportedTransitionError,
)
from sftpressure.symbolic import (
    Potential,
    SftSystem,
    higher_block_recode,
    recode_together,
    zero_potential,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-14
DEFAULT_MAX_ITER = 10**6
GAP_ITERATIONS = 200
MAX_LAGS = 10**5
STOCHASTIC_TOL = 1e-12
FD_STEP = 1e-3
EPS = float(np.finfo(float).eps)
STALL_STEPS = 200
STALL_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Shifted transfer matrix of a depth ≤ 2 potential

    Attributes:
        entries: Nonnegative N×N matrix, positive exactly on allowed transitions
        log_shift: Constant subtracted from the potential before exponentiation
        system: Host system
    """

    entries: np.ndarray
    log_shift: float
    system: SftSystem


@dataclass(frozen=True, eq=False)
class SpectralTriple:
    """Perron eigendata of a transfer matrix

    Attributes:
        lam: Leading eigenvalue with the shift undone, e^{P(φ)}
        log_lambda: P(φ), computed without forming lam
        h: Right eigenvector, positive, max entry 1
        nu: Left eigenvector, positive, nu·h = 1
        gap_estimate: |second eigenvalue| / leading eigenvalue, in [0, 1)
        raw_lambda: Leading eigenvalue of the shifted matrix
    """

    lam: float
    log_lambda: float
    h: np.ndarray
    nu: np.ndarray
    gap_estimate: float
    raw_lambda: float

    @property
    def pressure(self) -> float:
        return self.log_lambda

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "pressure": self.log_lambda,
            "h": self.h.tolist(),
            "nu": self.nu.tolist(),
            "gap": self.gap_estimate,
        }


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov measure on the symbols of a system

    Attributes:
        p: Row-stochastic N×N matrix
        pi: Stationary probability vector, pi @ p == pi
    """

    p: np.ndarray
    pi: np.ndarray

    def to_dict(self) -> dict:
        return {"p": self.p.tolist(), "pi": self.pi.tolist()}


@dataclass(frozen=True, eq=False)
class Equilibrium:
    """Everything computed for one potential on a primitive system"""

    system: SftSystem
    potential: Potential
    matrix: TransferMatrix
    triple: SpectralTriple
    measure: MarkovMeasure

    @property
    def pressure(self) -> float:
        return self.triple.log_lambda


def transfer_matrix(system: SftSystem, potential: Potential) -> TransferMatrix:
    """Build the shifted transfer matrix

    Raises:
        DepthTooLargeError: Potential depth > 2 (recode first)

    Example:
        >>> from sftpressure.symbolic import golden_mean, zero_potential
        >>> g = golden_mean()
        >>> transfer_matrix(g, zero_potential(g)).entries.tolist()
        [[1.0, 1.0], [1.0, 0.0]]
    """
    if potential.depth > 2:
        raise DepthTooLargeError(
            f"Transfer matrix needs depth ≤ 2, got {potential.depth}; recode first"
        )
    shift = potential.max_value
    values = potential.as_matrix(fill=-math.inf)
    with np.errstate(under="ignore"):
        entries = np.where(system.adjacency == 1, np.exp(values - shift), 0.0)
    return TransferMatrix(entries=entries, log_shift=shift, system=system)


def _rayleigh(matrix: np.ndarray, x: np.ndarray) -> float:
    return float(x @ (matrix @ x) / (x @ x))


def _perron_vector(
    matrix: np.ndarray, tol: float, max_iter: int
) -> tuple[float, np.ndarray]:
    """Power iteration from the all-ones vector

    Each step multiplies by M + cI with c the current eigenvalue estimate.
    The shift keeps the Perron eigenvector and damps eigenvalues near −λ,
    which otherwise stall the iteration for strongly alternating matrices.
    Stops on the eigenvector residual ‖Mx − λx‖∞ (x scaled to max 1), once
    it is below relative tol or at the rounding level of the product Mx.
    """
    n = matrix.shape[0]
    x = np.ones(n)
    lam = _rayleigh(matrix, x)
    best, stalled = math.inf, 0
    for iteration in range(1, max_iter + 1):
        y = matrix @ x + lam * x
        x = y / y.max()
        mx = matrix @ x
        lam = _rayleigh(matrix, x)
        residual = float(np.abs(mx - lam * x).max())
        floor = 4 * (n + 1) * EPS * float(np.abs(mx).max())
        if residual <= max(tol * lam, floor):
            logger.debug("Power iteration converged after %d steps", iteration)
            return lam, x
        if residual < best:
            best, stalled = residual, 0
        else:
            stalled += 1
        # rounding noise above the floor; accept once it stops improving
        if stalled >= STALL_STEPS and best <= STALL_TOL * lam:
            logger.debug("Power iteration stalled at residual %.3e", residual)
            return lam, x
    raise NoConvergenceError(
        f"Power iteration did not converge within {max_iter} iterations"
    )


def _deflated_gap(
    matrix: np.ndarray, lam: float, h: np.ndarray, nu: np.ndarray
) -> float:
    """Estimate |λ₂|/λ by power iteration on M with the Perron part removed"""
    n = matrix.shape[0]
    if n == 1:
        return 0.0
    deflated = matrix - lam * np.outer(h, nu)
    x = np.cos(np.arange(1, n + 1, dtype=float))
    x = x - h * (nu @ x)
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return 0.0
    x = x / norm
    log_growth = 0.0
    for _ in range(GAP_ITERATIONS):
        y = deflated @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        log_growth += math.log(norm)
        x = y / norm
    ratio = math.exp(log_growth / GAP_ITERATIONS) / lam
    return min(max(ratio, 0.0), 1.0 - 1e-12)


def leading_triple(
    matrix: TransferMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> SpectralTriple:
    """Leading eigenvalue, eigenvectors and gap estimate

    Args:
        matrix: Transfer matrix of a primitive system
        tol: Relative tolerance on the eigenvector residual ‖Mx − λx‖∞
        max_iter: Iteration cap for each power iteration

    Raises:
        NotPrimitiveError: Reducible or periodic system
        NoConvergenceError: max_iter exceeded
    """
    if not matrix.system.is_primitive:
        raise NotPrimitiveError(
            "Leading eigendata needs a primitive system; decompose it into components"
        )
    m = matrix.entries
    raw, h = _perron_vector(m, tol, max_iter)
    _, nu = _perron_vector(m.T, tol, max_iter)

    h = h / h.max()
    nu = nu / (nu @ h)
    gap = _deflated_gap(m, raw, h, nu)
    log_lambda = math.log(raw) + matrix.log_shift
    return SpectralTriple(
        lam=math.exp(log_lambda),
        log_lambda=log_lambda,
        h=h,
        nu=nu,
        gap_estimate=gap,
        raw_lambda=raw,
    )


def _reduced(system: SftSystem, potential: Potential) -> tuple[SftSystem, Potential]:
    if potential.depth > 2:
        return higher_block_recode(system, potential)
    return system, potential


def pressure(
    system: SftSystem,
    potential: Potential,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Topological pressure P(φ) = log λ of the transfer matrix"""
    system, potential = _reduced(system, potential)
    triple = leading_triple(transfer_matrix(system, potential), tol, max_iter)
    return triple.log_lambda


def equilibrium_measure(triple: SpectralTriple, matrix: TransferMatrix) -> MarkovMeasure:
    """Stochasticize the transfer matrix with the right eigenvector

    p[i, j] = M[i, j] h[j] / (λ h[i]),  π[i] = ν[i] h[i]

    Raises:
        DegenerateEigenvectorError: Eigenvector with a non-positive entry
    """
    h, nu = triple.h, triple.nu
    if (h <= 0).any() or (nu <= 0).any():
        raise DegenerateEigenvectorError(
            "Eigenvector has non-positive entries; eigendata are unreliable"
        )
    p = matrix.entries * h[np.newaxis, :] / (triple.raw_lambda * h[:, np.newaxis])
    p = p / p.sum(axis=1, keepdims=True)
    pi = nu * h
    return MarkovMeasure(p=p, pi=pi / pi.sum())


def solve_equilibrium(
    system: SftSystem,
    potential: Potential,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Equilibrium:
    """Transfer matrix, eigendata and equilibrium measure in one call

    Potentials deeper than 2 are recoded first; the returned system is
    the one the measure lives on.
    """
    system, potential = _reduced(system, potential)
    matrix = transfer_matrix(system, potential)
    triple = leading_triple(matrix, tol, max_iter)
    return Equilibrium(
        system=system,
        potential=potential,
        matrix=matrix,
        triple=triple,
        measure=equilibrium_measure(triple, matrix),
    )


def markov_measure(system: SftSystem, p) -> MarkovMeasure:
    """Build a Markov measure from a transition matrix on the system

    The stationary vector is the left Perron vector of p.

    Raises:
        InputError: p is not row-stochastic
        UnsupportedTransitionError: p charges a forbidden transition
    """
    p = np.array(p, dtype=float)
    n = system.alphabet_size
    if p.shape != (n, n):
        raise InputError(f"Transition matrix must be {n}×{n}, got {p.shape}")
    if (p < 0).any() or not np.allclose(p.sum(axis=1), 1.0, atol=STOCHASTIC_TOL):
        raise InputError("Transition matrix must be nonnegative with unit row sums")
    _check_support(system, p)
    support = (p > 0).astype(int)
    try:
        _, pi = _perron_vector(p.T.copy(), DEFAULT_TOL, DEFAULT_MAX_ITER)
    except NoConvergenceError as e:
        raise InputError(f"Transition matrix has no unique stationary vector: {e}") from e
    if not support.any(axis=0).all():
        logger.warning("Some symbols are never entered under this transition matrix")
    return MarkovMeasure(p=p, pi=pi / pi.sum())


def _check_support(system: SftSystem, p: np.ndarray) -> None:
    forbidden = (p > 0) & (system.adjacency == 0)
    if forbidden.any():
        i, j = (int(k) for k in np.argwhere(forbidden)[0])
        raise UnsupportedTransitionError(
            f"Measure charges transition {i + 1}→{j + 1}, which the system forbids"
        )


def markov_entropy(measure: MarkovMeasure) -> float:
    """Entropy −Σ π_i p_ij log p_ij in nats"""
    return float(-(measure.pi[:, np.newaxis] * xlogy(measure.p, measure.p)).sum())


def measure_mean(measure: MarkovMeasure, observable: Potential) -> float:
    """Integral of a depth ≤ 2 observable against the Markov measure

    Raises:
        DepthMismatchError: Depth > 2 or observable on a different alphabet
    """
    n = measure.pi.shape[0]
    if observable.depth > 2 or observable.system.alphabet_size != n:
        raise DepthMismatchError(
            f"Observable of depth {observable.depth} on "
            f"{observable.system.alphabet_size} symbols does not match the "
            f"{n}-symbol measure; recode it first"
        )
    if observable.depth == 1:
        return float(measure.pi @ observable.as_vector())
    weights = measure.pi[:, np.newaxis] * measure.p
    return float((weights * observable.as_matrix()).sum())


def variational_gap(
    system: SftSystem, potential: Potential, measure: MarkovMeasure
) -> float:
    """P(φ) − (h_μ + ∫φ dμ); nonnegative by the variational principle

    Raises:
        UnsupportedTransitionError: The measure charges a forbidden transition
    """
    _check_support(system, measure.p)
    free_energy = markov_entropy(measure) + measure_mean(measure, potential)
    return pressure(system, potential) - free_energy


def _depth_one_values(measure: MarkovMeasure, observable: Potential) -> np.ndarray:
    if observable.depth != 1 or observable.system.alphabet_size != measure.pi.shape[0]:
        raise DepthMismatchError(
            f"Covariances need a depth-1 observable on the measure's alphabet, "
            f"got depth {observable.depth}; recode with recode_together"
        )
    return observable.as_vector()


def autocovariance(measure: MarkovMeasure, observable: Potential, lag: int) -> float:
    """Cov(g, g∘σ^lag) under the stationary Markov measure

    Raises:
        DepthMismatchError: Observable is not depth 1
    """
    if lag < 0:
        raise InputError(f"Lag must be nonnegative, got {lag}")
    g = _depth_one_values(measure, observable)
    mean = float(measure.pi @ g)
    v = g
    for _ in range(lag):
        v = measure.p @ v
    return float(measure.pi @ (g * v)) - mean * mean


def autocovariances(measure: MarkovMeasure, observable: Potential, lags: int) -> list[float]:
    """Cov(g, g∘σ^n) for n = 0 … lags, sharing the matrix-vector products"""
    g = _depth_one_values(measure, observable)
    f = g - float(measure.pi @ g)
    weighted = measure.pi * f
    out = []
    v = f
    for n in range(lags + 1):
        if n:
            v = measure.p @ v
        out.append(float(weighted @ v))
    return out


def asymptotic_variance(
    measure: MarkovMeasure,
    observable: Potential,
    gap_estimate: float,
    tol: float = 1e-12,
) -> float:
    """Green-Kubo sum Var(g) + 2 Σ_{n≥1} Cov(g, g∘σⁿ)

    The series is truncated at the first lag n* where the geometric tail
    bound |Cov(n*)|·gap/(1 − gap) drops below tol.

    Raises:
        DepthMismatchError: Observable is not depth 1
        NoDecayError: No truncation point within MAX_LAGS lags
    """
    if not 0.0 <= gap_estimate < 1.0:
        raise InputError(f"Gap estimate must lie in [0, 1), got {gap_estimate}")
    g = _depth_one_values(measure, observable)
    f = g - float(measure.pi @ g)
    weighted = measure.pi * f
    factor = gap_estimate / (1.0 - gap_estimate)

    total = float(weighted @ f)
    v = f
    for lag in range(1, MAX_LAGS + 1):
        v = measure.p @ v
        cov = float(weighted @ v)
        total += 2.0 * cov
        if abs(cov) * factor < tol:
            logger.debug("Green-Kubo series truncated at lag %d", lag)
            break
    else:
        raise NoDecayError(
            f"Autocovariances did not decay below {tol} within {MAX_LAGS} lags"
        )
    if total < 0.0:
        return 0.0
    return total


def topological_entropy(system: SftSystem) -> float:
    """Pressure of the zero potential, max over components when reducible"""
    if system.is_primitive:
        return pressure(system, zero_potential(system))
    # Import here to avoid circular imports
    from sftpressure.phases import component_pressures

    return max(r.pressure for r in component_pressures(system, zero_potential(system)))


def parry_measure(system: SftSystem) -> MarkovMeasure:
    """Measure of maximal entropy of a primitive system"""
    return solve_equilibrium(system, zero_potential(system)).measure


@dataclass(frozen=True)
class PressureDerivatives:
    """Finite-difference derivatives of t ↦ P(φ + tψ)"""

    first: float
    second: float


def fd_derivatives(
    system: SftSystem,
    base: Potential,
    direction: Potential,
    t: float = 0.0,
    step: float = FD_STEP,
) -> PressureDerivatives:
    """Central differences at steps h and h/2 with one Richardson extrapolation"""

    def p(s: float) -> float:
        return pressure(system, base + direction * s)

    center = p(t)
    values = {k: p(t + k * step / 2) for k in (-2, -1, 1, 2)}

    d1_h = (values[2] - values[-2]) / (2 * step)
    d1_half = (values[1] - values[-1]) / step
    d2_h = (values[2] - 2 * center + values[-2]) / step**2
    d2_half = (values[1] - 2 * center + values[-1]) / (step / 2) ** 2
    return PressureDerivatives(
        first=(4 * d1_half - d1_h) / 3,
        second=(4 * d2_half - d2_h) / 3,
    )


def equilibrium_observable_stats(
    system: SftSystem,
    potential: Potential,
    observable: Potential,
    lags: int = 10,
    tol: float = 1e-12,
) -> dict:
    """Pressure, mean, Green-Kubo variance and covariances of an observable

    Base and observable are recoded onto a common block system when either
    has depth > 1, so the covariance machinery always sees depth 1.
    """
    block_system, (phi, g) = recode_together(system, [potential, observable])
    eq = solve_equilibrium(block_system, phi)
    return {
        "lambda": eq.triple.lam,
        "pressure": eq.pressure,
        "gap": eq.triple.gap_estimate,
        "mean": measure_mean(eq.measure, g),
        "variance": asymptotic_variance(eq.measure, g, eq.triple.gap_estimate, tol),
        "covariances": autocovariances(eq.measure, g, lags),
    }


def check_triple(matrix: TransferMatrix, triple: SpectralTriple) -> Optional[str]:
    """Return a description of the worst eigen-residual violation, or None"""
    m, raw = matrix.entries, triple.raw_lambda
    right = np.abs(m @ triple.h - raw * triple.h).max()
    left = np.abs(triple.nu @ m - raw * triple.nu).max()
    bound = 1e-12 * raw
    if right >= bound * triple.h.max() or left >= bound * triple.nu.max():
        return f"residuals right={right:.3e} left={left:.3e} exceed {bound:.3e}"
    return None
