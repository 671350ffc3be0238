"""Legendre-Fenchel duality along one-parameter families of potentials

A PressureCurve samples t ↦ P(φ₀ + tψ) on a uniform grid. Its discrete
conjugate I(a) = max_t (a·t − P(t)) is the rate function of the Birkhoff
averages of ψ, and −I(a) recovers the entropy of the equilibrium state
with mean a. Left and right derivatives of the curve give the
subdifferential interval; a gap between them is a first-order phase
transition.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from sftpressure.exceptions import (
    DegenerateRangeError,
    InputError,
    OutOfRangeError,
    SftPressureError,
    TooCloseToBoundaryError,
)
from sftpressure.spectral import (
    markov_entropy,
    measure_mean,
    pressure,
    solve_equilibrium,
)
from sftpressure.symbolic import Potential, SftSystem, recode_together, restrict

logger = logging.getLogger(__name__)

CORNER_RTOL = 1e-3
SLOPE_INFLATION = 0.01
CONJUGATE_CHUNK = 512

ComponentEvaluator = Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class PressureCurve:
    """Sampled t ↦ P(φ₀ + tψ)

    Attributes:
        base: φ₀
        direction: ψ
        t_grid: Strictly increasing uniform grid
        values: Pressure at each grid point
        components: Index of the winning component per grid point
            (all zeros for primitive systems)
        evaluate_components: Exact per-component pressures at any t, used for
            sub-grid corner localization; None for curves built from data
    """

    base: Optional[Potential]
    direction: Optional[Potential]
    t_grid: np.ndarray
    values: np.ndarray
    components: Optional[np.ndarray] = None
    evaluate_components: Optional[ComponentEvaluator] = None

    @property
    def spacing(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    def evaluate(self, t: float) -> float:
        """Exact value when an evaluator is attached, linear interpolation otherwise"""
        if self.evaluate_components is not None:
            return float(np.max(self.evaluate_components(t)))
        return self.interpolate(t)

    def interpolate(self, t: float) -> float:
        if t < self.t_grid[0] or t > self.t_grid[-1]:
            raise OutOfRangeError(
                f"t={t} outside the curve's grid [{self.t_grid[0]}, {self.t_grid[-1]}]"
            )
        return float(np.interp(t, self.t_grid, self.values))


@dataclass(frozen=True, eq=False)
class ConjugateCurve:
    """Discrete Legendre transform I(a) of a pressure curve"""

    a_grid: np.ndarray
    rate: np.ndarray

    def interpolate(self, a: float) -> float:
        if a < self.a_grid[0] or a > self.a_grid[-1]:
            raise OutOfRangeError(
                f"a={a} outside the conjugate's grid [{self.a_grid[0]}, {self.a_grid[-1]}]"
            )
        return float(np.interp(a, self.a_grid, self.rate))


@dataclass(frozen=True)
class SubdiffInterval:
    """Left and right derivatives [D⁻, D⁺] at t"""

    t: float
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def is_corner(self, rtol: float = CORNER_RTOL) -> bool:
        return self.width > rtol * (1.0 + abs(self.upper) + abs(self.lower))

    def to_dict(self, rtol: float = CORNER_RTOL) -> dict:
        return {
            "t": self.t,
            "lower": self.lower,
            "upper": self.upper,
            "corner": self.is_corner(rtol),
        }


def uniform_grid(t_min: float, t_max: float, steps: int) -> np.ndarray:
    if steps < 3:
        raise InputError(f"A curve needs at least 3 grid points, got {steps}")
    if not t_min < t_max:
        raise InputError(f"Need t_min < t_max, got [{t_min}, {t_max}]")
    return np.linspace(t_min, t_max, steps)


def evaluate_on_grid(
    func: Callable[[float], np.ndarray], t_grid: np.ndarray, jobs: int = 1
) -> list[np.ndarray]:
    """Evaluate func at every grid point, annotating failures with t

    With jobs > 1 points are computed on a thread pool; results always
    come back in grid order.
    """

    def annotated(t: float) -> np.ndarray:
        try:
            return func(float(t))
        except SftPressureError as e:
            raise type(e)(f"{e} (at t={t:.17g})") from e

    if jobs <= 1:
        return [annotated(t) for t in t_grid]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(annotated, t_grid))


def sample_curve(
    system: SftSystem,
    base: Potential,
    direction: Potential,
    t_min: float,
    t_max: float,
    steps: int,
    jobs: int = 1,
) -> PressureCurve:
    """Sample P(φ₀ + tψ) on a uniform grid of a primitive system

    Raises:
        InputError: Fewer than 3 steps or an empty range
        NotPrimitiveError, NoConvergenceError: Annotated with the failing t
    """
    t_grid = uniform_grid(t_min, t_max, steps)

    def components_at(t: float) -> np.ndarray:
        return np.array([pressure(system, base + direction * t)])

    rows = evaluate_on_grid(components_at, t_grid, jobs)
    values = np.array([row[0] for row in rows])
    return PressureCurve(
        base=base,
        direction=direction,
        t_grid=t_grid,
        values=values,
        components=np.zeros(steps, dtype=int),
        evaluate_components=components_at,
    )


def chord_slopes(curve: PressureCurve) -> np.ndarray:
    return np.diff(curve.values) / np.diff(curve.t_grid)


def legendre(curve: PressureCurve, a_steps: int) -> ConjugateCurve:
    """Discrete conjugate I(a) = max over the grid of (a·t − P(t))

    The a-grid spans the extreme chord slopes, inflated by 1% of their
    range on each side.

    Raises:
        DegenerateRangeError: All chord slopes are equal (affine curve)
    """
    if curve.t_grid.size < 3:
        raise InputError("Conjugation needs at least 3 curve points")
    if a_steps < 2:
        raise InputError(f"Need at least 2 slope points, got {a_steps}")
    slopes = chord_slopes(curve)
    lo, hi = float(slopes.min()), float(slopes.max())
    span = hi - lo
    if span <= 1e-12 * (1.0 + abs(lo) + abs(hi)):
        raise DegenerateRangeError(
            f"Curve is affine (all chord slopes ≈ {lo:.6g}); conjugate is degenerate"
        )
    a_grid = np.linspace(lo - SLOPE_INFLATION * span, hi + SLOPE_INFLATION * span, a_steps)
    rate = _discrete_conjugate(a_grid, curve.t_grid, curve.values)
    return ConjugateCurve(a_grid=a_grid, rate=rate)


def _discrete_conjugate(
    slopes: np.ndarray, points: np.ndarray, values: np.ndarray
) -> np.ndarray:
    """max_j (slopes[i]·points[j] − values[j]) for every i, in row chunks"""
    out = np.empty(slopes.size)
    for start in range(0, slopes.size, CONJUGATE_CHUNK):
        block = slopes[start : start + CONJUGATE_CHUNK]
        out[start : start + block.size] = (
            np.outer(block, points) - values[np.newaxis, :]
        ).max(axis=1)
    return out


def biconjugate(conj: ConjugateCurve, t_grid: np.ndarray) -> np.ndarray:
    """P**(t) = max over the a-grid of (t·a − I(a))"""
    return _discrete_conjugate(np.asarray(t_grid, dtype=float), conj.a_grid, conj.rate)


def fenchel_young_gap(
    curve: PressureCurve, conj: ConjugateCurve, t: float, a: float
) -> float:
    """P(t) + I(a) − t·a with both sides linearly interpolated

    Raises:
        OutOfRangeError: t or a outside the respective grids
    """
    return curve.interpolate(t) + conj.interpolate(a) - t * a


def _richardson_one_sided(
    center: float, near: float, far: float, h: float, sign: int
) -> float:
    """Extrapolate one-sided quotients at steps h and 2h"""
    d_near = sign * (near - center) / h
    d_far = sign * (far - center) / (2 * h)
    return 2 * d_near - d_far


def subdifferential_interval(curve: PressureCurve, t: float) -> SubdiffInterval:
    """One-sided derivatives at t from steps Δ = 2h and Δ/2 = h

    h is the grid spacing. Grid points use the sampled values; other
    points use the curve's exact evaluator when it has one.

    Raises:
        TooCloseToBoundaryError: Fewer than two grid steps on either side
    """
    h = curve.spacing
    grid = curve.t_grid
    slack = 1e-9 * h
    if t - 2 * h < grid[0] - slack or t + 2 * h > grid[-1] + slack:
        raise TooCloseToBoundaryError(
            f"t={t} needs two grid steps ({h:.3g}) inside [{grid[0]}, {grid[-1]}]"
        )

    k = int(round((t - grid[0]) / h))
    if abs(grid[k] - t) <= slack:
        v = curve.values
        center, right, right2, left, left2 = v[k], v[k + 1], v[k + 2], v[k - 1], v[k - 2]
    else:
        center = curve.evaluate(t)
        right, right2 = curve.evaluate(t + h), curve.evaluate(t + 2 * h)
        left, left2 = curve.evaluate(t - h), curve.evaluate(t - 2 * h)

    return SubdiffInterval(
        t=float(t),
        lower=_richardson_one_sided(center, left, left2, h, -1),
        upper=_richardson_one_sided(center, right, right2, h, +1),
    )


def interval_at(
    evaluate: Callable[[float], float], t: float, h: float
) -> SubdiffInterval:
    """One-sided derivatives of an exactly evaluable curve at any t"""
    center = evaluate(t)
    return SubdiffInterval(
        t=float(t),
        lower=_richardson_one_sided(center, evaluate(t - h), evaluate(t - 2 * h), h, -1),
        upper=_richardson_one_sided(center, evaluate(t + h), evaluate(t + 2 * h), h, +1),
    )


def directional_derivatives(curve: PressureCurve, t: float) -> tuple[float, float]:
    """(P′(φ;ψ), P′(φ;−ψ)) at φ = φ₀ + tψ; their sum is positive at a corner"""
    interval = subdifferential_interval(curve, t)
    return interval.upper, -interval.lower


def is_phase_transition(curve: PressureCurve, t: float, rtol: float = CORNER_RTOL) -> bool:
    return subdifferential_interval(curve, t).is_corner(rtol)


@dataclass(frozen=True)
class DualitySummary:
    """Numerical checks of the conjugate pair on a common grid"""

    min_fenchel_young_gap: float
    max_biconjugate_deviation: float
    tangent_slope: float
    entropy_from_conjugate: float
    entropy_from_measure: float

    def to_dict(self) -> dict:
        return {
            "min_fenchel_young_gap": self.min_fenchel_young_gap,
            "max_biconjugate_deviation": self.max_biconjugate_deviation,
            "tangent_slope": self.tangent_slope,
            "entropy_from_conjugate": self.entropy_from_conjugate,
            "entropy_from_measure": self.entropy_from_measure,
        }


def _leading_component(
    system: SftSystem, base: Potential, direction: Potential, t: float
) -> tuple[SftSystem, list[Potential]]:
    pieces = [restrict(system, [base, direction], symbols) for symbols in system.components]
    values = [pressure(sub, b + d * t) for sub, (b, d) in pieces]
    index = int(np.argmax(values))
    logger.debug("Entropy recovery on component %d of %d", index, len(pieces))
    return pieces[index]


def entropy_recovery(
    system: SftSystem, curve: PressureCurve, conj: ConjugateCurve, t: float = 0.0
) -> tuple[float, float, float]:
    """Compare −I(a*) with the entropy of the equilibrium state at t

    a* is the a-grid point nearest the mean of ψ under the equilibrium
    state μ of φ₀ + tψ. At the tangency −I(a*) = P(t) − t·a* = h_μ + ∫φ₀ dμ,
    so the entropy read off the conjugate is −I(a*) − ∫φ₀ dμ.

    On a reducible system μ is the equilibrium state of the recurrent
    component with the largest pressure at t (the first one on ties).

    Returns:
        (a*, entropy from the conjugate, Markov entropy of μ)
    """
    if curve.base is None or curve.direction is None:
        raise InputError("Entropy recovery needs a curve built from potentials")
    base, direction = curve.base, curve.direction
    if not system.is_primitive:
        system, (base, direction) = _leading_component(system, base, direction, t)
    block_system, (phi, psi, base) = recode_together(
        system, [base + direction * t, direction, base]
    )
    eq = solve_equilibrium(block_system, phi)
    mean = measure_mean(eq.measure, psi)
    index = int(np.argmin(np.abs(conj.a_grid - mean)))
    a_star = float(conj.a_grid[index])
    recovered = -float(conj.rate[index]) - measure_mean(eq.measure, base)
    return a_star, recovered, markov_entropy(eq.measure)


def duality_summary(
    system: SftSystem, curve: PressureCurve, conj: ConjugateCurve
) -> DualitySummary:
    """Fenchel-Young gaps over all grid pairs, biconjugate deviation, entropy recovery"""
    gaps = (
        curve.values[np.newaxis, :]
        + conj.rate[:, np.newaxis]
        - np.outer(conj.a_grid, curve.t_grid)
    )
    restored = biconjugate(conj, curve.t_grid)
    deviation = np.abs(restored[1:-1] - curve.values[1:-1])
    t0 = 0.0 if curve.t_grid[0] <= 0.0 <= curve.t_grid[-1] else float(curve.t_grid[0])
    a_star, recovered, entropy = entropy_recovery(system, curve, conj, t0)
    return DualitySummary(
        min_fenchel_young_gap=float(gaps.min()),
        max_biconjugate_deviation=float(deviation.max()) if deviation.size else 0.0,
        tangent_slope=a_star,
        entropy_from_conjugate=recovered,
        entropy_from_measure=entropy,
    )
