"""Coexisting phases on reducible systems

Invariant measures of a reducible SFT live on its recurrent components,
so the pressure is the maximum of the component pressures and the
equilibrium states at φ are the component equilibria attaining it.
Where two components swap the lead along a family φ₀ + tψ the pressure
has a corner whose slope jump is the difference of their ψ-means.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from sftpressure.duality import (
    CORNER_RTOL,
    PressureCurve,
    evaluate_on_grid,
    interval_at,
    subdifferential_interval,
    uniform_grid,
)
from sftpressure.exceptions import (
    InputError,
    NoCoexistenceError,
    PeriodicComponentError,
)
from sftpressure.spectral import MarkovMeasure, measure_mean, pressure, solve_equilibrium
from sftpressure.symbolic import (
    Potential,
    SftSystem,
    make_sft,
    recode_together,
    restrict,
    zero_potential,
)

logger = logging.getLogger(__name__)

BISECTION_TOL = 1e-13
BISECTION_MAX_ITER = 200
TIE_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ComponentReport:
    """Equilibrium data of one recurrent component

    Attributes:
        component_index: Position in system.components (0-based)
        symbols: Symbols of the component in the full alphabet
        pressure: Pressure of the restricted potential
        mean_direction: ∫ψ dμ for the component's equilibrium state
        measure: Equilibrium Markov measure on the (possibly recoded)
                 restricted system
    """

    component_index: int
    symbols: tuple[int, ...]
    pressure: float
    mean_direction: float
    measure: MarkovMeasure


@dataclass(frozen=True)
class CornerReport:
    """A detected first-order phase transition along a family"""

    t_star: float
    jump: float
    left_phase: int
    right_phase: int

    def to_dict(self) -> dict:
        return {
            "t_star": self.t_star,
            "jump": self.jump,
            "left_phase": self.left_phase,
            "right_phase": self.right_phase,
        }


def disjoint_union(a: SftSystem, b: SftSystem) -> SftSystem:
    """Block-diagonal union; symbols of b follow those of a"""
    n = a.alphabet_size + b.alphabet_size
    adjacency = np.zeros((n, n), dtype=int)
    adjacency[: a.alphabet_size, : a.alphabet_size] = a.adjacency
    adjacency[a.alphabet_size :, a.alphabet_size :] = b.adjacency
    return make_sft(n, adjacency)


def _check_aperiodic(system: SftSystem) -> None:
    graph = system.graph()
    for index, symbols in enumerate(system.components):
        if not nx.is_aperiodic(graph.subgraph(symbols)):
            raise PeriodicComponentError(
                f"Component {index} (symbols {[s + 1 for s in symbols]}) is periodic"
            )


class _Components:
    """Restrictions of a family φ₀ + tψ to each recurrent component"""

    def __init__(self, system: SftSystem, base: Potential, direction: Potential):
        _check_aperiodic(system)
        self.system = system
        self.pieces = [
            restrict(system, [base, direction], symbols) for symbols in system.components
        ]
        logger.debug("System has %d recurrent components", len(self.pieces))

    def __len__(self) -> int:
        return len(self.pieces)

    def pressures(self, t: float) -> np.ndarray:
        return np.array(
            [pressure(sub, base + direction * t) for sub, (base, direction) in self.pieces]
        )

    def reports(self, t: float) -> list[ComponentReport]:
        out = []
        for index, (sub, (base, direction)) in enumerate(self.pieces):
            block, (phi, psi) = recode_together(sub, [base + direction * t, direction])
            eq = solve_equilibrium(block, phi)
            out.append(
                ComponentReport(
                    component_index=index,
                    symbols=self.system.components[index],
                    pressure=eq.pressure,
                    mean_direction=measure_mean(eq.measure, psi),
                    measure=eq.measure,
                )
            )
        return out


def component_pressures(
    system: SftSystem, potential: Potential, direction: Optional[Potential] = None
) -> list[ComponentReport]:
    """Per-component pressure, equilibrium state and mean of a direction

    Transient symbols between components carry no invariant measure and
    are dropped.

    Raises:
        PeriodicComponentError: A recurrent component is periodic
    """
    if direction is None:
        direction = zero_potential(system)
    return _Components(system, potential, direction).reports(0.0)


def winners(values: Sequence[float], rtol: float = TIE_RTOL) -> tuple[int, ...]:
    """Indices attaining the maximum, up to a relative tie tolerance"""
    values = np.asarray(values)
    top = float(values.max())
    return tuple(int(i) for i in np.flatnonzero(values >= top - rtol * (1.0 + abs(top))))


def envelope_curve(
    system: SftSystem,
    base: Potential,
    direction: Potential,
    t_min: float,
    t_max: float,
    steps: int,
    jobs: int = 1,
) -> PressureCurve:
    """Sample max over components of P(φ₀ + tψ) and record the winner"""
    t_grid = uniform_grid(t_min, t_max, steps)
    family = _Components(system, base, direction)
    rows = np.array(evaluate_on_grid(family.pressures, t_grid, jobs))
    return PressureCurve(
        base=base,
        direction=direction,
        t_grid=t_grid,
        values=rows.max(axis=1),
        components=rows.argmax(axis=1),
        evaluate_components=family.pressures,
    )


def _bisect_switch(curve: PressureCurve, lo: float, hi: float, left: int, right: int) -> float:
    """Locate where component `right` overtakes component `left`"""
    evaluate = curve.evaluate_components
    assert evaluate is not None

    def lead(t: float) -> float:
        values = evaluate(t)
        return float(values[right] - values[left])

    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= BISECTION_TOL * (1.0 + abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        if lead(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _flag_groups(flags: list[int]) -> list[list[int]]:
    groups: list[list[int]] = []
    for k in flags:
        if groups and k == groups[-1][-1] + 1:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def corner_scan(curve: PressureCurve, threshold: float = CORNER_RTOL) -> list[CornerReport]:
    """Find corners of a sampled pressure curve

    Every interior grid point with two neighbours on each side is tested;
    adjacent flagged points form one corner. When the winning component
    changes across a flagged group, the corner is localized by bisection
    on the switch and its one-sided slopes are recomputed there.
    """
    n = curve.t_grid.size
    h = curve.spacing
    intervals = {k: subdifferential_interval(curve, float(curve.t_grid[k])) for k in range(2, n - 2)}
    flags = [k for k, iv in intervals.items() if iv.is_corner(threshold)]

    corners = []
    for group in _flag_groups(flags):
        lo_k, hi_k = max(group[0] - 2, 0), min(group[-1] + 2, n - 1)
        lo, hi = float(curve.t_grid[lo_k]), float(curve.t_grid[hi_k])
        components = curve.components
        left = int(components[lo_k]) if components is not None else 0
        right = int(components[hi_k]) if components is not None else 0

        if curve.evaluate_components is not None and left != right:
            t_star = _bisect_switch(curve, lo, hi, left, right)
            interval = interval_at(curve.evaluate, t_star, h)
        else:
            k = max(group, key=lambda j: intervals[j].width)
            interval = intervals[k]
            t_star = interval.t

        if not interval.is_corner(threshold):
            continue
        corners.append(
            CornerReport(
                t_star=t_star,
                jump=interval.width,
                left_phase=left,
                right_phase=right,
            )
        )
    logger.debug("Corner scan found %d corner(s)", len(corners))
    return corners


def selection_check(
    system: SftSystem, base: Potential, direction: Potential, t_small: float
) -> tuple[int, ...]:
    """Components selected by a small push along the direction

    At a coexistence point the equilibrium states of φ₀ + tψ for small
    t > 0 concentrate on the coexisting components maximizing ∫ψ dμᵢ.

    Returns:
        Indices of the components winning at φ₀ + t_small·ψ; more than one
        index means the push does not break the tie

    Raises:
        NoCoexistenceError: Fewer than two components attain P(φ₀)
    """
    if t_small <= 0.0:
        raise InputError(f"t_small must be positive, got {t_small}")
    family = _Components(system, base, direction)
    at_base = family.pressures(0.0)
    coexisting = winners(at_base)
    if len(coexisting) < 2:
        raise NoCoexistenceError(
            f"Only component {coexisting[0]} attains the pressure {at_base.max():.12g}"
        )
    pushed = family.pressures(t_small)[list(coexisting)]
    selected = tuple(coexisting[i] for i in winners(pushed))
    if len(selected) > 1:
        logger.info("Selection tie between components %s", selected)
    return selected
