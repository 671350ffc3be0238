"""Invariant suite behind the `verify` command

Each check returns a CheckResult; the suite never raises for a failed
property, only for broken inputs. Random systems, potentials and Markov
measures come from a seeded numpy Generator so runs are reproducible.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from sftpressure import golden
from sftpressure.duality import duality_summary, legendre, sample_curve
from sftpressure.exceptions import InvalidSystemError
from sftpressure.partition import pressure_estimate_sequence
from sftpressure.phases import corner_scan, disjoint_union, envelope_curve, selection_check
from sftpressure.spectral import (
    MarkovMeasure,
    asymptotic_variance,
    check_triple,
    fd_derivatives,
    markov_entropy,
    markov_measure,
    measure_mean,
    pressure,
    solve_equilibrium,
    variational_gap,
)
from sftpressure.symbolic import (
    Potential,
    SftSystem,
    coboundary,
    constant_potential,
    count_admissible_words,
    full_shift,
    golden_mean,
    indicator_potential,
    make_potential,
    make_sft,
    mixing_time,
    recode_together,
    zero_potential,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_primitive_system(rng: np.random.Generator, max_size: int = 6) -> SftSystem:
    """Draw 0/1 matrices until one is a valid primitive system"""
    while True:
        n = int(rng.integers(2, max_size + 1))
        density = rng.uniform(0.4, 0.9)
        adjacency = (rng.random((n, n)) < density).astype(int)
        try:
            system = make_sft(n, adjacency)
        except InvalidSystemError:
            continue
        if system.is_primitive:
            return system


def random_potential(
    rng: np.random.Generator, system: SftSystem, depth: Optional[int] = None, scale: float = 2.0
) -> Potential:
    if depth is None:
        depth = int(rng.integers(1, 3))
    words = system.admissible_words(depth)
    return make_potential(
        system, depth, {w: float(v) for w, v in zip(words, rng.normal(0.0, scale, len(words)))}
    )


def random_markov_measure(rng: np.random.Generator, system: SftSystem) -> MarkovMeasure:
    """Random transition weights on every allowed transition"""
    weights = rng.uniform(0.2, 1.0, system.adjacency.shape) * system.adjacency
    return markov_measure(system, weights / weights.sum(axis=1, keepdims=True))


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


class InvariantSuite:
    """The numerical properties the library promises, checked end to end

    Args:
        seed: Seed of the random systems and potentials
        systems: Number of random primitive systems
        potentials_per_system: Random potentials per system for the
            equilibrium identity
        pairs: Random potential pairs for the pressure axioms
        measures_per_system: Random Markov measures per system
        coboundaries: Random depth-1 transfer functions u
        duality_steps: Grid size of the duality check on t ∈ [−10, 10]
    """

    def __init__(
        self,
        seed: int = 0,
        systems: int = 5,
        potentials_per_system: int = 10,
        pairs: int = 200,
        measures_per_system: int = 100,
        coboundaries: int = 20,
        duality_steps: int = 2001,
    ):
        self.seed = seed
        self.systems = systems
        self.potentials_per_system = potentials_per_system
        self.pairs = pairs
        self.measures_per_system = measures_per_system
        self.coboundaries = coboundaries
        self.duality_steps = duality_steps
        self.golden, self.g = golden.family()

    def checks(self) -> list[Callable[[], CheckResult]]:
        return [
            self.check_word_counts,
            self.check_golden_entropy,
            self.check_closed_form_eigenvalue,
            self.check_spectral_residuals,
            self.check_variance,
            self.check_mean,
            self.check_slope_range,
            self.check_definition_oracle,
            self.check_duality,
            self.check_equilibrium_identity,
            self.check_pressure_axioms,
            self.check_phase_transition,
            self.check_coboundary_variance,
            self.check_variational_domination,
        ]

    def run(self) -> Iterator[CheckResult]:
        for check in self.checks():
            result = check()
            logger.info(result.line())
            yield result

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def _systems(self, salt: int) -> list[SftSystem]:
        rng = self._rng(salt)
        return [random_primitive_system(rng) for _ in range(self.systems)]

    def check_word_counts(self) -> CheckResult:
        counts = [count_admissible_words(self.golden, n) for n in range(1, 13)]
        fib = all(counts[i + 2] == counts[i + 1] + counts[i] for i in range(10))
        passed = counts[0] == 2 and counts[1] == 3 and counts[11] == 377 and fib
        return _result(
            "golden mean word counts",
            passed and mixing_time(self.golden) == 2,
            f"c(1..12)={counts}, mixing time {mixing_time(self.golden)}",
        )

    def check_golden_entropy(self) -> CheckResult:
        start = time.perf_counter()
        value = pressure(self.golden, zero_potential(self.golden))
        elapsed = time.perf_counter() - start
        error = abs(value - math.log(golden.GOLDEN_RATIO))
        return _result(
            "golden mean entropy",
            error < 1e-10,
            f"P(0)={value:.12f}, |err|={error:.2e}, {elapsed * 1e3:.2f} ms",
        )

    def check_closed_form_eigenvalue(self) -> CheckResult:
        errors = [
            abs(pressure(self.golden, self.g * t) - golden.pressure(t))
            for t in (-2.0, -1.0, 0.0, 1.0, 2.0)
        ]
        return _result(
            "closed-form eigenvalue",
            max(errors) < 1e-10,
            f"max |P − log λ(t)| over t∈{{−2..2}} = {max(errors):.2e}",
        )

    def check_spectral_residuals(self) -> CheckResult:
        failures = []
        cases = [
            (self.golden, zero_potential(self.golden)),
            (self.golden, self.g * 0.7),
        ]
        cases += [
            (system, random_potential(self._rng(2), system))
            for system in [self.golden] + self._systems(1)
        ]
        for system, potential in cases:
            eq = solve_equilibrium(system, potential)
            problem = check_triple(eq.matrix, eq.triple)
            if problem:
                failures.append(problem)
        return _result(
            "spectral residuals",
            not failures,
            "; ".join(failures) or "all residuals below 1e-12·λ",
        )

    def check_variance(self) -> CheckResult:
        eq = solve_equilibrium(self.golden, zero_potential(self.golden))
        gk = asymptotic_variance(eq.measure, self.g, eq.triple.gap_estimate)
        fd = fd_derivatives(self.golden, zero_potential(self.golden), self.g).second
        exact = 1.0 / (5.0 * math.sqrt(5.0))
        return _result(
            "asymptotic variance",
            abs(gk - exact) < 1e-7 and abs(gk - fd) < 1e-5,
            f"Green-Kubo {gk:.10f}, curvature {fd:.10f}, 1/(5√5) = {exact:.10f}",
        )

    def check_mean(self) -> CheckResult:
        eq = solve_equilibrium(self.golden, zero_potential(self.golden))
        mean = measure_mean(eq.measure, self.g)
        fd = fd_derivatives(self.golden, zero_potential(self.golden), self.g).first
        return _result(
            "mean equals derivative",
            abs(mean - fd) < 1e-8 and abs(mean - 0.7236067977) < 1e-8,
            f"∫g dμ = {mean:.10f}, FD slope {fd:.10f} "
            f"(published table lists 1/φ = {1 / golden.GOLDEN_RATIO:.4f}, inconsistent with λ(t))",
        )

    def check_slope_range(self) -> CheckResult:
        zero = zero_potential(self.golden)
        low = fd_derivatives(self.golden, zero, self.g, t=-20.0).first
        high = fd_derivatives(self.golden, zero, self.g, t=20.0).first
        return _result(
            "slope range",
            abs(low - 0.5) < 1e-3 and abs(high - 1.0) < 1e-3,
            f"P′(−20) = {low:.6f}, P′(+20) = {high:.6f}",
        )

    def check_definition_oracle(self) -> CheckResult:
        details = []
        passed = True
        for t in (0.0, 1.0):
            start = time.perf_counter()
            results = pressure_estimate_sequence(self.golden, self.g * t, 10**4)
            elapsed = time.perf_counter() - start
            error = abs(results[-1].estimate - golden.pressure(t))
            passed &= error < 1e-3
            details.append(f"t={t:g}: |err|={error:.2e} ({elapsed:.2f} s)")
        return _result("partition-sum oracle", passed, ", ".join(details))

    def check_duality(self) -> CheckResult:
        zero = zero_potential(self.golden)
        curve = sample_curve(self.golden, zero, self.g, -10.0, 10.0, self.duality_steps)
        conj = legendre(curve, self.duality_steps)
        summary = duality_summary(self.golden, curve, conj)
        entropy_error = abs(summary.entropy_from_conjugate - math.log(golden.GOLDEN_RATIO))
        passed = (
            summary.min_fenchel_young_gap >= -1e-10
            and summary.max_biconjugate_deviation < 5e-4
            and entropy_error < 2e-3
        )
        return _result(
            "Legendre-Fenchel duality",
            passed,
            f"min FY gap {summary.min_fenchel_young_gap:.2e}, "
            f"max |P** − P| {summary.max_biconjugate_deviation:.2e}, "
            f"|−I(a*) − log φ| {entropy_error:.2e}",
        )

    def check_equilibrium_identity(self) -> CheckResult:
        rng = self._rng(3)
        worst = 0.0
        for system in self._systems(4):
            for _ in range(self.potentials_per_system):
                phi = random_potential(rng, system)
                eq = solve_equilibrium(system, phi)
                free_energy = markov_entropy(eq.measure) + measure_mean(eq.measure, phi)
                worst = max(worst, abs(free_energy - eq.pressure))
        return _result(
            "equilibrium identity",
            worst < 1e-10,
            f"max |h + ∫φ − P| = {worst:.2e}",
        )

    def check_pressure_axioms(self) -> CheckResult:
        rng = self._rng(5)
        systems = self._systems(6)
        violations = {
            "monotonicity": 0.0,
            "lipschitz": 0.0,
            "translation": 0.0,
            "cocycle": 0.0,
            "convexity": 0.0,
        }
        for k in range(self.pairs):
            system = systems[k % len(systems)]
            phi, psi = random_potential(rng, system), random_potential(rng, system)
            p_phi, p_psi = pressure(system, phi), pressure(system, psi)

            bump = random_potential(rng, system, depth=phi.depth)
            bigger = phi + make_potential(
                system, phi.depth, {w: abs(v) for w, v in bump.table.items()}
            )
            violations["monotonicity"] = max(
                violations["monotonicity"], p_phi - pressure(system, bigger)
            )
            violations["lipschitz"] = max(
                violations["lipschitz"], abs(p_phi - p_psi) - (phi - psi).sup_norm()
            )
            c = float(rng.normal(0.0, 3.0))
            violations["translation"] = max(
                violations["translation"], abs(pressure(system, phi + c) - p_phi - c)
            )
            u = random_potential(rng, system, depth=1)
            violations["cocycle"] = max(
                violations["cocycle"], abs(pressure(system, phi + coboundary(u)) - p_phi)
            )
            violations["convexity"] = max(
                violations["convexity"],
                pressure(system, (phi + psi) * 0.5) - 0.5 * (p_phi + p_psi),
            )

        limits = {
            "monotonicity": 1e-12,
            "lipschitz": 1e-12,
            "translation": 1e-12,
            "cocycle": 1e-10,
            "convexity": 1e-12,
        }
        passed = all(violations[k] <= limits[k] for k in limits)
        detail = ", ".join(f"{k} {v:.1e}" for k, v in violations.items())
        return _result("pressure axioms", passed, detail)

    def check_phase_transition(self) -> CheckResult:
        gold = golden_mean()
        system = disjoint_union(gold, full_shift(2))
        psi = indicator_potential(system, [0, 1])
        zero = zero_potential(system)
        curve = envelope_curve(system, zero, psi, -1.0, 1.0, 1001)
        corners = corner_scan(curve)
        expected = math.log(2.0 / golden.GOLDEN_RATIO)
        if len(corners) != 1:
            return _result("phase transition", False, f"found {len(corners)} corners")
        corner = corners[0]
        selections = {
            selection_check(system, psi * corner.t_star, psi, 10.0**-k) for k in range(1, 7)
        }
        passed = (
            abs(corner.t_star - expected) < 1e-6
            and abs(corner.jump - 1.0) < 1e-3
            and selections == {(0,)}
        )
        return _result(
            "phase transition",
            passed,
            f"t* = {corner.t_star:.10f} (log(2/φ) = {expected:.10f}), "
            f"jump {corner.jump:.6f}, selected {sorted(selections)}",
        )

    def check_coboundary_variance(self) -> CheckResult:
        rng = self._rng(7)
        worst = 0.0
        for _ in range(self.coboundaries):
            u = random_potential(rng, self.golden, depth=1)
            c = constant_potential(self.golden, float(rng.normal()))
            observable = coboundary(u) + c
            block, (phi, g) = recode_together(self.golden, [self.g * 0.3, observable])
            eq = solve_equilibrium(block, phi)
            worst = max(worst, asymptotic_variance(eq.measure, g, eq.triple.gap_estimate))
        return _result(
            "coboundary degeneracy",
            worst < 1e-8,
            f"max σ²(u∘σ − u + c) = {worst:.2e}",
        )

    def check_variational_domination(self) -> CheckResult:
        rng = self._rng(8)
        worst = math.inf
        separation_failures = 0
        for system in self._systems(9):
            phi = random_potential(rng, system)
            eq = solve_equilibrium(system, phi)
            for _ in range(self.measures_per_system):
                measure = random_markov_measure(rng, system)
                gap = variational_gap(system, phi, measure)
                worst = min(worst, gap)
                if np.abs(measure.p - eq.measure.p).max() > 0.05 and gap <= 1e-4:
                    separation_failures += 1

        example = markov_measure(self.golden, [[0.5, 0.5], [1.0, 0.0]])
        example_gap = variational_gap(self.golden, zero_potential(self.golden), example)
        passed = (
            worst >= -1e-10
            and separation_failures == 0
            and abs(example_gap - 0.0191137) < 1e-6
        )
        return _result(
            "variational domination",
            passed,
            f"min gap {worst:.2e}, {separation_failures} weak separations, "
            f"p₁₁=1/2 gap {example_gap:.7f}",
        )


def run_suite(suite: Optional[InvariantSuite] = None) -> list[CheckResult]:
    return list((suite or InvariantSuite()).run())
