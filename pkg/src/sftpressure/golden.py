"""Closed forms for the golden mean family φ_t = t·1_[x₀=1]

The transfer matrix ((e^t, e^t), (1, 0)) has characteristic polynomial
λ² − e^t λ − e^t, so everything about the family is explicit:

    λ(t)   = (e^t + √(e^{2t} + 4e^t)) / 2
    P′(t)  = (λ + 1) / (λ + 2)
    P″(t)  = λ(λ + 1) / (λ + 2)³

These serve as oracles for the numerical modules and as the computed
column of the summary table.
"""

import math

from sftpressure.symbolic import Potential, SftSystem, golden_mean, indicator_potential

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# Summary table of the published worked example, keyed by row label
PUBLISHED_CONSTANTS = {
    "Alphabet size N": 2.0,
    "Mixing time M": 2.0,
    "Topological entropy P(0)": 0.4812,
    "Leading eigenvalue λ(0)": 1.6180,
    "Mean P′(0; g)": 0.6180,
    "Variance P″(0; g)": 0.08944,
    "Slope P′ at t = −20 (→ 1/2)": 0.5,
    "Slope P′ at t = +20 (→ 1)": 1.0,
    "Phase transitions on [−5, 5]": 0.0,
}


def leading_eigenvalue(t: float) -> float:
    """λ(t), evaluated as e^{t/2}·(e^{t/2} + √(e^t + 4))/2 to stay finite"""
    half = math.exp(t / 2.0)
    return half * (half + math.sqrt(math.exp(t) + 4.0)) / 2.0


def pressure(t: float) -> float:
    return t / 2.0 + math.log((math.exp(t / 2.0) + math.sqrt(math.exp(t) + 4.0)) / 2.0)


def mean(t: float) -> float:
    """P′(t) = ∫g dμ_t, the frequency of symbol 1 under the equilibrium state"""
    lam = leading_eigenvalue(t)
    return (lam + 1.0) / (lam + 2.0)


def variance(t: float) -> float:
    """P″(t), the asymptotic variance of g under μ_t"""
    lam = leading_eigenvalue(t)
    return lam * (lam + 1.0) / (lam + 2.0) ** 3


def family() -> tuple[SftSystem, Potential]:
    """The golden mean shift and g = 1_[x₀=1]"""
    system = golden_mean()
    return system, indicator_potential(system, [0])
