"""sftpressure - thermodynamic formalism for subshifts of finite type

Pressure, equilibrium states, Legendre duality, asymptotic variance and
first-order phase transitions for locally constant potentials.
"""

__version__ = "0.1.0"

from sftpressure.exceptions import InputError, NumericalError, SftPressureError  # noqa: E402
from sftpressure.spectral import (  # noqa: E402
    asymptotic_variance,
    pressure,
    solve_equilibrium,
    topological_entropy,
)
from sftpressure.symbolic import (  # noqa: E402
    Potential,
    SftSystem,
    full_shift,
    golden_mean,
    indicator_potential,
    make_potential,
    make_sft,
    zero_potential,
)

__all__ = [
    "__version__",
    "InputError",
    "NumericalError",
    "SftPressureError",
    "Potential",
    "SftSystem",
    "asymptotic_variance",
    "full_shift",
    "golden_mean",
    "indicator_potential",
    "make_potential",
    "make_sft",
    "pressure",
    "solve_equilibrium",
    "topological_entropy",
    "zero_potential",
]
