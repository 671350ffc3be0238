"""Command implementations for sftpressure

Each function runs one analysis on a loaded document and emits its
artifact:
- pressure_curve: Sample t ↦ P(φ₀ + tψ) to CSV
- duality: Legendre conjugate, biconjugate and duality summary
- variance: Mean, Green-Kubo variance and finite-difference cross-check
- partition: Partition-sum estimates against the spectral pressure
- phase_scan: Corner report of a pressure curve
- info: System summary
- summary_table: The golden mean constants beside their published values

An artifact goes to `output` when given ("Created: <path>" on stdout),
otherwise its text is printed.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from sftpressure import golden
from sftpressure.duality import (
    PressureCurve,
    biconjugate,
    duality_summary,
    legendre,
    sample_curve,
    subdifferential_interval,
)
from sftpressure.exceptions import InputError
from sftpressure.parser import SftDocument, format_word
from sftpressure.partition import pressure_estimate_sequence
from sftpressure.phases import component_pressures, corner_scan, envelope_curve
from sftpressure.spectral import (
    asymptotic_variance,
    equilibrium_observable_stats,
    fd_derivatives,
    measure_mean,
    pressure,
    solve_equilibrium,
    topological_entropy,
)
from sftpressure.symbolic import Potential, mixing_time, recode_together, zero_potential
from sftpressure.utils import (
    TABLE_DIGITS,
    format_float,
    read_csv,
    sibling_path,
    to_csv,
    to_json,
    write_text,
)

logger = logging.getLogger(__name__)

COVARIANCE_LAGS = 10
TABLE_RTOL = 1e-3


def emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        print(text, end="")
        return
    write_text(output, text)
    print(f"Created: {output}")


def family(
    doc: SftDocument, potential: str, base: Optional[str] = None
) -> tuple[Potential, Potential]:
    """(φ₀, ψ) for the family φ₀ + tψ; φ₀ defaults to zero"""
    direction = doc.potential(potential)
    phi0 = doc.potential(base) if base else zero_potential(doc.system)
    return phi0, direction


def build_curve(
    doc: SftDocument,
    potential: str,
    t_min: float,
    t_max: float,
    steps: int,
    base: Optional[str] = None,
    jobs: int = 1,
) -> PressureCurve:
    """Sample the family, taking the component envelope on reducible systems"""
    phi0, direction = family(doc, potential, base)
    if doc.system.is_primitive:
        return sample_curve(doc.system, phi0, direction, t_min, t_max, steps, jobs)
    logger.info(
        "System is reducible (%d recurrent components); sampling the envelope",
        len(doc.system.components),
    )
    return envelope_curve(doc.system, phi0, direction, t_min, t_max, steps, jobs)


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return to_json([dict(zip(header, row)) for row in rows])
    return to_csv(header, rows)


def curve_text(curve: PressureCurve, fmt: str = "csv") -> str:
    rows = [[float(t), float(p)] for t, p in zip(curve.t_grid, curve.values)]
    return _table(["t", "pressure"], rows, fmt)


def load_curve(path: Path) -> PressureCurve:
    """Read a "t,pressure" CSV back into a data-only curve

    Raises:
        InputError: Wrong header or fewer than 3 rows
    """
    header, rows = read_csv(path)
    if header != ["t", "pressure"]:
        raise InputError(f"{path}: expected header t,pressure, got {','.join(header)}")
    if rows.shape[0] < 3:
        raise InputError(f"{path}: a curve needs at least 3 rows")
    return PressureCurve(base=None, direction=None, t_grid=rows[:, 0], values=rows[:, 1])


def pressure_curve(
    doc: SftDocument,
    potential: str,
    t_min: float,
    t_max: float,
    steps: int,
    output: Optional[Path] = None,
    base: Optional[str] = None,
    jobs: int = 1,
    fmt: str = "csv",
) -> PressureCurve:
    """Write the pressure curve t ↦ P(φ₀ + t·potential)

    Example:
        pressure_curve(doc, "phi_t", -5, 5, 1001, Path("curve.csv"))
    """
    curve = build_curve(doc, potential, t_min, t_max, steps, base, jobs)
    emit(curve_text(curve, fmt), output)
    return curve


def duality(
    doc: SftDocument,
    potential: str,
    t_min: float,
    t_max: float,
    steps: int,
    a_steps: Optional[int] = None,
    output: Optional[Path] = None,
    base: Optional[str] = None,
    at: float = 0.0,
    jobs: int = 1,
    fmt: str = "csv",
) -> dict:
    """Conjugate I(a), biconjugate P**(t) and the duality summary

    With an output path three artifacts are written: the conjugate at
    `output`, "t,pressure,biconjugate" at <stem>_biconjugate and the
    summary JSON at <stem>_summary.json. Without one only the summary
    is printed.

    Returns:
        The summary dictionary, including the subdifferential at `at`
    """
    curve = build_curve(doc, potential, t_min, t_max, steps, base, jobs)
    conj = legendre(curve, a_steps or steps)
    restored = biconjugate(conj, curve.t_grid)

    summary = duality_summary(doc.system, curve, conj).to_dict()
    summary["subdifferential"] = subdifferential_interval(curve, at).to_dict()

    if output is not None:
        conj_rows = [[float(a), float(r)] for a, r in zip(conj.a_grid, conj.rate)]
        emit(_table(["a", "rate"], conj_rows, fmt), output)
        bi_rows = [
            [float(t), float(p), float(b)]
            for t, p, b in zip(curve.t_grid, curve.values, restored)
        ]
        emit(
            _table(["t", "pressure", "biconjugate"], bi_rows, fmt),
            sibling_path(output, "_biconjugate"),
        )
        emit(to_json(summary), sibling_path(output, "_summary").with_suffix(".json"))
    else:
        emit(to_json(summary), None)
    return summary


def variance(
    doc: SftDocument,
    potential: str,
    direction: Optional[str] = None,
    at: float = 0.0,
    base: Optional[str] = None,
    tol: float = 1e-12,
    output: Optional[Path] = None,
) -> dict:
    """Statistics of an observable under the equilibrium state of φ₀ + at·potential

    The observable defaults to the potential itself, so the mean and
    variance are P′ and P″ of the family at `at`.
    """
    phi0, psi = family(doc, potential, base)
    observable = doc.potential(direction) if direction else psi
    phi = phi0 + psi * at

    stats = equilibrium_observable_stats(doc.system, phi, observable, COVARIANCE_LAGS, tol)
    fd = fd_derivatives(doc.system, phi, observable)
    covariances = stats.pop("covariances")
    result = {"t": at, **stats, "fd_mean": fd.first, "fd_variance": fd.second}
    result["covariances"] = covariances
    emit(to_json(result), output)
    return result


def partition(
    doc: SftDocument,
    potential: str,
    n_max: int,
    at: float = 1.0,
    base: Optional[str] = None,
    output: Optional[Path] = None,
    fmt: str = "csv",
) -> list[list]:
    """Partition-sum estimates log Z_n / n for n = 1 … n_max"""
    phi0, psi = family(doc, potential, base)
    phi = phi0 + psi * at
    system = doc.system
    if phi.depth > 2:
        system, (phi,) = recode_together(system, [phi])
    spectral = pressure(system, phi)
    rows = [
        [r.n, r.log_sum, r.estimate, abs(r.estimate - spectral)]
        for r in pressure_estimate_sequence(system, phi, n_max)
    ]
    emit(_table(["n", "log_sum", "estimate", "abs_err_vs_spectral"], rows, fmt), output)
    return rows


def phase_scan(
    doc: SftDocument,
    potential: str,
    t_min: float,
    t_max: float,
    steps: int,
    base: Optional[str] = None,
    threshold: float = 1e-3,
    jobs: int = 1,
    output: Optional[Path] = None,
) -> list[dict]:
    """Corners of the family's pressure curve as a JSON array"""
    curve = build_curve(doc, potential, t_min, t_max, steps, base, jobs)
    corners = [c.to_dict() for c in corner_scan(curve, threshold)]
    emit(to_json(corners), output)
    return corners


def system_info(doc: SftDocument) -> dict:
    system = doc.system
    info: dict = {
        "alphabet_size": system.alphabet_size,
        "scc_count": system.scc_count,
        "components": [[s + 1 for s in symbols] for symbols in system.components],
        "primitive": system.is_primitive,
        "topological_entropy": topological_entropy(system),
    }
    if system.is_primitive:
        info["mixing_time"] = mixing_time(system)
    else:
        info["component_entropies"] = [
            r.pressure for r in component_pressures(system, zero_potential(system))
        ]
    info["potentials"] = {name: p.depth for name, p in doc.potentials.items()}
    return info


def info(doc: SftDocument, output: Optional[Path] = None, fmt: str = "text") -> dict:
    """Print SCCs, primitivity, entropy and mixing time of the document's system"""
    summary = system_info(doc)
    if fmt == "json":
        emit(to_json(summary), output)
        return summary

    system = doc.system
    lines = [
        f"Alphabet size: {system.alphabet_size}",
        "Adjacency:",
        *(f"  {' '.join(str(int(v)) for v in row)}" for row in system.adjacency),
        f"Strongly connected components: {system.scc_count}",
        "Recurrent components: "
        + "; ".join(
            "{" + ", ".join(format_word([s], system.alphabet_size) for s in symbols) + "}"
            for symbols in system.components
        ),
        f"Primitive: {'yes' if system.is_primitive else 'no'}",
        f"Topological entropy: {format_float(summary['topological_entropy'])}",
    ]
    if "mixing_time" in summary:
        lines.append(f"Mixing time: {summary['mixing_time']}")
    for k, value in enumerate(summary.get("component_entropies", [])):
        lines.append(f"  Component {k} entropy: {format_float(value)}")
    for name, depth in summary["potentials"].items():
        lines.append(f"Potential {name}: depth {depth}")
    emit("\n".join(lines) + "\n", output)
    return summary


@dataclass(frozen=True)
class TableRow:
    label: str
    computed: float
    published: float
    note: str = ""

    @property
    def disagrees(self) -> bool:
        return abs(self.computed - self.published) > TABLE_RTOL * max(1.0, abs(self.published))


def summary_rows() -> list[TableRow]:
    """Golden mean constants computed by the library, beside the published table"""
    system, g = golden.family()
    zero = zero_potential(system)
    eq = solve_equilibrium(system, zero)
    curve = sample_curve(system, zero, g, -5.0, 5.0, 1001)
    computed = {
        "Alphabet size N": float(system.alphabet_size),
        "Mixing time M": float(mixing_time(system)),
        "Topological entropy P(0)": eq.pressure,
        "Leading eigenvalue λ(0)": eq.triple.lam,
        "Mean P′(0; g)": measure_mean(eq.measure, g),
        "Variance P″(0; g)": asymptotic_variance(eq.measure, g, eq.triple.gap_estimate),
        "Slope P′ at t = −20 (→ 1/2)": fd_derivatives(system, zero, g, t=-20.0).first,
        "Slope P′ at t = +20 (→ 1)": fd_derivatives(system, zero, g, t=20.0).first,
        "Phase transitions on [−5, 5]": float(len(corner_scan(curve))),
    }
    rows = []
    for label, published in golden.PUBLISHED_CONSTANTS.items():
        note = ""
        if label.startswith("Mean"):
            note = (
                f"published value is 1/φ; λ′(0)/λ(0) from λ² − e^t·λ − e^t = 0 "
                f"gives (λ+1)/(λ+2) = {format_float(golden.mean(0.0), TABLE_DIGITS)}"
            )
        rows.append(TableRow(label, computed[label], published, note))
    for row in rows:
        if row.disagrees:
            logger.warning("%s: computed %.7g, published %.7g", row.label, row.computed, row.published)
    return rows


def summary_table(output: Optional[Path] = None) -> list[TableRow]:
    """Print the constants table at 7 significant digits with discrepancy flags"""
    rows = summary_rows()
    width = max(len(r.label) for r in rows)
    lines = [f"{'Quantity':<{width}}  {'Computed':>12}  {'Published':>10}  Status"]
    for row in rows:
        value = (
            str(int(row.computed))
            if float(row.computed).is_integer() and abs(row.computed) < 1e6
            else format_float(row.computed, TABLE_DIGITS)
        )
        status = "DISAGREES" if row.disagrees else "ok"
        line = f"{row.label:<{width}}  {value:>12}  {row.published:>10g}  {status}"
        if row.disagrees and row.note:
            line += f"  ({row.note})"
        lines.append(line)
    emit("\n".join(lines) + "\n", output)
    return rows

