"""Demonstration script walking through every sftpressure analysis"""

import math
import shutil
import tempfile
from pathlib import Path

from sftpressure import golden
from sftpressure.core import duality, info, phase_scan, pressure_curve, summary_table, variance
from sftpressure.parser import load_document
from sftpressure.partition import pressure_estimate_sequence
from sftpressure.phases import disjoint_union, selection_check
from sftpressure.symbolic import full_shift, golden_mean, indicator_potential

# Create temp directory for outputs
temp_dir = Path(tempfile.mkdtemp())
print(f"Using temporary directory: {temp_dir}\n")

try:
    fixtures = Path("tests/fixtures")
    gold = load_document(fixtures / "golden.json")
    union = load_document(fixtures / "golden_full2.json")

    # Step 1: Info
    print("=" * 60)
    print("STEP 1: Golden Mean Shift")
    print("=" * 60)
    info(gold)
    print()

    # Step 2: Pressure curve
    print("=" * 60)
    print("STEP 2: Pressure Curve P(t·g) on [-5, 5]")
    print("=" * 60)
    curve = pressure_curve(gold, "phi_t", -5.0, 5.0, 1001, temp_dir / "curve.csv")
    print(f"✓ P(0) = {curve.values[500]:.10f} (log φ = {math.log(golden.GOLDEN_RATIO):.10f})\n")

    # Step 3: Variance
    print("=" * 60)
    print("STEP 3: Mean and Asymptotic Variance at t = 0")
    print("=" * 60)
    stats = variance(gold, "phi_t", direction="g", output=temp_dir / "variance.json")
    print(f"✓ mean {stats['mean']:.7f}, variance {stats['variance']:.7f} (1/(5√5))\n")

    # Step 4: Duality
    print("=" * 60)
    print("STEP 4: Legendre Conjugate and Biconjugate")
    print("=" * 60)
    summary = duality(gold, "phi_t", -10.0, 10.0, 2001, output=temp_dir / "conj.csv")
    print(f"✓ entropy recovered from the conjugate: {summary['entropy_from_conjugate']:.6f}\n")

    # Step 5: Partition sums
    print("=" * 60)
    print("STEP 5: Partition Sums against the Spectral Value")
    print("=" * 60)
    system, g = golden.family()
    estimates = pressure_estimate_sequence(system, g, 10**4)
    print(f"✓ log Z_n / n at n = 10⁴: {estimates[-1].estimate:.6f}")
    print(f"  log λ(1):              {golden.pressure(1.0):.6f}\n")

    # Step 6: Phase transition
    print("=" * 60)
    print("STEP 6: Golden Mean ∪ Full 2-Shift")
    print("=" * 60)
    phase_scan(union, "golden_indicator", -5.0, 5.0, 1001, output=temp_dir / "corners.json")
    print(f"  expected corner at log(2/φ) = {math.log(2 / golden.GOLDEN_RATIO):.10f}")
    both = disjoint_union(golden_mean(), full_shift(2))
    psi = indicator_potential(both, [0, 1])
    t_star = math.log(2 / golden.GOLDEN_RATIO)
    print(f"✓ push along +ψ selects component {selection_check(both, psi * t_star, psi, 1e-3)}")
    print(f"✓ push along −ψ selects component {selection_check(both, psi * t_star, -psi, 1e-3)}\n")

    # Step 7: Summary table
    print("=" * 60)
    print("STEP 7: Golden Mean Constants")
    print("=" * 60)
    summary_table()

    print("\n" + "=" * 60)
    print("DEMO COMPLETE")
    print("=" * 60)
    print(f"\nAll output files in: {temp_dir}")

finally:
    # Cleanup
    choice = input("\nDelete temporary files? [y/N]: ")
    if choice.lower() == "y":
        shutil.rmtree(temp_dir)
        print("Temporary files deleted.")
    else:
        print(f"Temporary files kept in: {temp_dir}")
